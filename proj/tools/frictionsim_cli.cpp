// frictionsim: headless front end for the friction simulator.
//
//   frictionsim simulate  [--scenario FILE] (--script FILE | --force N | --ramp N_PER_S) [--duration S] [--out CSV]
//   frictionsim breakaway --sweep mu_s=A:B:N|angle_deg=A:B:N [--scenario FILE] [--ramp-rate N_PER_S] [--out CSV]
//   frictionsim pulley    --m1 KG --m2 KG --angle-deg DEG --mu-s X --mu-k X [--g G]
//   frictionsim gain      --scores CSV
//   frictionsim ttest     --scores CSV
//   frictionsim serve     [--scenario FILE] [--addr HOST:PORT] [--record-dir DIR]
//
// Exit codes: 0 success, 1 runtime error, 2 usage, parse or validation error.

#include <atomic>
#include <chrono>
#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "frictionsim/assessment.hpp"
#include "frictionsim/errors.hpp"
#include "frictionsim/haptics.hpp"
#include "frictionsim/pulley.hpp"
#include "frictionsim/scenario.hpp"
#include "frictionsim/service.hpp"
#include "frictionsim/session.hpp"
#include "frictionsim/sweep.hpp"

namespace fs = frictionsim;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;
constexpr double kDefaultDuration = 10.0;

// Input problems (bad files, bad values) map to the usage exit code.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out << content;
}

fs::Scenario scenario_from(const std::string& path) {
  return path.empty() ? fs::default_scenario() : fs::load_scenario(read_file(path));
}

std::string fmt9(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

struct SimulateArgs {
  std::string scenario, script, out;
  double force = 0.0, ramp = 0.0, duration = -1.0;
};

int cmd_simulate(const SimulateArgs& a, const CLI::App& sub) {
  fs::Scenario scenario = scenario_from(a.scenario);
  if (sub.count("--duration")) {
    scenario.duration = a.duration;
  } else if (!scenario.duration) {
    scenario.duration = kDefaultDuration;
  }
  fs::validate(scenario);

  std::unique_ptr<fs::InputSource> device;
  if (sub.count("--script")) {
    device = std::make_unique<fs::ScriptedDevice>(fs::ScriptedDevice::from_json(read_file(a.script)));
  } else if (sub.count("--ramp")) {
    device = std::make_unique<fs::ForceProfile>(fs::ForceProfile::ramp(a.ramp));
  } else {
    device = std::make_unique<fs::ForceProfile>(fs::ForceProfile::constant(a.force));
  }

  const fs::Trajectory log = fs::run(scenario, *device);
  if (!a.out.empty()) write_output(a.out, fs::to_csv(log.samples));

  const auto& last = log.samples.back();
  const auto breakaway = fs::find_breakaway(log.samples);
  std::cout << "final s=" << fmt9(last.s) << " v=" << fmt9(last.v) << " mode=" << fs::to_string(last.mode)
            << " breakaway_t=" << (breakaway ? fmt9(log.samples[*breakaway].t) : std::string("none"))
            << " samples=" << log.samples.size() << '\n';
  return kExitOk;
}

int cmd_breakaway(const std::string& sweep, const std::string& scenario_path, double ramp_rate,
                  const std::string& out) {
  const fs::SweepSpec spec = fs::parse_sweep(sweep);
  const fs::Scenario scenario = scenario_from(scenario_path);
  write_output(out, fs::to_csv(fs::run_breakaway_sweep(spec, scenario.scene, ramp_rate)));
  return kExitOk;
}

int cmd_pulley(fs::PulleyProblem problem, double angle_deg) {
  problem.angle = fs::degrees_to_radians(angle_deg);
  fs::validate(problem);
  const fs::PulleySolution sol = fs::solve(problem);
  json doc = {{"regime", fs::to_string(sol.regime)},
              {"acceleration", sol.acceleration},
              {"tension", sol.tension},
              {"friction", sol.friction}};
  if (sol.warning) doc["warning"] = *sol.warning;
  std::cout << doc.dump() << '\n';
  return kExitOk;
}

int cmd_gain(const std::string& path) {
  const fs::GainReport report = fs::gain_report(fs::parse_gain_csv(read_file(path)));
  json students = json::array();
  for (const auto& row : report.rows) {
    json r = {{"student_id", row.student_id}, {"gain", row.gain}};
    if (row.group) r["group"] = *row.group;
    students.push_back(std::move(r));
  }
  json doc = {{"students", students}, {"mean_gain", report.mean_gain}};
  if (!report.group_means.empty()) doc["group_means"] = report.group_means;
  std::cout << doc.dump() << '\n';
  return kExitOk;
}

int cmd_ttest(const std::string& path) {
  const fs::GroupScores groups = fs::parse_group_csv(read_file(path));
  const fs::TTestResult r = fs::welch_t(groups.a, groups.b);
  std::cout << json{{"t", r.t}, {"df", r.df}, {"p_two_tailed", r.p_two_tailed}}.dump() << '\n';
  return kExitOk;
}

std::atomic<bool> g_interrupted{false};

int cmd_serve(const std::string& scenario_path, const std::string& addr, const std::string& record_dir) {
  fs::ServiceOptions options;
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw UsageError("--addr must be host:port");
  options.host = addr.substr(0, colon);
  try {
    const int port = std::stoi(addr.substr(colon + 1));
    if (port < 0 || port > 65535) throw std::out_of_range("port");
    options.port = static_cast<unsigned short>(port);
  } catch (const std::exception&) {
    throw UsageError("invalid port in --addr '" + addr + "'");
  }
  options.record_dir = record_dir;

  fs::Service service(scenario_from(scenario_path), options);
  service.start();
  std::cout << "listening on ws://" << service.address() << std::endl;

  std::signal(SIGINT, [](int) { g_interrupted = true; });
  std::signal(SIGTERM, [](int) { g_interrupted = true; });
  while (!g_interrupted) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  service.stop();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Stick-slip friction simulator"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Run a scenario and write its trajectory CSV");
  simulate->add_option("--scenario", sim.scenario, "Scenario JSON file");
  auto* script_opt = simulate->add_option("--script", sim.script, "Device script: JSON [[t, coord], ...]");
  auto* force_opt = simulate->add_option("--force", sim.force, "Constant force on the block (N, +up-slope)");
  auto* ramp_opt = simulate->add_option("--ramp", sim.ramp, "Force ramp from 0 (N/s)");
  script_opt->excludes(force_opt)->excludes(ramp_opt);
  force_opt->excludes(ramp_opt);
  simulate->add_option("--duration", sim.duration, "Simulated seconds (default: scenario, else 10)");
  simulate->add_option("--out", sim.out, "Trajectory CSV output");

  std::string sweep, sweep_scenario, sweep_out;
  double ramp_rate = fs::kDefaultRampRate;
  auto* breakaway = app.add_subcommand("breakaway", "Measure breakaway force over a parameter sweep");
  breakaway->add_option("--sweep", sweep, "mu_s=A:B:N or angle_deg=A:B:N")->required();
  breakaway->add_option("--scenario", sweep_scenario, "Base scenario JSON file");
  breakaway->add_option("--ramp-rate", ramp_rate, "Force ramp rate (N/s)")->check(CLI::PositiveNumber);
  breakaway->add_option("--out", sweep_out, "CSV output (default stdout)");

  fs::PulleyProblem problem;
  double angle_deg = 0.0;
  auto* pulley = app.add_subcommand("pulley", "Solve the block-and-hanging-mass pulley problem");
  pulley->add_option("--m1", problem.m1, "Block mass on the incline (kg)")->required();
  pulley->add_option("--m2", problem.m2, "Hanging mass (kg)")->required();
  pulley->add_option("--angle-deg", angle_deg, "Incline angle (degrees)")->required();
  pulley->add_option("--mu-s", problem.mu_static, "Static friction coefficient")->required();
  pulley->add_option("--mu-k", problem.mu_kinetic, "Kinetic friction coefficient")->required();
  pulley->add_option("--g", problem.gravity, "Gravity (m/s^2)");

  std::string gain_scores, ttest_scores;
  auto* gain = app.add_subcommand("gain", "Normalized gains from student_id,test2,test3 scores");
  gain->add_option("--scores", gain_scores, "Score CSV")->required();
  auto* ttest = app.add_subcommand("ttest", "Welch t-test on group,score data");
  ttest->add_option("--scores", ttest_scores, "Score CSV")->required();

  std::string serve_scenario, addr = "127.0.0.1:8787", record_dir = ".";
  auto* serve = app.add_subcommand("serve", "Run the websocket state-streaming service");
  serve->add_option("--scenario", serve_scenario, "Scenario JSON file");
  serve->add_option("--addr", addr, "Listen address host:port");
  serve->add_option("--record-dir", record_dir, "Directory for recorded CSVs");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*simulate) return cmd_simulate(sim, *simulate);
    if (*breakaway) return cmd_breakaway(sweep, sweep_scenario, ramp_rate, sweep_out);
    if (*pulley) return cmd_pulley(problem, angle_deg);
    if (*gain) return cmd_gain(gain_scores);
    if (*ttest) return cmd_ttest(ttest_scores);
    if (*serve) return cmd_serve(serve_scenario, addr, record_dir);
  } catch (const fs::ValidationError& e) {
    std::cerr << "error: invalid " << e.field() << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const fs::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    // NonMonotonicScript, InsufficientData, ZeroVariance, DenominatorZero
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const fs::BindError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}
