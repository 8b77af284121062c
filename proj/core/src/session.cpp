#include "frictionsim/session.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <type_traits>

#include "frictionsim/errors.hpp"

namespace frictionsim {
namespace {

bool same_bits(double a, double b) { return std::bit_cast<std::uint64_t>(a) == std::bit_cast<std::uint64_t>(b); }

void append_number(std::string& out, double x) {
  if (std::isnan(x)) {
    out += "nan";
    return;
  }
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.9g", x);
  out.append(buf, static_cast<std::size_t>(n));
}

}  // namespace

bool identical(const TrajectorySample& a, const TrajectorySample& b) {
  return same_bits(a.t, b.t) && same_bits(a.s, b.s) && same_bits(a.v, b.v) && a.mode == b.mode &&
         same_bits(a.applied, b.applied) && same_bits(a.friction, b.friction) && same_bits(a.normal, b.normal) &&
         same_bits(a.gravity_t, b.gravity_t) && same_bits(a.net, b.net) && same_bits(a.proxy_s, b.proxy_s) &&
         a.contact == b.contact;
}

Simulation::Simulation(Scenario scenario)
    : scenario_(std::move(scenario)), scene_(scenario_.effective_scene()), state_(scenario_.initial) {
  validate(scenario_);
}

double Simulation::next_time() const {
  return epoch_time_ + static_cast<double>(ticks_ - epoch_tick_) * scene_.dt;
}

TrajectorySample Simulation::tick(const Actuation& input) {
  TrajectorySample sample;
  sample.t = next_time();
  sample.proxy_s = std::numeric_limits<double>::quiet_NaN();

  double applied = scenario_.hanging_weight();
  std::visit(
      [&](const auto& in) {
        using T = std::decay_t<decltype(in)>;
        if constexpr (std::is_same_v<T, DeviceCoord>) {
          const double proxy_s = map_workspace(in.value, scene_.bounds);
          const double proxy_v = last_proxy_ && !resolve_only_ ? (proxy_s - *last_proxy_) / scene_.dt : 0.0;
          const CouplingForce coupling = coupling_force({proxy_s, proxy_v}, state_, scenario_.coupling);
          applied += coupling.applied_to_block;
          sample.proxy_s = proxy_s;
          sample.contact = coupling.contact;
          last_proxy_ = proxy_s;
        } else if constexpr (std::is_same_v<T, DirectForce>) {
          applied += in.newtons;
          last_proxy_.reset();
        } else {
          last_proxy_.reset();
        }
      },
      input);

  const StepResult r = resolve_only_ ? resolve_contact(state_, scene_, applied) : step(state_, scene_, applied);
  state_ = r.state;
  resolve_only_ = false;
  ++ticks_;

  sample.s = state_.s;
  sample.v = state_.v;
  sample.mode = state_.mode;
  sample.applied = r.forces.applied;
  sample.friction = r.forces.friction;
  sample.normal = r.forces.normal;
  sample.gravity_t = r.forces.gravity_tangential;
  sample.net = r.forces.net;
  last_time_ = sample.t;
  return sample;
}

void Simulation::restart() {
  state_ = scenario_.initial;
  resolve_only_ = true;
}

void Simulation::set_scenario(Scenario scenario) {
  validate(scenario);
  if (ticks_ > 0 && scenario.scene.dt != scene_.dt) {
    epoch_tick_ = ticks_ - 1;
    epoch_time_ = last_time_;
  }
  scenario_ = std::move(scenario);
  scene_ = scenario_.effective_scene();
  state_.s = std::clamp(state_.s, scene_.bounds.min_m, scene_.bounds.max_m);
}

std::size_t sample_count(double duration, double dt) {
  return static_cast<std::size_t>(std::floor(duration / dt + 1e-9)) + 1;
}

void run(const Scenario& scenario, InputSource& device, const SampleSink& sink) {
  if (!scenario.duration) throw ValidationError("duration_s", "a recorded run needs a duration");
  Simulation sim(scenario);
  const std::size_t n = sample_count(*scenario.duration, sim.scene().dt);
  for (std::size_t i = 0; i < n; ++i) {
    const Actuation input = device.sample(sim.next_time());
    sink(sim.tick(input), input);
  }
}

Trajectory run(const Scenario& scenario, InputSource& device) {
  Trajectory out;
  if (scenario.duration) {
    const std::size_t n = sample_count(*scenario.duration, scenario.scene.dt);
    out.samples.reserve(n);
    out.inputs.reserve(n);
  }
  run(scenario, device, [&out](const TrajectorySample& sample, const Actuation& input) {
    out.samples.push_back(sample);
    out.inputs.push_back(input);
  });
  return out;
}

ReplayMismatch::ReplayMismatch(std::size_t index, double t)
    : std::runtime_error("replay diverged at sample " + std::to_string(index) + " (t = " + std::to_string(t) + ")"),
      index_(index),
      t_(t) {}

bool replay(const Trajectory& trajectory, const Scenario& scenario) {
  const auto& samples = trajectory.samples;
  const std::size_t n = std::min(samples.size(), trajectory.inputs.size());
  Simulation sim(scenario);
  for (std::size_t i = 0; i < n; ++i) {
    if (!identical(sim.tick(trajectory.inputs[i]), samples[i])) throw ReplayMismatch(i, samples[i].t);
  }
  if (samples.size() != trajectory.inputs.size()) {
    throw ReplayMismatch(n, n < samples.size() ? samples[n].t : sim.next_time());
  }
  return true;
}

std::string to_csv_row(const TrajectorySample& x) {
  std::string row;
  row.reserve(128);
  append_number(row, x.t);
  row += ',';
  append_number(row, x.s);
  row += ',';
  append_number(row, x.v);
  row += ',';
  row += to_string(x.mode);
  for (const double f : {x.applied, x.friction, x.normal, x.gravity_t, x.net, x.proxy_s}) {
    row += ',';
    append_number(row, f);
  }
  row += x.contact ? ",1" : ",0";
  return row;
}

void write_csv(std::ostream& out, const std::vector<TrajectorySample>& samples) {
  out << kTrajectoryCsvHeader << '\n';
  for (const auto& sample : samples) out << to_csv_row(sample) << '\n';
}

std::string to_csv(const std::vector<TrajectorySample>& samples) {
  std::ostringstream out;
  write_csv(out, samples);
  return out.str();
}

std::optional<std::size_t> find_breakaway(const std::vector<TrajectorySample>& samples) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].mode != ContactMode::Kinetic) continue;
    if (i == 0 ? samples[i].v == 0.0 : samples[i - 1].mode == ContactMode::Static) return i;
  }
  return std::nullopt;
}

}  // namespace frictionsim
