#include "frictionsim/sweep.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "frictionsim/errors.hpp"
#include "frictionsim/haptics.hpp"
#include "frictionsim/session.hpp"

namespace frictionsim {

std::string_view to_string(SweepParam param) { return param == SweepParam::AngleDeg ? "angle_deg" : "mu_s"; }

std::vector<double> SweepSpec::values() const {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(count));
  if (count == 1) return {from};
  for (int i = 0; i < count; ++i) out.push_back(from + (to - from) * i / (count - 1));
  return out;
}

SweepSpec parse_sweep(std::string_view text) {
  const auto eq = text.find('=');
  if (eq == std::string_view::npos) throw ParseError("sweep: expected name=from:to:count");
  const std::string name(text.substr(0, eq));
  const std::string range(text.substr(eq + 1));

  SweepSpec spec;
  if (name == "mu_s" || name == "mu_static") {
    spec.param = SweepParam::MuStatic;
  } else if (name == "angle_deg") {
    spec.param = SweepParam::AngleDeg;
  } else {
    throw ParseError("sweep: unknown parameter '" + name + "' (mu_s or angle_deg)");
  }

  char tail = 0;
  if (std::sscanf(range.c_str(), "%lf:%lf:%d%c", &spec.from, &spec.to, &spec.count, &tail) != 3) {
    throw ParseError("sweep: expected from:to:count, got '" + range + "'");
  }
  if (spec.count < 1) throw ParseError("sweep: count must be >= 1");
  if (!std::isfinite(spec.from) || !std::isfinite(spec.to)) throw ParseError("sweep: bounds must be finite");
  return spec;
}

double analytic_breakaway(const SceneParams& p) {
  if (std::tan(p.angle) > p.mu_static) return 0.0;
  return p.mass * p.gravity * (std::sin(p.angle) + p.mu_static * std::cos(p.angle));
}

std::optional<BreakawayMeasurement> measure_breakaway(const SceneParams& params, double ramp_rate,
                                                      double force_limit) {
  Scenario scenario = default_scenario();
  scenario.scene = params;
  scenario.initial = {params.bounds.center(), 0.0, ContactMode::Static};
  Simulation sim(scenario);
  ForceProfile ramp = ForceProfile::ramp(ramp_rate);

  while (true) {
    const double t = sim.next_time();
    const double applied = ramp.force(t);
    if (applied > force_limit) return std::nullopt;
    const TrajectorySample sample = sim.tick(DirectForce{applied});
    if (sample.mode == ContactMode::Kinetic) return BreakawayMeasurement{applied, t};
  }
}

std::vector<SweepRow> run_breakaway_sweep(const SweepSpec& spec, const SceneParams& base, double ramp_rate) {
  std::vector<SweepRow> rows;
  for (const double value : spec.values()) {
    SceneParams params = base;
    if (spec.param == SweepParam::MuStatic) {
      params.mu_static = value;
    } else {
      params.angle = degrees_to_radians(value);
    }
    validate(params);

    SweepRow row;
    row.param = value;
    row.analytic = analytic_breakaway(params);
    const double limit = 2.0 * row.analytic + params.mass * params.gravity;
    const auto measured = measure_breakaway(params, ramp_rate, limit);
    row.measured = measured ? measured->force : std::numeric_limits<double>::quiet_NaN();
    const double diff = std::abs(row.measured - row.analytic);
    row.rel_err = row.analytic > 0.0 ? diff / row.analytic : diff;
    rows.push_back(row);
  }
  return rows;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out = "param,measured,analytic,rel_err\n";
  char buf[160];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g\n", r.param, r.measured, r.analytic, r.rel_err);
    out += buf;
  }
  return out;
}

}  // namespace frictionsim
