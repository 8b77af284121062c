#pragma once

// Breakaway experiments: ramp a force from zero on a block at rest and record
// the force at which it first slips.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "frictionsim/physics.hpp"

namespace frictionsim {

enum class SweepParam { MuStatic, AngleDeg };

std::string_view to_string(SweepParam param);

/// `name=from:to:count`, name in {mu_s, mu_static, angle_deg}, count >= 1.
struct SweepSpec {
  SweepParam param = SweepParam::MuStatic;
  double from = 0.0;
  double to = 0.0;
  int count = 1;

  std::vector<double> values() const;
};

/// Throws ParseError.
SweepSpec parse_sweep(std::string_view text);

/// Applied up-slope force at which a resting block starts to slide:
/// m g (sin(theta) + mu_s cos(theta)), or 0 past the angle of repose where the
/// block slides down unaided.
double analytic_breakaway(const SceneParams& params);

struct BreakawayMeasurement {
  double force = 0.0;  // N, applied force on the first sliding tick
  double time = 0.0;   // s
};

/// Ramps applied = rate * t through the simulation loop. Empty if the block
/// holds until the force exceeds `force_limit`.
std::optional<BreakawayMeasurement> measure_breakaway(const SceneParams& params, double ramp_rate_n_per_s,
                                                      double force_limit);

struct SweepRow {
  double param = 0.0;
  double measured = 0.0;  // NaN if no breakaway
  double analytic = 0.0;
  double rel_err = 0.0;
};

inline constexpr double kDefaultRampRate = 1.0;  // N/s

std::vector<SweepRow> run_breakaway_sweep(const SweepSpec& spec, const SceneParams& base,
                                          double ramp_rate_n_per_s = kDefaultRampRate);

/// CSV with header `param,measured,analytic,rel_err`.
std::string to_csv(const std::vector<SweepRow>& rows);

}  // namespace frictionsim
