#pragma once

// Stick-slip Coulomb friction for a single block constrained to the axis of an
// inclined plane. Positions and velocities are measured along the incline,
// +s pointing up-slope. All functions are pure; SceneParams is assumed to have
// passed validate().

#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace frictionsim {

inline constexpr double kStandardGravity = 9.80665;  // m/s^2

constexpr double degrees_to_radians(double deg) { return deg * std::numbers::pi / 180.0; }
constexpr double radians_to_degrees(double rad) { return rad * 180.0 / std::numbers::pi; }

struct Bounds {
  double min_m = 0.0;
  double max_m = 1.0;

  double center() const { return 0.5 * (min_m + max_m); }
  double half_span() const { return 0.5 * (max_m - min_m); }
};

struct SceneParams {
  double mass = 1.0;                         // kg
  double angle = degrees_to_radians(20.0);   // rad, from horizontal
  double mu_static = 0.5;
  double mu_kinetic = 0.3;
  double gravity = kStandardGravity;         // m/s^2
  Bounds bounds{};                           // m
  double dt = 1e-3;                          // s
  double stick_velocity_epsilon = 1e-6;      // m/s
  // Mass hanging from a string over a pulley at the top of the incline. It
  // moves rigidly with the block, adding inertia; its weight is supplied by
  // the caller as part of the applied force. Zero for the plain incline.
  double hanging_mass = 0.0;                 // kg
};

/// Throws ValidationError naming the offending config key.
void validate(const SceneParams& params);

/// Non-fatal oddities (currently: mu_kinetic > mu_static).
std::vector<std::string> validation_warnings(const SceneParams& params);

enum class ContactMode { Static, Kinetic };

std::string_view to_string(ContactMode mode);

struct BlockState {
  double s = 0.0;   // m
  double v = 0.0;   // m/s
  ContactMode mode = ContactMode::Static;
};

/// Force magnitudes for one tick, as drawn by the force arrows. Signed
/// quantities are projections on +s.
struct ForceBreakdown {
  double gravity_total = 0.0;
  double gravity_tangential = 0.0;
  double normal = 0.0;
  double applied = 0.0;
  double friction = 0.0;
  double net = 0.0;

  double driving() const { return applied + gravity_tangential; }
};

struct StepResult {
  BlockState state;
  ForceBreakdown forces;
};

double normal_force(const SceneParams& params);
double max_static_friction(const SceneParams& params);
/// -m g sin(theta), the weight component along +s.
double tangential_gravity(const SceneParams& params);

/// True iff a block at rest cannot hold against `applied` (N, along +s).
bool will_slip(const SceneParams& params, double applied);

/// The balancing static friction. Throws StaticConeViolation when
/// will_slip(params, applied) holds.
double static_friction(const SceneParams& params, double applied);

/// Coulomb sliding friction, opposing v, or opposing `driving` when v == 0.
double kinetic_friction(const SceneParams& params, double v, double driving);

/// Contact resolution at the start of a tick without integrating: a Static
/// block inside the static cone stays Static with net = 0, anything else is
/// Kinetic. The returned state has the resolved mode; s and v are unchanged.
StepResult resolve_contact(const BlockState& state, const SceneParams& params, double applied);

/// One fixed-dt semi-implicit Euler advance of the stick-slip state machine,
/// followed by enforce_bounds().
StepResult step(const BlockState& state, const SceneParams& params, double applied);

/// Workspace wall handling. With outward_push the block is pinned at the bound
/// it pressed against with zero velocity. Otherwise an overshoot is mirrored
/// about the bound and the velocity negated.
BlockState enforce_bounds(const BlockState& state, const SceneParams& params, bool outward_push);

}  // namespace frictionsim
