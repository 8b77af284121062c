#include "frictionsim/physics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "frictionsim/errors.hpp"

namespace frictionsim {
namespace {

double sign(double x) { return (x > 0.0) - (x < 0.0); }

ForceBreakdown base_forces(const SceneParams& params, double applied) {
  ForceBreakdown f;
  f.gravity_total = params.mass * params.gravity;
  f.gravity_tangential = tangential_gravity(params);
  f.normal = normal_force(params);
  f.applied = applied;
  return f;
}

// Static resolution: friction balances as much of the driving force as the
// cone allows; anything beyond it is taken by the wall or the restick clamp.
ForceBreakdown held(ForceBreakdown f, double cone) {
  f.friction = std::clamp(-f.driving(), -cone, cone);
  f.net = 0.0;
  return f;
}

}  // namespace

void validate(const SceneParams& p) {
  // Negated comparisons so NaN fails too.
  if (!(p.mass > 0.0) || !std::isfinite(p.mass)) throw ValidationError("mass_kg", "mass must be > 0");
  if (!(p.angle >= 0.0) || !(p.angle < std::numbers::pi / 2))
    throw ValidationError("angle_deg", "angle must be in [0, 90) degrees");
  if (!(p.mu_static >= 0.0) || !std::isfinite(p.mu_static))
    throw ValidationError("mu_static", "mu_static must be >= 0");
  if (!(p.mu_kinetic >= 0.0) || !std::isfinite(p.mu_kinetic))
    throw ValidationError("mu_kinetic", "mu_kinetic must be >= 0");
  if (!(p.gravity > 0.0) || !std::isfinite(p.gravity)) throw ValidationError("gravity", "gravity must be > 0");
  if (!(p.bounds.min_m < p.bounds.max_m) || !std::isfinite(p.bounds.min_m) || !std::isfinite(p.bounds.max_m))
    throw ValidationError("bounds", "bounds.min_m must be < bounds.max_m");
  if (!(p.dt > 0.0) || !std::isfinite(p.dt)) throw ValidationError("dt_s", "dt must be > 0");
  if (!(p.stick_velocity_epsilon > 0.0))
    throw ValidationError("stick_velocity_epsilon", "stick velocity epsilon must be > 0");
  if (!(p.hanging_mass >= 0.0) || !std::isfinite(p.hanging_mass))
    throw ValidationError("m2_kg", "hanging mass must be >= 0");
}

std::vector<std::string> validation_warnings(const SceneParams& p) {
  std::vector<std::string> out;
  if (p.mu_kinetic > p.mu_static) out.emplace_back("mu_kinetic exceeds mu_static");
  return out;
}

std::string_view to_string(ContactMode mode) {
  return mode == ContactMode::Static ? "static" : "kinetic";
}

double normal_force(const SceneParams& p) { return p.mass * p.gravity * std::cos(p.angle); }

double max_static_friction(const SceneParams& p) { return p.mu_static * normal_force(p); }

double tangential_gravity(const SceneParams& p) { return -p.mass * p.gravity * std::sin(p.angle); }

bool will_slip(const SceneParams& p, double applied) {
  return std::abs(applied + tangential_gravity(p)) > max_static_friction(p);
}

double static_friction(const SceneParams& p, double applied) {
  if (will_slip(p, applied)) throw StaticConeViolation("driving force exceeds the static friction limit");
  return -(applied + tangential_gravity(p));
}

double kinetic_friction(const SceneParams& p, double v, double driving) {
  const double direction = v != 0.0 ? sign(v) : sign(driving);
  return -direction * p.mu_kinetic * normal_force(p);
}

StepResult resolve_contact(const BlockState& state, const SceneParams& p, double applied) {
  ForceBreakdown f = base_forces(p, applied);
  const double cone = p.mu_static * f.normal;
  const double driving = f.driving();

  if (state.mode == ContactMode::Static && std::abs(driving) <= cone) {
    f.friction = -driving;
    f.net = 0.0;
    return {{state.s, 0.0, ContactMode::Static}, f};
  }

  f.friction = kinetic_friction(p, state.v, driving);
  // From rest, friction can only cancel the driving force, never reverse it
  // (reachable only with mu_kinetic > mu_static).
  if (state.v == 0.0 && std::abs(f.friction) > std::abs(driving)) f.friction = -driving;
  f.net = driving + f.friction;
  return {{state.s, state.v, ContactMode::Kinetic}, f};
}

StepResult step(const BlockState& state, const SceneParams& p, double applied) {
  StepResult r = resolve_contact(state, p, applied);
  if (r.state.mode == ContactMode::Static) return r;

  const double cone = p.mu_static * r.forces.normal;
  const double driving = r.forces.driving();
  const double inertia = p.mass + p.hanging_mass;

  BlockState next{state.s, state.v + r.forces.net / inertia * p.dt, ContactMode::Kinetic};
  const bool crossed = (state.v > 0.0 && next.v < 0.0) || (state.v < 0.0 && next.v > 0.0);
  const bool settled = std::abs(next.v) < p.stick_velocity_epsilon && std::abs(driving) <= cone;
  if (crossed || settled) {
    next.v = 0.0;
    // A zero crossing under a driving force outside the cone breaks away
    // again on the next tick; it stays Kinetic at v = 0 so the tick's forces
    // are reported as used.
    if (std::abs(driving) <= cone) {
      next.mode = ContactMode::Static;
      r.forces = held(r.forces, cone);
    }
  }
  next.s = state.s + next.v * p.dt;

  // Pressed into a wall while resting against it: the wall holds the block.
  // Resting means arriving no faster than two ticks of the outward push could
  // make it; anything faster is reflected.
  const bool resting = std::abs(state.v) <= 2.0 * std::abs(r.forces.net) / inertia * p.dt;
  const bool outward_push = resting && ((next.s > p.bounds.max_m && r.forces.net > 0.0) ||
                                        (next.s < p.bounds.min_m && r.forces.net < 0.0));
  next = enforce_bounds(next, p, outward_push);
  if (outward_push) r.forces = held(r.forces, cone);
  return {next, r.forces};
}

BlockState enforce_bounds(const BlockState& state, const SceneParams& p, bool outward_push) {
  const double lo = p.bounds.min_m;
  const double hi = p.bounds.max_m;
  BlockState out = state;

  if (outward_push) {
    out.s = out.s >= p.bounds.center() ? hi : lo;
    out.v = 0.0;
    out.mode = ContactMode::Static;
    return out;
  }

  if (out.s >= lo && out.s <= hi) return out;
  while (out.s > hi || out.s < lo) {
    out.s = out.s > hi ? 2.0 * hi - out.s : 2.0 * lo - out.s;
    out.v = -out.v;
  }
  if (out.v != 0.0) out.mode = ContactMode::Kinetic;
  return out;
}

}  // namespace frictionsim
