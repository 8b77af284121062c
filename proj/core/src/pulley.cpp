#include "frictionsim/pulley.hpp"

#include <cmath>
#include <numbers>

#include "frictionsim/errors.hpp"

namespace frictionsim {

void validate(const PulleyProblem& p) {
  if (!(p.m1 > 0.0) || !std::isfinite(p.m1)) throw ValidationError("m1_kg", "m1 must be > 0");
  if (!(p.m2 > 0.0) || !std::isfinite(p.m2)) throw ValidationError("m2_kg", "m2 must be > 0");
  if (!(p.angle >= 0.0) || !(p.angle < std::numbers::pi / 2))
    throw ValidationError("angle_deg", "angle must be in [0, 90) degrees");
  if (!(p.mu_static >= 0.0) || !std::isfinite(p.mu_static))
    throw ValidationError("mu_static", "mu_static must be >= 0");
  if (!(p.mu_kinetic >= 0.0) || !std::isfinite(p.mu_kinetic))
    throw ValidationError("mu_kinetic", "mu_kinetic must be >= 0");
  if (!(p.gravity > 0.0) || !std::isfinite(p.gravity)) throw ValidationError("gravity", "gravity must be > 0");
}

std::string_view to_string(PulleyRegime regime) {
  switch (regime) {
    case PulleyRegime::Equilibrium: return "equilibrium";
    case PulleyRegime::SlidesUpIncline: return "slides_up_incline";
    case PulleyRegime::SlidesDownIncline: return "slides_down_incline";
  }
  return "unknown";
}

PulleySolution solve(const PulleyProblem& p) {
  const double g = p.gravity;
  const double normal = p.m1 * g * std::cos(p.angle);
  const double driving = p.m2 * g - p.m1 * g * std::sin(p.angle);

  PulleySolution out;
  if (std::abs(driving) <= p.mu_static * normal) {
    out.regime = PulleyRegime::Equilibrium;
    out.friction = -driving;
    out.tension = p.m2 * g;
    return out;
  }

  const double kinetic = p.mu_kinetic * normal;
  const double accel = (std::abs(driving) - kinetic) / (p.m1 + p.m2);
  if (accel < 0.0) {
    out.regime = PulleyRegime::Equilibrium;
    out.friction = -driving;
    out.tension = p.m2 * g;
    out.warning = "mu_kinetic exceeds mu_static: kinetic friction stalls the system past breakaway";
    return out;
  }

  const bool up = driving > 0.0;
  out.regime = up ? PulleyRegime::SlidesUpIncline : PulleyRegime::SlidesDownIncline;
  out.acceleration = accel;
  out.friction = up ? -kinetic : kinetic;
  out.tension = up ? p.m2 * (g - accel) : p.m2 * (g + accel);
  return out;
}

SceneParams pulley_scene(const PulleyProblem& problem, const SceneParams& base) {
  SceneParams scene = base;
  scene.mass = problem.m1;
  scene.hanging_mass = problem.m2;
  scene.angle = problem.angle;
  scene.mu_static = problem.mu_static;
  scene.mu_kinetic = problem.mu_kinetic;
  scene.gravity = problem.gravity;
  return scene;
}

}  // namespace frictionsim
