#pragma once

// Block of mass m1 on an incline tied over an ideal pulley at the top edge to
// a hanging mass m2. The string runs parallel to the incline.

#include <optional>
#include <string>
#include <string_view>

#include "frictionsim/physics.hpp"

namespace frictionsim {

struct PulleyProblem {
  double m1 = 1.0;  // kg, block on the incline
  double m2 = 1.0;  // kg, hanging
  double angle = degrees_to_radians(20.0);
  double mu_static = 0.5;
  double mu_kinetic = 0.3;
  double gravity = kStandardGravity;
};

void validate(const PulleyProblem& problem);

enum class PulleyRegime { Equilibrium, SlidesUpIncline, SlidesDownIncline };

std::string_view to_string(PulleyRegime regime);

struct PulleySolution {
  PulleyRegime regime = PulleyRegime::Equilibrium;
  double acceleration = 0.0;  // m/s^2, magnitude
  double tension = 0.0;       // N
  double friction = 0.0;      // N on m1, signed along +s
  // Set when mu_kinetic > mu_static leaves no net force past breakaway.
  std::optional<std::string> warning;
};

/// Outcome of releasing the system from rest.
PulleySolution solve(const PulleyProblem& problem);

/// The incline scene that reproduces the pulley dynamics when the block is
/// pushed up-slope by m2 * g: block mass m1 with m2 riding along as inertia.
SceneParams pulley_scene(const PulleyProblem& problem, const SceneParams& base = {});

}  // namespace frictionsim
