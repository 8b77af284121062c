#pragma once

// Scenario documents: UTF-8 JSON, snake_case keys, angles in degrees.
//
//   {
//     "scenario": "incline" | "pulley",
//     "mass_kg": 1.0, "angle_deg": 20, "mu_static": 0.5, "mu_kinetic": 0.3,
//     "gravity": 9.80665, "dt_s": 0.001, "duration_s": 10,
//     "bounds": {"min_m": 0, "max_m": 1},
//     "coupling": {"stiffness_n_per_m": 500, "damping": 5, "max_force_n": 9,
//                  "block_half_length_m": 0.05},
//     "pulley": {"m1_kg": 1.0, "m2_kg": 0.5},
//     "initial": {"s_m": 0.5, "v_m_per_s": 0}
//   }
//
// Every key is optional. "initial" defaults to rest at the middle of the
// bounds. For pulley scenarios m1_kg and mass_kg name the same quantity;
// m1_kg wins when both are given.

#include <optional>
#include <string>
#include <string_view>

#include "frictionsim/haptics.hpp"
#include "frictionsim/physics.hpp"
#include "frictionsim/pulley.hpp"

namespace frictionsim {

enum class ScenarioKind { Incline, Pulley };

std::string_view to_string(ScenarioKind kind);

inline constexpr double kDefaultHangingMass = 0.5;  // kg

struct Scenario {
  ScenarioKind kind = ScenarioKind::Incline;
  SceneParams scene{};
  CouplingParams coupling{};
  std::optional<PulleyProblem> pulley;
  BlockState initial{};
  std::optional<double> duration;  // s; unset for interactive sessions

  /// Incline dynamics actually integrated: for pulleys, m2 rides along as
  /// extra inertia.
  SceneParams effective_scene() const;

  /// Constant force on the block from the hanging mass (0 for inclines).
  double hanging_weight() const;
};

Scenario default_scenario();

/// Throws ParseError or ValidationError (field = offending key).
Scenario load_scenario(std::string_view text);

/// Throws ValidationError.
void validate(const Scenario& scenario);

/// Inverse of load_scenario: load_scenario(to_json(x)) reproduces x.
std::string to_json(const Scenario& scenario);

/// Copy of `scenario` with one parameter replaced. `key` is a dotted path
/// into the document ("angle_deg", "coupling.damping", "pulley.m2_kg").
/// Throws ValidationError on unknown keys or invalid values.
Scenario with_param(const Scenario& scenario, std::string_view key, double value);

/// Same parameters, other kind. Switching to a pulley adds a default m2.
Scenario with_kind(const Scenario& scenario, ScenarioKind kind);

}  // namespace frictionsim
