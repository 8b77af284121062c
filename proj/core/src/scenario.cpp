#include "frictionsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>

#include <json.hpp>

#include "frictionsim/errors.hpp"

namespace frictionsim {
namespace {

using nlohmann::json;

const std::set<std::string> kTopKeys = {"scenario", "mass_kg",  "angle_deg", "mu_static", "mu_kinetic",
                                        "gravity",  "bounds",   "dt_s",      "coupling",  "pulley",
                                        "duration_s", "initial", "stick_velocity_epsilon"};
const std::set<std::string> kBoundsKeys = {"min_m", "max_m"};
const std::set<std::string> kCouplingKeys = {"stiffness_n_per_m", "damping", "max_force_n", "block_half_length_m"};
const std::set<std::string> kPulleyKeys = {"m1_kg", "m2_kg"};
const std::set<std::string> kInitialKeys = {"s_m", "v_m_per_s"};

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) throw ValidationError(prefix + key, "unknown key '" + prefix + key + "'");
  }
}

const json* object_at(const json& doc, const std::string& key) {
  const auto it = doc.find(key);
  if (it == doc.end()) return nullptr;
  if (!it->is_object()) throw ValidationError(key, "'" + key + "' must be an object");
  return &*it;
}

void read_number(const json& obj, const std::string& key, const std::string& field, double& out) {
  const auto it = obj.find(key);
  if (it == obj.end()) return;
  if (!it->is_number()) throw ValidationError(field, "'" + field + "' must be a number");
  out = it->get<double>();
}

void sync_pulley(Scenario& sc) {
  if (!sc.pulley) return;
  sc.pulley->m1 = sc.scene.mass;
  sc.pulley->angle = sc.scene.angle;
  sc.pulley->mu_static = sc.scene.mu_static;
  sc.pulley->mu_kinetic = sc.scene.mu_kinetic;
  sc.pulley->gravity = sc.scene.gravity;
}

BlockState rest_at(double s) { return {s, 0.0, ContactMode::Static}; }

}  // namespace

std::string_view to_string(ScenarioKind kind) { return kind == ScenarioKind::Pulley ? "pulley" : "incline"; }

SceneParams Scenario::effective_scene() const {
  if (kind == ScenarioKind::Pulley && pulley) return pulley_scene(*pulley, scene);
  SceneParams out = scene;
  out.hanging_mass = 0.0;
  return out;
}

double Scenario::hanging_weight() const {
  if (kind == ScenarioKind::Pulley && pulley) return pulley->m2 * pulley->gravity;
  return 0.0;
}

Scenario default_scenario() {
  Scenario sc;
  sc.initial = rest_at(sc.scene.bounds.center());
  return sc;
}

void validate(const Scenario& sc) {
  validate(sc.scene);
  validate(sc.coupling);
  if (sc.kind == ScenarioKind::Pulley && !sc.pulley) throw ValidationError("pulley", "pulley scenario needs m2_kg");
  if (sc.pulley) validate(*sc.pulley);
  if (!(sc.initial.s >= sc.scene.bounds.min_m && sc.initial.s <= sc.scene.bounds.max_m))
    throw ValidationError("initial.s_m", "initial position must lie within bounds");
  if (!std::isfinite(sc.initial.v)) throw ValidationError("initial.v_m_per_s", "initial velocity must be finite");
  if (sc.duration && !(*sc.duration >= 0.0 && std::isfinite(*sc.duration)))
    throw ValidationError("duration_s", "duration must be >= 0");
}

Scenario load_scenario(std::string_view text) {
  json doc;
  if (text.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    doc = json::object();
  } else {
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ParseError(std::string("scenario: ") + e.what());
    }
  }
  if (!doc.is_object()) throw ParseError("scenario: top level must be a JSON object");
  reject_unknown(doc, kTopKeys, "");

  Scenario sc = default_scenario();
  if (const auto it = doc.find("scenario"); it != doc.end()) {
    if (*it == "incline") {
      sc.kind = ScenarioKind::Incline;
    } else if (*it == "pulley") {
      sc.kind = ScenarioKind::Pulley;
    } else {
      throw ValidationError("scenario", "scenario must be \"incline\" or \"pulley\"");
    }
  }

  double angle_deg = radians_to_degrees(sc.scene.angle);
  const bool has_angle = doc.contains("angle_deg");
  read_number(doc, "mass_kg", "mass_kg", sc.scene.mass);
  read_number(doc, "angle_deg", "angle_deg", angle_deg);
  read_number(doc, "mu_static", "mu_static", sc.scene.mu_static);
  read_number(doc, "mu_kinetic", "mu_kinetic", sc.scene.mu_kinetic);
  read_number(doc, "gravity", "gravity", sc.scene.gravity);
  read_number(doc, "dt_s", "dt_s", sc.scene.dt);
  read_number(doc, "stick_velocity_epsilon", "stick_velocity_epsilon", sc.scene.stick_velocity_epsilon);
  if (has_angle) sc.scene.angle = degrees_to_radians(angle_deg);

  if (const json* b = object_at(doc, "bounds")) {
    reject_unknown(*b, kBoundsKeys, "bounds.");
    read_number(*b, "min_m", "bounds.min_m", sc.scene.bounds.min_m);
    read_number(*b, "max_m", "bounds.max_m", sc.scene.bounds.max_m);
  }
  if (const json* c = object_at(doc, "coupling")) {
    reject_unknown(*c, kCouplingKeys, "coupling.");
    read_number(*c, "stiffness_n_per_m", "coupling.stiffness_n_per_m", sc.coupling.stiffness);
    read_number(*c, "damping", "coupling.damping", sc.coupling.damping);
    read_number(*c, "max_force_n", "coupling.max_force_n", sc.coupling.max_force);
    read_number(*c, "block_half_length_m", "coupling.block_half_length_m", sc.coupling.block_half_length);
  }

  const json* pulley = object_at(doc, "pulley");
  if (pulley || sc.kind == ScenarioKind::Pulley) {
    PulleyProblem problem;
    problem.m2 = kDefaultHangingMass;
    if (pulley) {
      reject_unknown(*pulley, kPulleyKeys, "pulley.");
      read_number(*pulley, "m1_kg", "pulley.m1_kg", sc.scene.mass);
      read_number(*pulley, "m2_kg", "pulley.m2_kg", problem.m2);
    }
    sc.pulley = problem;
    sync_pulley(sc);
  }

  if (const auto it = doc.find("duration_s"); it != doc.end()) {
    if (!it->is_number()) throw ValidationError("duration_s", "'duration_s' must be a number");
    sc.duration = it->get<double>();
  }

  sc.initial = rest_at(sc.scene.bounds.center());
  if (const json* init = object_at(doc, "initial")) {
    reject_unknown(*init, kInitialKeys, "initial.");
    read_number(*init, "s_m", "initial.s_m", sc.initial.s);
    read_number(*init, "v_m_per_s", "initial.v_m_per_s", sc.initial.v);
    sc.initial.mode = sc.initial.v != 0.0 ? ContactMode::Kinetic : ContactMode::Static;
  }

  validate(sc);
  return sc;
}

std::string to_json(const Scenario& sc) {
  json doc = {
      {"scenario", std::string(to_string(sc.kind))},
      {"mass_kg", sc.scene.mass},
      {"angle_deg", radians_to_degrees(sc.scene.angle)},
      {"mu_static", sc.scene.mu_static},
      {"mu_kinetic", sc.scene.mu_kinetic},
      {"gravity", sc.scene.gravity},
      {"dt_s", sc.scene.dt},
      {"stick_velocity_epsilon", sc.scene.stick_velocity_epsilon},
      {"bounds", {{"min_m", sc.scene.bounds.min_m}, {"max_m", sc.scene.bounds.max_m}}},
      {"coupling",
       {{"stiffness_n_per_m", sc.coupling.stiffness},
        {"damping", sc.coupling.damping},
        {"max_force_n", sc.coupling.max_force},
        {"block_half_length_m", sc.coupling.block_half_length}}},
      {"initial", {{"s_m", sc.initial.s}, {"v_m_per_s", sc.initial.v}}},
  };
  if (sc.pulley) doc["pulley"] = {{"m1_kg", sc.pulley->m1}, {"m2_kg", sc.pulley->m2}};
  if (sc.duration) doc["duration_s"] = *sc.duration;
  return doc.dump();
}

Scenario with_param(const Scenario& scenario, std::string_view key, double value) {
  using Setter = std::function<void(Scenario&, double)>;
  static const std::map<std::string, Setter, std::less<>> setters = {
      {"mass_kg", [](Scenario& s, double v) { s.scene.mass = v; }},
      {"angle_deg", [](Scenario& s, double v) { s.scene.angle = degrees_to_radians(v); }},
      {"mu_static", [](Scenario& s, double v) { s.scene.mu_static = v; }},
      {"mu_kinetic", [](Scenario& s, double v) { s.scene.mu_kinetic = v; }},
      {"gravity", [](Scenario& s, double v) { s.scene.gravity = v; }},
      {"dt_s", [](Scenario& s, double v) { s.scene.dt = v; }},
      {"stick_velocity_epsilon", [](Scenario& s, double v) { s.scene.stick_velocity_epsilon = v; }},
      {"duration_s", [](Scenario& s, double v) { s.duration = v; }},
      {"bounds.min_m", [](Scenario& s, double v) { s.scene.bounds.min_m = v; }},
      {"bounds.max_m", [](Scenario& s, double v) { s.scene.bounds.max_m = v; }},
      {"coupling.stiffness_n_per_m", [](Scenario& s, double v) { s.coupling.stiffness = v; }},
      {"coupling.damping", [](Scenario& s, double v) { s.coupling.damping = v; }},
      {"coupling.max_force_n", [](Scenario& s, double v) { s.coupling.max_force = v; }},
      {"coupling.block_half_length_m", [](Scenario& s, double v) { s.coupling.block_half_length = v; }},
      {"pulley.m1_kg", [](Scenario& s, double v) { s.scene.mass = v; }},
      {"pulley.m2_kg",
       [](Scenario& s, double v) {
         if (!s.pulley) s.pulley = PulleyProblem{};
         s.pulley->m2 = v;
       }},
  };

  const auto it = setters.find(key);
  if (it == setters.end()) throw ValidationError(std::string(key), "unknown parameter '" + std::string(key) + "'");

  Scenario out = scenario;
  it->second(out, value);
  sync_pulley(out);
  if (key.starts_with("bounds.") && out.scene.bounds.min_m < out.scene.bounds.max_m) {
    out.initial.s = std::clamp(out.initial.s, out.scene.bounds.min_m, out.scene.bounds.max_m);
  }

  try {
    validate(out);
  } catch (const ValidationError& e) {
    // Report under the key the caller used; pulley.m1_kg and mass_kg alias.
    throw ValidationError(std::string(key), e.what());
  }
  return out;
}

Scenario with_kind(const Scenario& scenario, ScenarioKind kind) {
  Scenario out = scenario;
  out.kind = kind;
  if (kind == ScenarioKind::Pulley && !out.pulley) {
    out.pulley = PulleyProblem{};
    out.pulley->m2 = kDefaultHangingMass;
  }
  sync_pulley(out);
  validate(out);
  return out;
}

}  // namespace frictionsim
