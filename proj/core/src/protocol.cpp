#include "frictionsim/protocol.hpp"

#include <cmath>

#include <json.hpp>

#include "frictionsim/errors.hpp"

namespace frictionsim {
namespace {

using nlohmann::json;

json reply_base(const ParsedCommand& command, std::string_view type) {
  json reply = {{"type", type}, {"cmd", command_name(command.command)}};
  if (command.id_json) reply["id"] = json::parse(*command.id_json);
  return reply;
}

std::string validation_reply(const ParsedCommand& command, const ValidationError& e) {
  json reply = reply_base(command, "error");
  reply["error"] = "validation";
  reply["field"] = e.field();
  reply["message"] = e.what();
  return reply.dump();
}

json number_or_null(double x) {
  if (!std::isfinite(x)) return nullptr;
  return x;
}

}  // namespace

std::string_view command_name(const Command& command) {
  struct Names {
    std::string_view operator()(const cmd::SetParam&) const { return "set_param"; }
    std::string_view operator()(const cmd::ProxyInput&) const { return "proxy"; }
    std::string_view operator()(const cmd::Reset&) const { return "reset"; }
    std::string_view operator()(const cmd::Record&) const { return "record"; }
    std::string_view operator()(const cmd::SetScenario&) const { return "set_scenario"; }
    std::string_view operator()(const cmd::LoadScenario&) const { return "load_scenario"; }
  };
  return std::visit(Names{}, command);
}

ParsedCommand parse_command(std::string_view message) {
  json doc;
  try {
    doc = json::parse(message);
  } catch (const json::parse_error&) {
    throw ParseError("message is not valid JSON");
  }
  if (!doc.is_object()) throw ParseError("message must be a JSON object");
  if (doc.value("type", json()) != "cmd") throw ParseError("expected \"type\":\"cmd\"");
  const auto name_it = doc.find("cmd");
  if (name_it == doc.end() || !name_it->is_string()) throw ParseError("missing \"cmd\"");
  const std::string name = name_it->get<std::string>();

  const auto number = [&](const char* key) {
    const auto it = doc.find(key);
    if (it == doc.end() || !it->is_number()) throw ParseError(name + ": \"" + key + "\" must be a number");
    const double value = it->get<double>();
    if (!std::isfinite(value)) throw ParseError(name + ": \"" + key + "\" must be finite");
    return value;
  };

  ParsedCommand out{cmd::Reset{}, std::nullopt};
  if (const auto id = doc.find("id"); id != doc.end()) out.id_json = id->dump();

  if (name == "set_param") {
    const auto key = doc.find("key");
    if (key == doc.end() || !key->is_string()) throw ParseError("set_param: \"key\" must be a string");
    out.command = cmd::SetParam{key->get<std::string>(), number("value")};
  } else if (name == "proxy") {
    out.command = cmd::ProxyInput{number("device_coord")};
  } else if (name == "reset") {
    out.command = cmd::Reset{};
  } else if (name == "record") {
    const auto on = doc.find("on");
    if (on == doc.end() || !on->is_boolean()) throw ParseError("record: \"on\" must be a boolean");
    out.command = cmd::Record{on->get<bool>()};
  } else if (name == "set_scenario") {
    const std::string kind = doc.value("kind", "");
    if (kind == "incline") {
      out.command = cmd::SetScenario{ScenarioKind::Incline};
    } else if (kind == "pulley") {
      out.command = cmd::SetScenario{ScenarioKind::Pulley};
    } else {
      throw ParseError("set_scenario: \"kind\" must be \"incline\" or \"pulley\"");
    }
  } else if (name == "load_scenario") {
    const auto document = doc.find("document");
    if (document == doc.end()) throw ParseError("load_scenario: missing \"document\"");
    out.command = cmd::LoadScenario{document->is_string() ? document->get<std::string>() : document->dump()};
  } else {
    throw ParseError("unknown command '" + name + "'");
  }
  return out;
}

std::string malformed_reply(std::string_view message) {
  return json{{"type", "error"}, {"error", "malformed"}, {"message", message}}.dump();
}

std::string to_json(const StateSnapshot& snap) {
  const TrajectorySample& x = snap.sample;
  json warnings = json::array();
  for (const auto& w : validation_warnings(snap.scenario.scene)) warnings.push_back(w);

  json doc = {
      {"type", "state"},
      {"seq", snap.seq},
      {"t", x.t},
      {"s", x.s},
      {"v", x.v},
      {"mode", to_string(x.mode)},
      {"forces",
       {{"gravity_total", snap.gravity_total},
        {"gravity_tangential", x.gravity_t},
        {"normal", x.normal},
        {"applied", x.applied},
        {"friction", x.friction},
        {"net", x.net}}},
      {"proxy_s", number_or_null(x.proxy_s)},
      {"contact", x.contact},
      {"scenario", to_string(snap.scenario.kind)},
      {"params", json::parse(to_json(snap.scenario))},
      {"recording", snap.recording},
  };
  if (snap.pulley) {
    doc["pulley"] = {{"regime", to_string(snap.pulley->regime)},
                     {"acceleration", snap.pulley->acceleration},
                     {"tension", snap.pulley->tension},
                     {"friction", snap.pulley->friction}};
    if (snap.pulley->warning) warnings.push_back(*snap.pulley->warning);
  }
  doc["warnings"] = std::move(warnings);
  return doc.dump();
}

SessionController::SessionController(Scenario scenario, std::filesystem::path record_dir)
    : sim_(std::move(scenario)), record_dir_(std::move(record_dir)) {}

std::string SessionController::apply(const ParsedCommand& command) {
  json ack = reply_base(command, "ack");
  try {
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, cmd::SetParam>) {
            sim_.set_scenario(with_param(sim_.scenario(), c.key, c.value));
          } else if constexpr (std::is_same_v<T, cmd::ProxyInput>) {
            device_.set(c.device_coord);
          } else if constexpr (std::is_same_v<T, cmd::Reset>) {
            device_.clear();
            sim_.restart();
          } else if constexpr (std::is_same_v<T, cmd::Record>) {
            if (c.on && !recording_.is_open()) {
              std::filesystem::create_directories(record_dir_);
              recording_path_ = record_dir_ / ("recording-" + std::to_string(++recordings_started_) + ".csv");
              recording_.open(recording_path_, std::ios::binary | std::ios::trunc);
              if (!recording_) throw std::runtime_error("cannot open " + recording_path_.string());
              recording_ << kTrajectoryCsvHeader << '\n';
            } else if (!c.on && recording_.is_open()) {
              recording_.close();
            }
            if (!recording_path_.empty()) ack["path"] = recording_path_.string();
          } else if constexpr (std::is_same_v<T, cmd::SetScenario>) {
            sim_.set_scenario(with_kind(sim_.scenario(), c.kind));
          } else if constexpr (std::is_same_v<T, cmd::LoadScenario>) {
            sim_.set_scenario(load_scenario(c.document));
            sim_.restart();
          }
        },
        command.command);
  } catch (const ValidationError& e) {
    return validation_reply(command, e);
  } catch (const ParseError& e) {
    json reply = reply_base(command, "error");
    reply["error"] = "malformed";
    reply["message"] = e.what();
    return reply.dump();
  } catch (const std::exception& e) {
    json reply = reply_base(command, "error");
    reply["error"] = "runtime";
    reply["message"] = e.what();
    return reply.dump();
  }
  return ack.dump();
}

const TrajectorySample& SessionController::tick() {
  last_ = sim_.tick(device_.sample(sim_.next_time()));
  if (recording_.is_open()) recording_ << to_csv_row(last_) << '\n';
  return last_;
}

StateSnapshot SessionController::snapshot() const {
  StateSnapshot snap;
  snap.seq = sim_.ticks();
  snap.sample = last_;
  snap.scenario = sim_.scenario();
  snap.gravity_total = sim_.scene().mass * sim_.scene().gravity;
  snap.recording = recording_.is_open();
  if (snap.scenario.kind == ScenarioKind::Pulley && snap.scenario.pulley) snap.pulley = solve(*snap.scenario.pulley);
  return snap;
}

}  // namespace frictionsim
