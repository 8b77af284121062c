#pragma once

// Wire protocol of the state-streaming service and the tick-atomic command
// handling behind it. JSON text messages; angles in degrees on the wire.
//
// Client -> server, one command per message:
//   {"type":"cmd","cmd":"set_param","key":"angle_deg","value":35}
//   {"type":"cmd","cmd":"proxy","device_coord":0.25}
//   {"type":"cmd","cmd":"reset"}
//   {"type":"cmd","cmd":"record","on":true}
//   {"type":"cmd","cmd":"set_scenario","kind":"pulley"}
//   {"type":"cmd","cmd":"load_scenario","document":{...scenario document...}}
// An optional "id" (any JSON value) is echoed in the reply.
//
// Server -> issuing client:
//   {"type":"ack","cmd":"set_param"}            (+ "path" for record)
//   {"type":"error","error":"validation","field":"mass_kg","message":"..."}
//   {"type":"error","error":"malformed","message":"..."}
//
// Server -> every client, at the broadcast rate:
//   {"type":"state","seq":..,"t":..,"s":..,"v":..,"mode":"static"|"kinetic",
//    "forces":{"gravity_total","gravity_tangential","normal","applied","friction","net"},
//    "proxy_s":number|null,"contact":bool,"scenario":"incline"|"pulley",
//    "params":{...scenario document...},"recording":bool,"warnings":[..],
//    "pulley":{"regime","acceleration","tension","friction"}  (pulley scenarios)}

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "frictionsim/haptics.hpp"
#include "frictionsim/pulley.hpp"
#include "frictionsim/scenario.hpp"
#include "frictionsim/session.hpp"

namespace frictionsim {

namespace cmd {
struct SetParam {
  std::string key;
  double value = 0.0;
};
struct ProxyInput {
  double device_coord = 0.0;
};
struct Reset {};
struct Record {
  bool on = false;
};
struct SetScenario {
  ScenarioKind kind = ScenarioKind::Incline;
};
struct LoadScenario {
  std::string document;
};
}  // namespace cmd

using Command = std::variant<cmd::SetParam, cmd::ProxyInput, cmd::Reset, cmd::Record, cmd::SetScenario,
                             cmd::LoadScenario>;

std::string_view command_name(const Command& command);

struct ParsedCommand {
  Command command;
  std::optional<std::string> id_json;  // echoed verbatim in the reply
};

/// Throws ParseError for anything that is not a well-formed command message.
ParsedCommand parse_command(std::string_view message);

std::string malformed_reply(std::string_view message);

struct StateSnapshot {
  std::uint64_t seq = 0;
  TrajectorySample sample;
  double gravity_total = 0.0;
  Scenario scenario;
  bool recording = false;
  std::optional<PulleySolution> pulley;
};

std::string to_json(const StateSnapshot& snapshot);

/// Session state shared by every client of one service: the simulation, the
/// UI-fed device and the optional server-side recording. Single-threaded; the
/// service loop drains commands into apply() between ticks.
class SessionController {
public:
  SessionController(Scenario scenario, std::filesystem::path record_dir);

  /// Reply message for the issuing client.
  std::string apply(const ParsedCommand& command);

  const TrajectorySample& tick();

  StateSnapshot snapshot() const;

  const Simulation& simulation() const { return sim_; }
  bool recording() const { return recording_.is_open(); }
  const std::filesystem::path& recording_path() const { return recording_path_; }

private:
  Simulation sim_;
  LiveDevice device_;
  TrajectorySample last_{};
  std::uint64_t seq_ = 0;
  std::filesystem::path record_dir_;
  std::filesystem::path recording_path_;
  std::ofstream recording_;
  int recordings_started_ = 0;
};

}  // namespace frictionsim
