#pragma once

#include <filesystem>
#include <memory>
#include <stdexcept>
#include <string>

#include "frictionsim/scenario.hpp"

namespace frictionsim {

class BindError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ServiceOptions {
  std::string host = "127.0.0.1";
  unsigned short port = 8787;  // 0 picks a free port
  double broadcast_hz = 60.0;
  std::filesystem::path record_dir = ".";
};

/// Websocket server around one SessionController. The simulation advances in
/// real time on its own thread at the scene's dt; clients are served on a
/// separate I/O thread. Binds in the constructor (throws BindError).
class Service {
public:
  Service(Scenario scenario, ServiceOptions options);
  ~Service();

  Service(const Service&) = delete;
  Service& operator=(const Service&) = delete;

  void start();
  void stop();

  unsigned short port() const;
  /// host:port actually bound.
  std::string address() const;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace frictionsim
