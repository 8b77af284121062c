#pragma once

// The fixed-tick simulation loop: sample input, map it through the coupling,
// step the block, record. Everything here is deterministic: identical
// scenario and input sequence give bit-identical samples.

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "frictionsim/haptics.hpp"
#include "frictionsim/physics.hpp"
#include "frictionsim/scenario.hpp"

namespace frictionsim {

struct TrajectorySample {
  double t = 0.0;
  double s = 0.0;
  double v = 0.0;
  ContactMode mode = ContactMode::Static;
  double applied = 0.0;
  double friction = 0.0;
  double normal = 0.0;
  double gravity_t = 0.0;
  double net = 0.0;
  double proxy_s = 0.0;  // NaN when no device drives the block
  bool contact = false;
};

/// Bitwise equality, so NaN == NaN and 0.0 != -0.0.
bool identical(const TrajectorySample& a, const TrajectorySample& b);

struct Trajectory {
  std::vector<TrajectorySample> samples;
  // Input consumed by each sample; kept for replay, not written to CSV.
  std::vector<Actuation> inputs;
};

/// Stateful loop around step(). The first tick after construction or
/// restart() resolves forces on the current state without integrating, so it
/// reports the initial state itself.
class Simulation {
public:
  explicit Simulation(Scenario scenario);

  /// Time the next tick() will be stamped with; sample inputs at this time.
  double next_time() const;

  TrajectorySample tick(const Actuation& input);

  /// Restore the scenario's initial block state. Time keeps running.
  void restart();

  /// Swap parameters between ticks. The block state carries over, clamped
  /// into the new bounds.
  void set_scenario(Scenario scenario);

  const Scenario& scenario() const { return scenario_; }
  const SceneParams& scene() const { return scene_; }
  const BlockState& state() const { return state_; }
  std::size_t ticks() const { return ticks_; }

private:
  Scenario scenario_;
  SceneParams scene_;
  BlockState state_;
  std::size_t ticks_ = 0;          // completed ticks
  std::size_t epoch_tick_ = 0;     // tick index where the current dt took over
  double epoch_time_ = 0.0;
  double last_time_ = 0.0;
  bool resolve_only_ = true;
  std::optional<double> last_proxy_;
};

/// Samples produced for a run of `duration` seconds: floor(duration/dt) + 1.
std::size_t sample_count(double duration, double dt);

using SampleSink = std::function<void(const TrajectorySample&, const Actuation&)>;

/// Streams every sample to `sink` instead of keeping the log.
void run(const Scenario& scenario, InputSource& device, const SampleSink& sink);

/// Full log. Requires scenario.duration.
Trajectory run(const Scenario& scenario, InputSource& device);

class ReplayMismatch : public std::runtime_error {
public:
  ReplayMismatch(std::size_t index, double t);
  std::size_t index() const noexcept { return index_; }
  double t() const noexcept { return t_; }

private:
  std::size_t index_;
  double t_;
};

/// Re-executes the recorded inputs against `scenario`. Returns true when every
/// sample matches bit for bit, otherwise throws ReplayMismatch for the first
/// divergent sample.
bool replay(const Trajectory& trajectory, const Scenario& scenario);

inline constexpr const char* kTrajectoryCsvHeader = "t,s,v,mode,applied,friction,normal,gravity_t,net,proxy_s,contact";

/// One CSV row, 9 significant digits, no trailing newline.
std::string to_csv_row(const TrajectorySample& sample);

void write_csv(std::ostream& out, const std::vector<TrajectorySample>& samples);
std::string to_csv(const std::vector<TrajectorySample>& samples);

/// Index of the first Static -> Kinetic transition, if any.
std::optional<std::size_t> find_breakaway(const std::vector<TrajectorySample>& samples);

}  // namespace frictionsim
