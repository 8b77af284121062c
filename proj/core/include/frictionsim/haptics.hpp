#pragma once

// Device abstraction and spring-damper virtual coupling. The device is
// collapsed to the single incline axis; its coordinate in [-1, 1] maps
// affinely onto the scene bounds.

#include <optional>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "frictionsim/physics.hpp"

namespace frictionsim {

struct ProxyState {
  double s_proxy = 0.0;  // m
  double v_proxy = 0.0;  // m/s
};

struct CouplingParams {
  double stiffness = 500.0;          // N/m
  double damping = 5.0;              // N s/m
  double max_force = 9.0;            // N
  double block_half_length = 0.05;   // m
};

void validate(const CouplingParams& params);

double map_workspace(double device_coord, const Bounds& bounds);

struct CouplingForce {
  double applied_to_block = 0.0;
  double rendered_to_device = 0.0;
  bool contact = false;
};

/// Point proxy against the two faces of the block. A proxy in the lower half
/// of the block pushes up-slope, one in the upper half pushes down-slope.
CouplingForce coupling_force(const ProxyState& proxy, const BlockState& block, const CouplingParams& params);

struct DeviceCoord {
  double value = 0.0;
};

struct DirectForce {
  double newtons = 0.0;
};

/// What drives the block on one tick: nothing, a device position routed
/// through the coupling, or a force applied straight to the block.
using Actuation = std::variant<std::monostate, DeviceCoord, DirectForce>;

class InputSource {
public:
  virtual ~InputSource() = default;
  virtual Actuation sample(double t) = 0;
};

/// Piecewise-linear keyframed device positions. Holds the first value before
/// the first keyframe and the last value after the last one.
class ScriptedDevice final : public InputSource {
public:
  using Keyframe = std::pair<double, double>;  // (t seconds, device coord)

  ScriptedDevice() = default;
  /// Throws NonMonotonicScript unless times strictly increase.
  explicit ScriptedDevice(std::vector<Keyframe> keyframes);

  /// JSON array of [t_seconds, device_coord] pairs.
  static ScriptedDevice from_json(std::string_view text);

  double position(double t) const;
  Actuation sample(double t) override { return DeviceCoord{position(t)}; }

  const std::vector<Keyframe>& keyframes() const { return keyframes_; }

private:
  std::vector<Keyframe> keyframes_;
};

/// Force on the block of offset + rate * t, bypassing the coupling.
class ForceProfile final : public InputSource {
public:
  ForceProfile(double offset_n, double rate_n_per_s) : offset_(offset_n), rate_(rate_n_per_s) {}

  static ForceProfile constant(double newtons) { return {newtons, 0.0}; }
  static ForceProfile ramp(double rate_n_per_s) { return {0.0, rate_n_per_s}; }

  double force(double t) const { return offset_ + rate_ * t; }
  Actuation sample(double t) override { return DirectForce{force(t)}; }

private:
  double offset_;
  double rate_;
};

/// Device fed by interactive clients: last write wins, idle until the first
/// position arrives. Not synchronized; the owning loop serializes access.
class LiveDevice final : public InputSource {
public:
  void set(double device_coord) { coord_ = device_coord; }
  void clear() { coord_.reset(); }
  Actuation sample(double) override {
    if (coord_) return DeviceCoord{*coord_};
    return std::monostate{};
  }

private:
  std::optional<double> coord_;
};

}  // namespace frictionsim
