#include "frictionsim/haptics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <json.hpp>

#include "frictionsim/errors.hpp"

namespace frictionsim {

void validate(const CouplingParams& p) {
  if (!(p.stiffness > 0.0) || !std::isfinite(p.stiffness))
    throw ValidationError("coupling.stiffness_n_per_m", "stiffness must be > 0");
  if (!(p.damping >= 0.0) || !std::isfinite(p.damping))
    throw ValidationError("coupling.damping", "damping must be >= 0");
  if (!(p.max_force > 0.0) || !std::isfinite(p.max_force))
    throw ValidationError("coupling.max_force_n", "max_force must be > 0");
  if (!(p.block_half_length > 0.0) || !std::isfinite(p.block_half_length))
    throw ValidationError("coupling.block_half_length_m", "block_half_length must be > 0");
}

double map_workspace(double device_coord, const Bounds& bounds) {
  return bounds.center() + device_coord * bounds.half_span();
}

CouplingForce coupling_force(const ProxyState& proxy, const BlockState& block, const CouplingParams& params) {
  double penetration = 0.0;
  double direction = 0.0;
  double closing = 0.0;
  if (proxy.s_proxy <= block.s) {
    penetration = proxy.s_proxy - (block.s - params.block_half_length);
    direction = 1.0;
    closing = proxy.v_proxy - block.v;
  } else {
    penetration = (block.s + params.block_half_length) - proxy.s_proxy;
    direction = -1.0;
    closing = block.v - proxy.v_proxy;
  }
  if (!(penetration > 0.0)) return {};

  const double magnitude =
      std::min(params.stiffness * penetration + params.damping * std::max(0.0, closing), params.max_force);
  CouplingForce out;
  out.applied_to_block = direction * magnitude;
  out.rendered_to_device = -out.applied_to_block;
  out.contact = true;
  return out;
}

ScriptedDevice::ScriptedDevice(std::vector<Keyframe> keyframes) : keyframes_(std::move(keyframes)) {
  for (std::size_t i = 1; i < keyframes_.size(); ++i) {
    if (!(keyframes_[i].first > keyframes_[i - 1].first)) {
      throw NonMonotonicScript("script times must strictly increase (keyframe " + std::to_string(i) + ")");
    }
  }
}

ScriptedDevice ScriptedDevice::from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("script: ") + e.what());
  }
  if (!doc.is_array()) throw ParseError("script: expected a JSON array of [t, device_coord] pairs");

  std::vector<Keyframe> frames;
  frames.reserve(doc.size());
  for (const auto& item : doc) {
    if (!item.is_array() || item.size() != 2 || !item[0].is_number() || !item[1].is_number()) {
      throw ParseError("script: each entry must be [t_seconds, device_coord]");
    }
    frames.emplace_back(item[0].get<double>(), item[1].get<double>());
  }
  return ScriptedDevice(std::move(frames));
}

double ScriptedDevice::position(double t) const {
  if (keyframes_.empty()) return 0.0;
  if (t <= keyframes_.front().first) return keyframes_.front().second;
  if (t >= keyframes_.back().first) return keyframes_.back().second;

  const auto upper = std::upper_bound(keyframes_.begin(), keyframes_.end(), t,
                                      [](double value, const Keyframe& k) { return value < k.first; });
  const auto lower = upper - 1;
  const double alpha = (t - lower->first) / (upper->first - lower->first);
  return lower->second + alpha * (upper->second - lower->second);
}

}  // namespace frictionsim
