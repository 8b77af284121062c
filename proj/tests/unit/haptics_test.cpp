#include <gtest/gtest.h>

#include <cmath>

#include "frictionsim/errors.hpp"
#include "frictionsim/haptics.hpp"
#include "support/oracles.hpp"

using namespace frictionsim;
using frictionsim::testing::Gen;

namespace {

CouplingParams stiff_only() {
  CouplingParams c;
  c.stiffness = 500;
  c.damping = 0;
  c.max_force = 9;
  c.block_half_length = 0.05;
  return c;
}

}  // namespace

TEST(MapWorkspace, AffineOntoBounds) {
  EXPECT_EQ(map_workspace(0.0, {0, 1}), 0.5);
  EXPECT_EQ(map_workspace(1.0, {0, 1}), 1.0);
  EXPECT_EQ(map_workspace(-1.0, {0, 1}), 0.0);
  EXPECT_EQ(map_workspace(0.5, {0, 2}), 1.5);
  EXPECT_EQ(map_workspace(2.0, {0, 1}), 1.5);  // out of range maps linearly
}

TEST(CouplingForce, NoContact) {
  const BlockState block{0.5, 0, ContactMode::Static};
  const auto f = coupling_force({0.2, 1.0}, block, stiff_only());
  EXPECT_EQ(f.applied_to_block, 0.0);
  EXPECT_EQ(f.rendered_to_device, 0.0);
  EXPECT_FALSE(f.contact);
}

TEST(CouplingForce, SpringPenetrationPushesUpSlope) {
  const BlockState block{0.5, 0, ContactMode::Static};
  const auto f = coupling_force({0.452, 0.0}, block, stiff_only());  // 2 mm into the lower face
  EXPECT_NEAR(f.applied_to_block, 1.0, 1e-9);
  EXPECT_NEAR(f.rendered_to_device, -1.0, 1e-9);
  EXPECT_TRUE(f.contact);
}

TEST(CouplingForce, UpperFacePushesDownSlope) {
  const BlockState block{0.5, 0, ContactMode::Static};
  const auto f = coupling_force({0.548, 0.0}, block, stiff_only());
  EXPECT_NEAR(f.applied_to_block, -1.0, 1e-9);
}

TEST(CouplingForce, ClampsToMaxForce) {
  const BlockState block{0.5, 0, ContactMode::Static};
  const auto up = coupling_force({0.49, 0.0}, block, stiff_only());  // k * 0.04 = 20 N
  EXPECT_EQ(up.applied_to_block, 9.0);
  EXPECT_EQ(up.rendered_to_device, -9.0);
  const auto down = coupling_force({0.51, 0.0}, block, stiff_only());
  EXPECT_EQ(down.applied_to_block, -9.0);
  EXPECT_EQ(down.rendered_to_device, 9.0);
}

TEST(CouplingForce, DampingOnlyWhileClosing) {
  CouplingParams c = stiff_only();
  c.damping = 5;
  const BlockState block{0.5, 0, ContactMode::Static};
  EXPECT_NEAR(coupling_force({0.452, 0.1}, block, c).applied_to_block, 1.5, 1e-9);
  EXPECT_NEAR(coupling_force({0.452, -0.1}, block, c).applied_to_block, 1.0, 1e-9);
}

TEST(CouplingProperties, ActionReactionAndClamp) {
  Gen gen(31);
  for (int i = 0; i < 5000; ++i) {
    CouplingParams c;
    c.stiffness = gen.uniform(1, 5000);
    c.damping = gen.uniform(0, 50);
    c.max_force = gen.uniform(0.1, 20);
    c.block_half_length = gen.uniform(0.001, 0.2);
    const BlockState block{gen.uniform(0, 1), gen.uniform(-2, 2), ContactMode::Kinetic};
    const auto f = coupling_force({gen.uniform(-0.5, 1.5), gen.uniform(-3, 3)}, block, c);
    EXPECT_EQ(f.rendered_to_device, -f.applied_to_block);
    EXPECT_LE(std::abs(f.rendered_to_device), c.max_force);
  }
}

TEST(CouplingProperties, ContinuousAtContactOnset) {
  const auto c = stiff_only();
  const BlockState block{0.5, 0, ContactMode::Static};
  const double face = 0.45;
  for (const double eps : {1e-3, 1e-6, 1e-9}) {
    EXPECT_LE(std::abs(coupling_force({face + eps, 0}, block, c).applied_to_block), c.stiffness * eps * 1.0000001);
    EXPECT_EQ(coupling_force({face - eps, 0}, block, c).applied_to_block, 0.0);
  }
  EXPECT_EQ(coupling_force({face, 0}, block, c).applied_to_block, 0.0);
}

TEST(CouplingProperties, DampingNeverInjectsEnergy) {
  // Proxy oscillating into a static block: work done on the device by the
  // damping part of the rendered force over whole cycles is never positive.
  CouplingParams c;
  c.max_force = 1e9;
  const CouplingParams spring = [&] {
    CouplingParams s = c;
    s.damping = 0;
    return s;
  }();
  const BlockState block{0.5, 0, ContactMode::Static};
  const double dt = 1e-4;
  const double omega = 2 * 3.14159265358979 * 3;
  double work = 0.0;
  for (int i = 0; i < static_cast<int>(1.0 / dt); ++i) {  // three full cycles
    const double t = i * dt;
    const ProxyState proxy{0.45 + 0.01 * std::sin(omega * t), 0.01 * omega * std::cos(omega * t)};
    const double damping_part =
        coupling_force(proxy, block, c).rendered_to_device - coupling_force(proxy, block, spring).rendered_to_device;
    work += damping_part * proxy.v_proxy * dt;
  }
  EXPECT_LE(work, 0.0);
}

TEST(ScriptedDevice, EmptyScriptRestsAtZero) {
  ScriptedDevice d;
  EXPECT_EQ(d.position(0.0), 0.0);
  EXPECT_EQ(d.position(12.0), 0.0);
}

TEST(ScriptedDevice, LinearInterpolation) {
  ScriptedDevice d({{0, -1}, {1, 1}});
  EXPECT_EQ(d.position(0.5), 0.0);
  ScriptedDevice e({{0, 0}, {2, 1}});
  EXPECT_EQ(e.position(0.5), 0.25);
}

TEST(ScriptedDevice, HoldsEndpoints) {
  ScriptedDevice d({{1, 0.2}, {2, 0.8}});
  EXPECT_EQ(d.position(0.0), 0.2);
  EXPECT_EQ(d.position(5.0), 0.8);
  EXPECT_EQ(std::get<DeviceCoord>(d.sample(5.0)).value, 0.8);
}

TEST(ScriptedDevice, RejectsNonMonotonicTimes) {
  EXPECT_THROW(ScriptedDevice({{0, 0}, {0, 1}}), NonMonotonicScript);
  EXPECT_THROW(ScriptedDevice({{1, 0}, {0.5, 1}}), NonMonotonicScript);
}

TEST(ScriptedDevice, ParsesJson) {
  const auto d = ScriptedDevice::from_json("[[0, -1], [2, 1]]");
  EXPECT_EQ(d.keyframes().size(), 2u);
  EXPECT_EQ(d.position(1.0), 0.0);
  EXPECT_THROW(ScriptedDevice::from_json("{\"t\": 1}"), ParseError);
  EXPECT_THROW(ScriptedDevice::from_json("[[0, 1, 2]]"), ParseError);
  EXPECT_THROW(ScriptedDevice::from_json("[[0, 1], [0, 2]]"), NonMonotonicScript);
}

TEST(LiveDevice, IdleUntilFirstWrite) {
  LiveDevice d;
  EXPECT_TRUE(std::holds_alternative<std::monostate>(d.sample(0)));
  d.set(0.3);
  d.set(-0.4);
  EXPECT_EQ(std::get<DeviceCoord>(d.sample(0)).value, -0.4);
  d.clear();
  EXPECT_TRUE(std::holds_alternative<std::monostate>(d.sample(0)));
}
