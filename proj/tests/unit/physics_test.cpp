#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <vector>
#include <numbers>

#include "frictionsim/errors.hpp"
#include "frictionsim/physics.hpp"
#include "support/oracles.hpp"

using namespace frictionsim;
using frictionsim::testing::Gen;

namespace {

constexpr double kG = 9.8;
const double k30 = std::numbers::pi / 6.0;

SceneParams scene(double mass, double angle, double mu_s, double mu_k = 0.0) {
  SceneParams p;
  p.mass = mass;
  p.angle = angle;
  p.mu_static = mu_s;
  p.mu_kinetic = mu_k;
  p.gravity = kG;
  return p;
}

BlockState rest(double s = 0.5) { return {s, 0.0, ContactMode::Static}; }

// Friction acts on the velocity the tick started with; a wall bounce may flip
// the reported velocity afterwards.
void expect_breakdown_invariants(const StepResult& r, const SceneParams& p, double v_in = 0.0) {
  EXPECT_LE(std::abs(r.forces.friction), p.mu_static * r.forces.normal + 1e-12);
  if (r.state.mode == ContactMode::Static) {
    EXPECT_EQ(r.forces.net, 0.0);
    EXPECT_EQ(r.state.v, 0.0);
  }
  if (v_in != 0.0 && r.state.mode == ContactMode::Kinetic) EXPECT_LE(r.forces.friction * v_in, 0.0);
}

}  // namespace

TEST(NormalForce, FlatPlaneIsFullWeight) { EXPECT_DOUBLE_EQ(normal_force(scene(1, 0, 0)), 9.8); }

TEST(NormalForce, ThirtyDegrees) {
  // 2 * 9.8 * cos(30 deg) = 9.8 * sqrt(3)
  EXPECT_NEAR(normal_force(scene(2, k30, 0)), 9.8 * std::sqrt(3.0), 1e-12);
  EXPECT_NEAR(normal_force(scene(2, k30, 0)), 16.9740979, 1e-6);
}

TEST(NormalForce, VanishesTowardsVertical) {
  const double n = normal_force(scene(1, std::numbers::pi / 2 - 1e-9, 0));
  EXPECT_GT(n, 0.0);
  EXPECT_LT(n, 1e-7);
}

TEST(MaxStaticFriction, Examples) {
  EXPECT_EQ(max_static_friction(scene(3, 0.4, 0.0)), 0.0);
  EXPECT_NEAR(max_static_friction(scene(1, k30, 0.5)), 4.24352448, 1e-8);
  EXPECT_DOUBLE_EQ(max_static_friction(scene(1, 0, 1.0)), 9.8);
}

TEST(WillSlip, AngleOfRepose) {
  EXPECT_TRUE(will_slip(scene(1, k30, 0.5), 0.0));   // tan 30 = 0.577 > 0.5
  EXPECT_FALSE(will_slip(scene(1, k30, 0.7), 0.0));  // tan 30 < 0.7
  EXPECT_FALSE(will_slip(scene(1, 0, 0.0), 0.0));
  EXPECT_FALSE(will_slip(scene(1, 0, 0.8), 0.0));
}

TEST(StaticFriction, BalancesDrivingForce) {
  EXPECT_NEAR(static_friction(scene(1, k30, 0.7), 0.0), 4.9, 1e-12);
  EXPECT_EQ(static_friction(scene(1, 0, 0.7), 0.0), 0.0);
  EXPECT_NEAR(static_friction(scene(1, k30, 0.7), 4.9), 0.0, 1e-12);
}

TEST(StaticFriction, RejectsDrivingOutsideCone) {
  EXPECT_THROW(static_friction(scene(1, k30, 0.5), 0.0), StaticConeViolation);
}

TEST(KineticFriction, OpposesVelocity) {
  const SceneParams p = scene(1, 0, 0.5, 0.3);
  EXPECT_NEAR(kinetic_friction(p, 1.0, 0.0), -2.94, 1e-12);
  EXPECT_NEAR(kinetic_friction(p, -1.0, 0.0), 2.94, 1e-12);
  EXPECT_EQ(kinetic_friction(scene(1, 0, 0.5, 0.0), 3.0, 0.0), 0.0);
}

TEST(KineticFriction, OpposesDrivingForceFromRest) {
  const SceneParams p = scene(1, 0, 0.5, 0.3);
  EXPECT_NEAR(kinetic_friction(p, 0.0, 5.0), -2.94, 1e-12);
  EXPECT_NEAR(kinetic_friction(p, 0.0, -5.0), 2.94, 1e-12);
}

TEST(Step, EquilibriumIsFixedPoint) {
  const auto r = step(rest(), scene(1, 0, 0.5, 0.3), 0.0);
  EXPECT_EQ(r.state.s, 0.5);
  EXPECT_EQ(r.state.v, 0.0);
  EXPECT_EQ(r.state.mode, ContactMode::Static);
  EXPECT_EQ(r.forces.friction, 0.0);
  EXPECT_EQ(r.forces.net, 0.0);
}

TEST(Step, StaysStaticInsideCone) {
  const auto r = step(rest(), scene(1, k30, 0.7, 0.5), 0.0);
  EXPECT_EQ(r.state.mode, ContactMode::Static);
  EXPECT_EQ(r.state.s, 0.5);
  EXPECT_NEAR(r.forces.friction, 4.9, 1e-12);
  EXPECT_EQ(r.forces.net, 0.0);
}

TEST(Step, OneKineticEulerStep) {
  SceneParams p = scene(1, 0, 0.5, 0.3);
  p.bounds = {-10, 10};
  const auto r = step({0.25, 2.0, ContactMode::Kinetic}, p, 0.0);
  // v' = 2 - 0.3 * 9.8 * 0.001, s' = s + v' * dt
  EXPECT_NEAR(r.state.v, 1.99706, 1e-12);
  EXPECT_NEAR(r.state.s, 0.25 + 0.00199706, 1e-12);
  EXPECT_EQ(r.state.mode, ContactMode::Kinetic);
  EXPECT_NEAR(r.forces.friction, -2.94, 1e-12);
  EXPECT_NEAR(r.forces.net, -2.94, 1e-12);
}

TEST(Step, BreaksAwayPastTheCone) {
  const SceneParams p = scene(1, 0, 0.5, 0.3);
  const auto r = step(rest(), p, 5.0);
  EXPECT_EQ(r.state.mode, ContactMode::Kinetic);
  EXPECT_NEAR(r.forces.friction, -2.94, 1e-12);
  EXPECT_NEAR(r.state.v, (5.0 - 2.94) * p.dt, 1e-15);
}

TEST(Step, ResticksOnVelocityReversal) {
  SceneParams p = scene(1, 0, 0.5, 0.3);
  const auto r = step({0.5, 0.001, ContactMode::Kinetic}, p, 0.0);
  EXPECT_EQ(r.state.mode, ContactMode::Static);
  EXPECT_EQ(r.state.v, 0.0);
  EXPECT_EQ(r.forces.net, 0.0);
}

TEST(Step, ReversalUnderStrongDrivingKeepsSliding) {
  // Moving up a steep slope: the block stops and must slide back down.
  SceneParams p = scene(1, degrees_to_radians(40), 0.3, 0.2);
  const auto r = step({0.5, 0.001, ContactMode::Kinetic}, p, 0.0);
  EXPECT_EQ(r.state.v, 0.0);
  EXPECT_EQ(r.state.mode, ContactMode::Kinetic);
  const auto next = step(r.state, p, 0.0);
  EXPECT_LT(next.state.v, 0.0);
}

TEST(Step, KineticAboveStaticCoefficientDoesNotReverse) {
  SceneParams p = scene(1, 0, 0.2, 0.6);
  const auto r = step(rest(), p, 3.0);  // cone 1.96 < 3 < kinetic 5.88
  EXPECT_GE(r.state.v, 0.0);
  EXPECT_EQ(r.state.s, 0.5);
  EXPECT_EQ(validation_warnings(p).size(), 1u);
}

TEST(EnforceBounds, MirrorsOvershootAndInvertsMomentum) {
  SceneParams p;
  const auto out = enforce_bounds({1.004, 0.5, ContactMode::Kinetic}, p, false);
  EXPECT_NEAR(out.s, 0.996, 1e-15);
  EXPECT_EQ(out.v, -0.5);
  EXPECT_EQ(out.mode, ContactMode::Kinetic);

  const auto low = enforce_bounds({-0.01, -0.25, ContactMode::Kinetic}, p, false);
  EXPECT_NEAR(low.s, 0.01, 1e-15);
  EXPECT_EQ(low.v, 0.25);
}

TEST(EnforceBounds, HoldsUnderOutwardPush) {
  SceneParams p;
  const auto out = enforce_bounds({1.0, 0.0, ContactMode::Static}, p, true);
  EXPECT_EQ(out.s, 1.0);
  EXPECT_EQ(out.v, 0.0);
  EXPECT_EQ(out.mode, ContactMode::Static);
}

TEST(EnforceBounds, InsideIsIdentity) {
  SceneParams p;
  const BlockState in{0.3, -0.2, ContactMode::Kinetic};
  const auto out = enforce_bounds(in, p, false);
  EXPECT_EQ(out.s, in.s);
  EXPECT_EQ(out.v, in.v);
  EXPECT_EQ(out.mode, in.mode);
}

TEST(Step, WallHoldsSustainedOutwardPush) {
  SceneParams p = scene(1, degrees_to_radians(10), 0.3, 0.2);
  BlockState state{1.0, 0.0, ContactMode::Static};
  for (int i = 0; i < 2000; ++i) {
    const auto r = step(state, p, 30.0);
    EXPECT_EQ(r.state.s, 1.0);
    EXPECT_EQ(r.state.v, 0.0);
    EXPECT_EQ(r.forces.net, 0.0);
    expect_breakdown_invariants(r, p);
    state = r.state;
  }
}

TEST(Step, SlowArrivalUnderPushIsHeld) {
  // Regression: a block a few microns off the wall bounced forever.
  SceneParams p = scene(1, degrees_to_radians(20), 0.5, 0.3);
  BlockState state{2.5e-6, -0.0095895, ContactMode::Kinetic};
  const auto r = step(state, p, -9.0);
  EXPECT_EQ(r.state.s, 0.0);
  EXPECT_EQ(r.state.v, 0.0);
  EXPECT_EQ(r.state.mode, ContactMode::Static);
  EXPECT_EQ(r.forces.net, 0.0);
}

TEST(Step, FastArrivalUnderPushReflects) {
  SceneParams p = scene(1, 0, 0.5, 0.3);
  const BlockState state{0.9999, 0.5, ContactMode::Kinetic};
  const auto r = step(state, p, 9.0);
  EXPECT_LT(r.state.v, 0.0);
  EXPECT_LE(r.state.s, 1.0);
}

TEST(Validate, RejectsOutOfRangeFields) {
  const auto field_of = [](SceneParams p) {
    try {
      validate(p);
    } catch (const ValidationError& e) {
      return e.field();
    }
    return std::string();
  };
  SceneParams p;
  EXPECT_EQ(field_of(p), "");
  p.mass = -1;
  EXPECT_EQ(field_of(p), "mass_kg");
  p = {};
  p.angle = std::numbers::pi / 2;
  EXPECT_EQ(field_of(p), "angle_deg");
  p = {};
  p.mu_kinetic = std::nan("");
  EXPECT_EQ(field_of(p), "mu_kinetic");
  p = {};
  p.bounds = {1, 1};
  EXPECT_EQ(field_of(p), "bounds");
  p = {};
  p.dt = 0;
  EXPECT_EQ(field_of(p), "dt_s");
}

// ---- properties ----

TEST(PhysicsProperties, StictionHoldsExactly) {
  Gen gen(11);
  for (int trial = 0; trial < 100; ++trial) {
    SceneParams p = scene(gen.uniform(0.1, 10), gen.uniform(0, 1.2), gen.uniform(0, 1.5), gen.uniform(0, 1.0));
    const double cone = max_static_friction(p);
    const double applied = -tangential_gravity(p) + gen.uniform(-1, 1) * cone;
    BlockState state = rest(gen.uniform(0.1, 0.9));
    const double s0 = state.s;
    for (int i = 0; i < 1000; ++i) {
      const auto r = step(state, p, applied);
      ASSERT_EQ(r.state.mode, ContactMode::Static);
      ASSERT_EQ(r.state.s, s0);
      ASSERT_EQ(r.state.v, 0.0);
      state = r.state;
    }
  }
}

TEST(PhysicsProperties, BreakawayWithinOneIncrement) {
  Gen gen(12);
  for (int trial = 0; trial < 30; ++trial) {
    const double mu = gen.uniform(0.1, 1.2);
    SceneParams p = scene(gen.uniform(0.2, 5), gen.uniform(0, std::atan(mu) * 0.95), mu, mu * 0.7);
    const double threshold = p.mass * p.gravity * (std::sin(p.angle) + mu * std::cos(p.angle));
    const double increment = 1e-3;
    BlockState state = rest();
    double applied = 0.0;
    while (true) {
      const auto r = step(state, p, applied);
      if (r.state.mode == ContactMode::Kinetic) break;
      state = r.state;
      applied += increment;
    }
    EXPECT_GT(applied, threshold - 1e-9);
    EXPECT_LE(applied, threshold + increment + 1e-9);
  }
}

TEST(PhysicsProperties, AngleOfRepose) {
  Gen gen(13);
  for (int trial = 0; trial < 200; ++trial) {
    const double mu = gen.uniform(0.05, 1.5);
    const double angle = gen.uniform(0, 1.5);
    SceneParams p = scene(gen.uniform(0.1, 5), angle, mu, mu * 0.5);
    const auto r = step(rest(), p, 0.0);
    EXPECT_EQ(r.state.mode == ContactMode::Static, std::tan(angle) <= mu) << "angle " << angle << " mu " << mu;
  }
}

TEST(PhysicsProperties, FrictionConeAndKineticOpposition) {
  Gen gen(14);
  for (int trial = 0; trial < 50; ++trial) {
    const double mu = gen.uniform(0.05, 1.2);
    SceneParams p = scene(gen.uniform(0.1, 5), gen.uniform(0, 1.2), mu, gen.uniform(0, mu));
    BlockState state = rest(gen.uniform(0, 1));
    for (int i = 0; i < 3000; ++i) {
      const double applied = 20.0 * std::sin(0.003 * i + trial);
      const auto r = step(state, p, applied);
      expect_breakdown_invariants(r, p, state.v);
      ASSERT_GE(r.state.s, p.bounds.min_m);
      ASSERT_LE(r.state.s, p.bounds.max_m);
      state = r.state;
    }
  }
}

TEST(PhysicsProperties, FlatPlaneDissipates) {
  Gen gen(15);
  for (int trial = 0; trial < 50; ++trial) {
    SceneParams p = scene(gen.uniform(0.1, 5), 0.0, 0.6, gen.uniform(0.01, 0.6));
    p.bounds = {-100, 100};
    BlockState state{0.0, gen.uniform(-5, 5), ContactMode::Kinetic};
    double energy = 0.5 * p.mass * state.v * state.v;
    for (int i = 0; i < 5000; ++i) {
      state = step(state, p, 0.0).state;
      const double next = 0.5 * p.mass * state.v * state.v;
      ASSERT_LE(next, energy);
      energy = next;
    }
  }
}

TEST(PhysicsProperties, StoppingDistanceConverges) {
  const double exact = 2.0 * 2.0 / (2.0 * 0.3 * 9.8);  // 0.680272 m
  double previous_error = 1.0;
  for (const double dt : {4e-3, 1e-3, 2.5e-4}) {
    SceneParams p = scene(1, 0, 0.5, 0.3);
    p.dt = dt;
    p.bounds = {-10, 10};
    BlockState state{0.0, 2.0, ContactMode::Kinetic};
    while (state.mode == ContactMode::Kinetic) state = step(state, p, 0.0).state;
    const double error = std::abs(state.s - exact) / exact;
    if (dt == 1e-3) EXPECT_LT(error, 0.005);
    EXPECT_LT(error, previous_error);
    previous_error = error;
  }
}

TEST(PhysicsProperties, ReflectionPreservesSpeed) {
  Gen gen(16);
  SceneParams p;
  for (int trial = 0; trial < 1000; ++trial) {
    const double overshoot = gen.uniform(1e-9, 0.2);
    const double v = gen.uniform(0.01, 50);
    const bool upper = trial % 2 == 0;
    const BlockState in{upper ? 1.0 + overshoot : -overshoot, upper ? v : -v, ContactMode::Kinetic};
    const auto out = enforce_bounds(in, p, false);
    EXPECT_GE(out.s, 0.0);
    EXPECT_LE(out.s, 1.0);
    EXPECT_LE(std::abs(std::abs(out.v) - v) / v, 1e-12);
    EXPECT_EQ(std::signbit(out.v), upper);
  }
}

TEST(PhysicsProperties, Deterministic) {
  SceneParams p = scene(1.3, 0.3, 0.4, 0.25);
  const auto simulate = [&] {
    std::vector<BlockState> out;
    BlockState state = rest();
    for (int i = 0; i < 5000; ++i) {
      state = step(state, p, 15.0 * std::sin(0.002 * i)).state;
      out.push_back(state);
    }
    return out;
  };
  const auto a = simulate();
  const auto b = simulate();
  for (std::size_t i = 0; i < a.size(); ++i) {
    ASSERT_EQ(std::memcmp(&a[i].s, &b[i].s, sizeof(double)), 0);
    ASSERT_EQ(std::memcmp(&a[i].v, &b[i].v, sizeof(double)), 0);
    ASSERT_EQ(a[i].mode, b[i].mode);
  }
}
