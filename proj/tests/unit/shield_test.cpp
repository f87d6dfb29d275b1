// Copyright 2026 The shieldsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <numbers>
#include <stdexcept>
#include <vector>

#include "oracles.hpp"
#include "shieldsim/rng.hpp"
#include "shieldsim/shield.hpp"

namespace shieldsim::shield {
namespace {

using dynamics::PointRobot;
using dynamics::TrajectoryKind;
using geometry::Point2;
using reachability::CircularMotion;
using reachability::ObstacleKind;
using reachability::StaticMotion;

constexpr double kPi = std::numbers::pi;

Obstacle Hazard(int id, Point2 c, double r) {
  Obstacle ob;
  ob.id = id;
  ob.kind = ObstacleKind::kHazard;
  ob.footprint_radius = r;
  ob.motion = StaticMotion{c};
  return ob;
}

Obstacle Gremlin(int id, Point2 pivot, double orbit, double speed, double phase) {
  Obstacle ob;
  ob.id = id;
  ob.kind = ObstacleKind::kGremlin;
  ob.footprint_radius = 0.1;
  ob.v_max = speed;
  ob.motion = CircularMotion{pivot, orbit, speed / orbit, phase};
  return ob;
}

class ShieldTest : public ::testing::Test {
 protected:
  dynamics::RobotParams params;
  SafetyShield shield{PointRobot(params), dynamics::DefaultGrid(params)};
  const std::size_t k_failsafe = 4342;
};

TEST_F(ShieldTest, Zeta) { EXPECT_DOUBLE_EQ(shield.zeta(), 6.25e-7); }

TEST_F(ShieldTest, ShieldedFromRestIsStationary) {
  const RobotState s0{{0.2, 0.1}, {0, 0}, 0.5};
  const Trajectory t = shield.BuildShielded(s0, {0, 0});
  EXPECT_EQ(t.kind(), TrajectoryKind::kShielded);
  EXPECT_EQ(t.num_steps(), 1 + k_failsafe);
  EXPECT_EQ(t.back(), s0);
  const Trajectory fs = shield.robot().FailsafeTrajectory(s0, shield.grid());
  EXPECT_EQ(t.state(1), fs.state(0));
}

TEST_F(ShieldTest, ShieldedIsOneStepThenFailsafe) {
  const RobotState s0{{0, 0}, {0.1, 0.05}, 0.2};
  const Trajectory t = shield.BuildShielded(s0, {0.05, 0.05});
  EXPECT_EQ(t.num_steps(), 1 + k_failsafe);
  EXPECT_EQ(t.control(0), (Control{0.05, 0.05}));
  const Trajectory fs = shield.robot().FailsafeTrajectory(t.state(1), shield.grid());
  for (std::size_t k = 0; k < fs.num_steps(); k += 97) {
    EXPECT_EQ(t.control(k + 1), fs.control(k));
    EXPECT_EQ(t.state(k + 1), fs.state(k));
  }
  EXPECT_TRUE(PointRobot::AtRest(t.back()));
}

TEST_F(ShieldTest, VerifyEmptySceneIsSafe) {
  const Trajectory t = shield.BuildShielded({{0, 0}, {0.3, 0}, 0}, {0.05, 0});
  EXPECT_TRUE(shield.Verify(t, {}, 0.0).safe);
}

TEST_F(ShieldTest, VerifyFlagsOverlapAtStepZero) {
  const Trajectory t = shield.BuildShielded(RobotState{}, {0, 0});
  const std::vector<Obstacle> obs{Hazard(7, {0.15, 0}, 0.1)};
  const Verdict v = shield.Verify(t, obs, 0.0);
  EXPECT_FALSE(v.safe);
  EXPECT_EQ(v.step, 0u);
  EXPECT_EQ(v.obstacle_id, 7);
}

TEST_F(ShieldTest, VerifyIgnoresGoals) {
  const Trajectory t = shield.BuildShielded(RobotState{}, {0, 0});
  Obstacle goal = Hazard(3, {0, 0}, 0.3);
  goal.kind = ObstacleKind::kGoal;
  const std::vector<Obstacle> obs{goal};
  EXPECT_TRUE(shield.Verify(t, obs, 0.0).safe);
}

TEST_F(ShieldTest, VerifyRequiresRestAtTheEnd) {
  Trajectory t(TrajectoryKind::kShielded, 0.01, {{0, 0}, {0.1, 0}, 0});
  t.Append({0, 0}, shield.robot().Step(t.back(), {0, 0}, 0.01));
  const Verdict v = shield.Verify(t, {}, 0.0);
  EXPECT_FALSE(v.safe);
  EXPECT_EQ(v.obstacle_id, -1);
  t.set_kind(TrajectoryKind::kIntended);
  EXPECT_TRUE(shield.Verify(t, {}, 0.0).safe);
}

TEST_F(ShieldTest, VerifyFindsLateCollisions) {
  // Coasting into a hazard far down the braking path.
  const RobotState s0{{0, 0}, {0.4, 0}, 0};
  const std::vector<Obstacle> obs{Hazard(1, {1.7, 0}, 0.1)};
  const Trajectory t = shield.BuildShielded(s0, {0, 0});
  const Verdict v = shield.Verify(t, obs, 0.0);
  EXPECT_FALSE(v.safe);
  EXPECT_GT(v.step, 300u);
  const std::vector<Obstacle> beyond{Hazard(1, {1.85, 0}, 0.1)};
  EXPECT_TRUE(shield.Verify(t, beyond, 0.0).safe);
}

// Verify = safe must imply that the densely swept motion touches nothing.
TEST_F(ShieldTest, SafeVerdictsHaveNoContact) {
  Rng rng(41);
  int safe = 0, unsafe = 0;
  for (int i = 0; i < 300; ++i) {
    const double speed = rng.Uniform(0, 0.5);
    const double dir = rng.Uniform(-kPi, kPi);
    const RobotState s0{{0, 0}, {speed * std::cos(dir), speed * std::sin(dir)},
                        rng.Uniform(-kPi, kPi)};
    std::vector<Obstacle> obs;
    for (int k = 0; k < 6; ++k) {
      const Point2 c{rng.Uniform(-1.5, 1.5), rng.Uniform(-1.5, 1.5)};
      if (k % 2) {
        obs.push_back(Hazard(k, c, rng.Uniform(0.05, 0.3)));
      } else {
        obs.push_back(Gremlin(k, c, 0.3, 0.12, rng.Uniform(-kPi, kPi)));
      }
    }
    const double t0 = rng.Uniform(0, 50);
    const Control u{rng.Uniform(-0.05, 0.05), rng.Uniform(-0.05, 0.05)};
    const Trajectory t = shield.BuildShielded(s0, u);
    if (!shield.Verify(t, obs, t0).safe) {
      ++unsafe;
      continue;
    }
    ++safe;
    for (std::size_t k = 0; k < t.explicit_steps(); ++k) {
      ASSERT_GE(oracle::SweepGap(t.state(k), t.control(k), t0 + 0.01 * k, 0.01, 0.1, obs, 10),
                0.0);
    }
    // Held steps: the robot sits still while gremlins keep moving.
    const double t_rest = t0 + 0.01 * t.explicit_steps();
    const double t_end = t0 + 0.01 * t.num_steps();
    ASSERT_GE(oracle::SweepGap(t.back(), {}, t_rest, t_end - t_rest, 0.1, obs, 2000), 0.0);
  }
  EXPECT_GT(safe, 30);
  EXPECT_GT(unsafe, 30);
}

TEST_F(ShieldTest, InitializeRequiresRestAndClearance) {
  EXPECT_THROW(shield.Initialize({{0, 0}, {0.1, 0}, 0}, {}, 0.0), std::runtime_error);
  const std::vector<Obstacle> obs{Hazard(0, {0.1, 0}, 0.1)};
  EXPECT_THROW(shield.Initialize(RobotState{}, obs, 0.0), std::runtime_error);
  const ShieldState st = shield.Initialize(RobotState{}, {}, 0.0);
  EXPECT_EQ(st.mode, Mode::kNominal);
  EXPECT_TRUE(PointRobot::AtRest(st.committed.back()));
}

TEST_F(ShieldTest, FreeSpaceNeverIntervenes) {
  Rng rng(42);
  RobotState s{};
  ShieldState st = shield.Initialize(s, {}, 0.0);
  for (int k = 0; k < 5000; ++k) {
    if (k % 10 == 0) SafetyShield::BeginAction(st);
    const Control u{rng.Uniform(-0.05, 0.05), rng.Uniform(-0.05, 0.05)};
    auto [next, d] = shield.Step(std::move(st), s, u, {}, 0.01 * k);
    st = std::move(next);
    EXPECT_FALSE(d.intervention);
    EXPECT_EQ(st.mode, Mode::kNominal);
    s = shield.robot().Step(s, d.executed, 0.01);
  }
}

TEST_F(ShieldTest, WallOfHazardsStopsTheRobot) {
  std::vector<Obstacle> wall;
  for (int i = 0; i < 9; ++i) wall.push_back(Hazard(i, {1.5, -1.0 + 0.25 * i}, 0.15));
  RobotState s{};
  ShieldState st = shield.Initialize(s, wall, 0.0);
  int interventions = 0;
  double min_gap = 1e9;
  for (int k = 0; k < 20000; ++k) {
    if (k % 10 == 0) SafetyShield::BeginAction(st);
    auto [next, d] = shield.Step(std::move(st), s, {0.05, 0}, wall, 0.01 * k);
    st = std::move(next);
    interventions += d.intervention ? 1 : 0;
    min_gap = std::min(min_gap, oracle::SweepGap(s, d.executed, 0.01 * k, 0.01, 0.1, wall, 10));
    s = shield.robot().Step(s, d.executed, 0.01);
  }
  // Stop pushing; the shield brakes the coasting robot to rest.
  for (int k = 20000; k < 25000; ++k) {
    if (k % 10 == 0) SafetyShield::BeginAction(st);
    auto [next, d] = shield.Step(std::move(st), s, {0, 0}, wall, 0.01 * k);
    st = std::move(next);
    min_gap = std::min(min_gap, oracle::SweepGap(s, d.executed, 0.01 * k, 0.01, 0.1, wall, 10));
    s = shield.robot().Step(s, d.executed, 0.01);
  }
  EXPECT_GT(interventions, 0);
  EXPECT_GE(min_gap, 0.0);
  EXPECT_LT(s.p.x, 1.5 - 0.15 - 0.1);
  EXPECT_TRUE(PointRobot::AtRest(s));
}

TEST_F(ShieldTest, ReturnsToNominalOnceClear) {
  const RobotState s{{0, 0}, {0.3, 0}, 0};
  // Braking now stops at x = 0.9; one more step of thrust overshoots 0.9025.
  const std::vector<Obstacle> obs{Hazard(0, {1.1025, 0}, 0.1)};
  // Commit a plan that still clears the hazard, then ask for more speed.
  ShieldState st;
  st.committed = shield.BuildShielded(s, {-0.05, 0});
  ASSERT_TRUE(shield.Verify(st.committed, obs, 0.0).safe);
  st.cursor = 0;
  auto [st1, d1] = shield.Step(std::move(st), s, {0.05, 0}, obs, 0.0);
  EXPECT_TRUE(d1.intervention);
  EXPECT_EQ(st1.mode, Mode::kFailsafe);
  EXPECT_EQ(d1.executed, (Control{-0.05, 0}));
  const RobotState s1 = shield.robot().Step(s, d1.executed, 0.01);
  auto [st2, d2] = shield.Step(std::move(st1), s1, {0.05, 0}, {}, 0.01);
  EXPECT_FALSE(d2.intervention);
  EXPECT_EQ(st2.mode, Mode::kNominal);
}

TEST_F(ShieldTest, InterventionFlaggedOncePerAgentStep) {
  const RobotState s{{0, 0}, {0.3, 0}, 0};
  const std::vector<Obstacle> obs{Hazard(0, {1.1025, 0}, 0.1)};
  ShieldState st;
  st.committed = shield.BuildShielded(s, {-0.05, 0});
  RobotState x = s;
  int flagged = 0;
  SafetyShield::BeginAction(st);
  for (int k = 0; k < 10; ++k) {
    auto [next, d] = shield.Step(std::move(st), x, {0.05, 0}, obs, 0.01 * k);
    st = std::move(next);
    flagged += d.intervention ? 1 : 0;
    x = shield.robot().Step(x, d.executed, 0.01);
  }
  EXPECT_EQ(flagged, 1);
}

}  // namespace
}  // namespace shieldsim::shield
