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

#include "shieldsim/shield.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace shieldsim::shield {

namespace {

using geometry::Ball;
using geometry::Capsule;
using geometry::Point2;
using reachability::ObstaclePredictor;

// Steps per bounding ball in the coarse pass of Verify.
constexpr std::size_t kChunk = 32;

bool Blocks(const ObstaclePredictor& ob, const Capsule& robot, double lookahead_end) {
  const Ball grown{ob.center, ob.radius + ob.v_max * lookahead_end};
  if (!geometry::Intersects(robot, grown)) return false;
  return !ob.confinement || geometry::Intersects(robot, *ob.confinement);
}

bool BlocksBall(const ObstaclePredictor& ob, const Ball& robot, double lookahead_end) {
  const Ball grown{ob.center, ob.radius + ob.v_max * lookahead_end};
  if (!geometry::Intersects(robot, grown)) return false;
  return !ob.confinement || geometry::Intersects(robot, *ob.confinement);
}

bool MustEndAtRest(dynamics::TrajectoryKind kind) {
  return kind != dynamics::TrajectoryKind::kIntended;
}

}  // namespace

std::string_view ToString(Mode mode) {
  return mode == Mode::kNominal ? "nominal" : "failsafe";
}

std::string_view ToString(Substitution sub) {
  switch (sub) {
    case Substitution::kNone: return "none";
    case Substitution::kReplaced: return "replaced";
    case Substitution::kProjected: return "projected";
    case Substitution::kZeroAction: return "zero-action";
  }
  return "unknown";
}

SafetyShield::SafetyShield(dynamics::PointRobot robot, dynamics::TimeGrid grid)
    : robot_(std::move(robot)), grid_(grid) {
  dynamics::ValidateGrid(grid_, robot_.params());
  const auto& p = robot_.params();
  // Peak acceleration is u1_max, i.e. a force bound of u1_max * m.
  zeta_ = reachability::LinearizationError(grid_.dt, p.u1_max * p.mass, p.mass);
}

Trajectory SafetyShield::BuildShielded(const RobotState& s0, const Control& u) const {
  Trajectory traj(dynamics::TrajectoryKind::kShielded, grid_.dt, s0);
  const Control g = robot_.Govern(s0, u, grid_.dt);
  traj.Append(g, robot_.Step(s0, g, grid_.dt));
  robot_.AppendFailsafe(traj, static_cast<std::size_t>(grid_.failsafe_steps));
  return traj;
}

Verdict SafetyShield::Verify(const Trajectory& traj, std::span<const Obstacle> obstacles,
                             double t_now) const {
  std::vector<ObstaclePredictor> preds;
  preds.reserve(obstacles.size());
  for (const Obstacle& ob : obstacles) {
    if (ob.kind == reachability::ObstacleKind::kGoal) continue;
    preds.emplace_back(ob, t_now);
  }

  const double r = occupancy_radius();
  const std::size_t n_explicit = traj.explicit_steps();
  Verdict verdict;

  for (std::size_t k0 = 0; k0 < n_explicit; k0 += kChunk) {
    const std::size_t k1 = std::min(n_explicit, k0 + kChunk);
    Point2 lo = traj.state(k0).p;
    Point2 hi = lo;
    for (std::size_t k = k0 + 1; k <= k1; ++k) {
      const Point2 p = traj.state(k).p;
      lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
      hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    const Ball bound{0.5 * (lo + hi), 0.5 * geometry::Distance(lo, hi) + r};
    const double chunk_end = traj.time(k1);

    std::vector<const ObstaclePredictor*> near;
    for (const ObstaclePredictor& ob : preds) {
      if (BlocksBall(ob, bound, chunk_end)) near.push_back(&ob);
    }
    if (near.empty()) continue;

    for (std::size_t k = k0; k < k1; ++k) {
      const Capsule cap{traj.state(k).p, traj.state(k + 1).p, r};
      for (const ObstaclePredictor* ob : near) {
        if (Blocks(*ob, cap, traj.time(k + 1))) return {false, k, ob->id};
      }
    }
  }

  if (traj.hold_steps() > 0) {
    // Held steps drift along one line, so one capsule against the largest
    // obstacle occupancy covers every held step.
    const Capsule tail{traj.state(n_explicit).p, traj.back().p, r};
    const double end = traj.time(traj.num_steps());
    for (const ObstaclePredictor& ob : preds) {
      if (Blocks(ob, tail, end)) return {false, n_explicit, ob.id};
    }
  }

  if (MustEndAtRest(traj.kind()) && !dynamics::PointRobot::AtRest(traj.back())) {
    return {false, traj.num_steps(), -1};
  }
  return verdict;
}

ShieldState SafetyShield::Initialize(const RobotState& s_rest, std::span<const Obstacle> obstacles,
                                     double t_now) const {
  if (!dynamics::PointRobot::AtRest(s_rest)) {
    throw std::runtime_error("SafetyShield: the robot must start at rest");
  }
  Trajectory rest = robot_.FailsafeTrajectory(s_rest, grid_);
  const Verdict v = Verify(rest, obstacles, t_now);
  if (!v.safe) {
    throw std::runtime_error("SafetyShield: the initial rest state intersects obstacle " +
                             std::to_string(v.obstacle_id));
  }
  return {std::move(rest), 0, Mode::kNominal, t_now, false};
}

std::pair<ShieldState, ShieldDecision> SafetyShield::Step(ShieldState st, const RobotState& now,
                                                          const Control& desired,
                                                          std::span<const Obstacle> obstacles,
                                                          double t_now) const {
  ShieldDecision decision;
  Trajectory candidate = BuildShielded(now, desired);
  decision.verdict = Verify(candidate, obstacles, t_now);
  if (decision.verdict.safe) {
    decision.executed = candidate.control(0);
    st.committed = std::move(candidate);
    st.cursor = 1;
    st.mode = Mode::kNominal;
    st.commit_time = t_now;
    return {std::move(st), decision};
  }
  decision.executed =
      st.cursor < st.committed.num_steps() ? st.committed.control(st.cursor) : Control{};
  ++st.cursor;
  st.mode = Mode::kFailsafe;
  decision.intervention = !st.flagged_this_action;
  st.flagged_this_action = true;
  return {std::move(st), decision};
}

}  // namespace shieldsim::shield
