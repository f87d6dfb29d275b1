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

// Per-step safety shield. Every shield step builds one intended step followed
// by a full failsafe maneuver, checks the robot's capsule occupancies against
// the obstacles' predicted occupancies, and either commits that plan or keeps
// executing the last committed one. The first committed plan is the robot at
// rest, so some verified plan ending at rest always exists.

#ifndef SHIELDSIM_SHIELD_HPP_
#define SHIELDSIM_SHIELD_HPP_

#include <cstddef>
#include <span>
#include <string_view>
#include <utility>

#include "shieldsim/dynamics.hpp"
#include "shieldsim/reachability.hpp"

namespace shieldsim::shield {

using dynamics::Control;
using dynamics::RobotState;
using dynamics::Trajectory;
using reachability::Obstacle;

struct Verdict {
  bool safe = true;
  /// First offending step (robot capsule index). For a plan that does not end
  /// at rest this is num_steps().
  std::size_t step = 0;
  /// Offending obstacle id; -1 when the failure is not an intersection.
  int obstacle_id = -1;
};

enum class Mode { kNominal, kFailsafe };
enum class Substitution { kNone, kReplaced, kProjected, kZeroAction };
std::string_view ToString(Mode mode);
std::string_view ToString(Substitution sub);

struct ShieldState {
  Trajectory committed;
  std::size_t cursor = 0;  // next step of `committed` to execute
  Mode mode = Mode::kNominal;
  double commit_time = 0.0;
  bool flagged_this_action = false;
};

struct ShieldDecision {
  Control executed;
  /// The failsafe took over for the first time within the current agent step.
  bool intervention = false;
  Substitution substituted = Substitution::kNone;
  Verdict verdict;
};

class SafetyShield {
 public:
  SafetyShield(dynamics::PointRobot robot, dynamics::TimeGrid grid);

  const dynamics::PointRobot& robot() const { return robot_; }
  const dynamics::TimeGrid& grid() const { return grid_; }
  /// Capsule radius: robot radius plus the linearization error.
  double occupancy_radius() const { return robot_.params().radius + zeta_; }
  double zeta() const { return zeta_; }

  /// One governed step of `u` followed by the failsafe maneuver; 1 + k_failsafe steps.
  Trajectory BuildShielded(const RobotState& s0, const Control& u) const;

  /// Checks the trajectory's capsule occupancies against each obstacle's
  /// occupancy over the same step interval, predicted from its position at
  /// `t_now`. Goal regions are ignored. Plans of kind shielded, validation,
  /// projected or failsafe must also end at rest.
  Verdict Verify(const Trajectory& traj, std::span<const Obstacle> obstacles, double t_now) const;

  /// Initial state: commits the at-rest plan. Throws std::runtime_error if the
  /// robot is not at rest or that plan does not verify.
  ShieldState Initialize(const RobotState& s_rest, std::span<const Obstacle> obstacles,
                         double t_now) const;

  /// Clears the per-agent-step intervention flag.
  static void BeginAction(ShieldState& st) { st.flagged_this_action = false; }

  /// One shield update at `t_now` from the current state.
  std::pair<ShieldState, ShieldDecision> Step(ShieldState st, const RobotState& now,
                                              const Control& desired,
                                              std::span<const Obstacle> obstacles,
                                              double t_now) const;

 private:
  dynamics::PointRobot robot_;
  dynamics::TimeGrid grid_;
  double zeta_;
};

}  // namespace shieldsim::shield

#endif  // SHIELDSIM_SHIELD_HPP_
