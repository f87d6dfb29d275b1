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

// Planar point robot with heading: phi' = u2, v' = R(phi) [u1, 0], p' = v.
// Controls are held constant over each grid step and the step map is the
// exact solution of those dynamics, so stored grid states are points of the
// true continuous trajectory.

#ifndef SHIELDSIM_DYNAMICS_HPP_
#define SHIELDSIM_DYNAMICS_HPP_

#include <cstddef>
#include <string_view>
#include <vector>

#include "shieldsim/geometry.hpp"

namespace shieldsim::dynamics {

using geometry::Point2;

/// Wraps an angle to (-pi, pi].
double WrapAngle(double a);
/// Wraps an angle to (-pi/2, pi/2]; the heading error to the nearest travel axis.
double WrapHalfTurn(double a);

struct RobotState {
  Point2 p;
  Point2 v;
  double phi = 0.0;
  friend bool operator==(const RobotState&, const RobotState&) = default;
};

struct Control {
  double thrust = 0.0;    // u1, m/s^2 along the heading
  double yaw_rate = 0.0;  // u2, rad/s
  friend bool operator==(const Control&, const Control&) = default;
};

/// Normalized agent action on the unit box.
struct Action {
  double a1 = 0.0;  // thrust fraction
  double a2 = 0.0;  // yaw-rate fraction
  friend bool operator==(const Action&, const Action&) = default;
};

Action ClampAction(Action a);

struct RobotParams {
  double mass = 1.0;
  double u1_max = 0.05;  // 0.05 / mass
  double u2_max = 0.05;  // 0.05 / mass
  double v_cap = 0.5;
  double align_tol = 0.05;
  double v_stop = 1e-4;
  double radius = 0.1;
};

/// Shield time grid. `steps_per_action` is L, `failsafe_steps` is k_failsafe.
struct TimeGrid {
  double dt = 0.01;
  int steps_per_action = 10;
  int failsafe_steps = 0;
};

/// Worst-case rotation steps to align the heading with the travel axis.
int RotationSteps(const RobotParams& params, double dt);
/// Smallest admissible k_failsafe: full braking from v_cap plus worst rotation.
int MinFailsafeSteps(const RobotParams& params, double dt);
/// Default grid: dt = 0.01, L = 10, k_failsafe = MinFailsafeSteps + margin.
/// Grid whose failsafe horizon is the braking + rotation bound plus a margin.
TimeGrid DefaultGrid(const RobotParams& params, double dt = 0.01, int steps_per_action = 10);
/// Throws std::invalid_argument when the grid violates its invariants.
void ValidateGrid(const TimeGrid& grid, const RobotParams& params);

enum class TrajectoryKind { kIntended, kFailsafe, kShielded, kValidation, kProjected };
std::string_view ToString(TrajectoryKind kind);

/// States on a fixed time grid with one held control per step.
///
/// Trailing zero-control steps are stored implicitly: once a trajectory is
/// at rest, `HoldFor(n)` extends it without materializing n states. Accessors
/// present the full sequence either way.
class Trajectory {
 public:
  Trajectory() : Trajectory(TrajectoryKind::kFailsafe, 0.0, RobotState{}) {}
  Trajectory(TrajectoryKind kind, double dt, const RobotState& start);

  void Append(const Control& u, const RobotState& next);
  void Reserve(std::size_t steps);
  /// Appends n zero-control steps. Positions continue along the final
  /// velocity, which is exact for zero input.
  void HoldFor(std::size_t n);

  TrajectoryKind kind() const { return kind_; }
  void set_kind(TrajectoryKind kind) { kind_ = kind; }
  double dt() const { return dt_; }
  std::size_t num_steps() const { return controls_.size() + hold_steps_; }
  std::size_t num_states() const { return num_steps() + 1; }
  /// Number of steps stored explicitly; steps at or past this index are held.
  std::size_t explicit_steps() const { return controls_.size(); }
  std::size_t hold_steps() const { return hold_steps_; }

  RobotState state(std::size_t k) const;
  Control control(std::size_t k) const;
  const RobotState& front() const { return states_.front(); }
  RobotState back() const { return state(num_steps()); }
  double time(std::size_t k) const { return static_cast<double>(k) * dt_; }

 private:
  TrajectoryKind kind_;
  double dt_;
  std::vector<RobotState> states_;
  std::vector<Control> controls_;
  std::size_t hold_steps_ = 0;
};

/// Point-robot model bound to its input limits and speed cap.
class PointRobot {
 public:
  explicit PointRobot(RobotParams params = {});

  const RobotParams& params() const { return params_; }

  /// Exact integration over dt with held control. Throws std::invalid_argument
  /// for controls outside the input box.
  RobotState Step(const RobotState& s, const Control& u, double dt) const;

  /// Maps a unit-box action to a control: u1 = a1 u1_max, u2 = a2 u2_max.
  Control ToControl(Action a) const;

  /// Scales thrust down so the speed after one step stays <= v_cap.
  Control Govern(const RobotState& s, const Control& u, double dt) const;
  /// Scales thrust so that holding `u` for `steps` steps keeps the speed <= v_cap
  /// at every step.
  Control GovernHold(const RobotState& s, const Control& u, double dt, int steps) const;

  /// L governed steps of the action's control.
  Trajectory IntendedTrajectory(const RobotState& s0, Action a, const TimeGrid& grid) const;
  Trajectory IntendedTrajectory(const RobotState& s0, const Control& u, const TimeGrid& grid) const;

  /// Rotate to the travel axis (when moving and misaligned by more than
  /// align_tol), then brake along the heading while tracking the
  /// axis, then hold at rest. Exactly k_failsafe steps.
  Trajectory FailsafeTrajectory(const RobotState& s0, const TimeGrid& grid) const;
  /// Appends the failsafe maneuver from traj.back() and fills the trajectory
  /// up to `total_steps`.
  void AppendFailsafe(Trajectory& traj, std::size_t budget) const;

  struct PlanResult {
    Trajectory trajectory;
    Control control;           // constant control over the first L steps
    double terminal_distance;  // |final position - target|
  };
  /// One constant control for L steps steering toward `target`, followed by
  /// the failsafe maneuver.
  PlanResult PlanToPoint(const RobotState& s0, Point2 target, const TimeGrid& grid) const;

  /// True when the state is at rest within `tol`.
  static bool AtRest(const RobotState& s, double tol = 1e-9);

 private:
  RobotParams params_;
};

}  // namespace shieldsim::dynamics

#endif  // SHIELDSIM_DYNAMICS_HPP_
