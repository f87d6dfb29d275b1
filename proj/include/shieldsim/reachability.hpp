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

#ifndef SHIELDSIM_REACHABILITY_HPP_
#define SHIELDSIM_REACHABILITY_HPP_

#include <limits>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "shieldsim/dynamics.hpp"
#include "shieldsim/geometry.hpp"

namespace shieldsim::reachability {

using geometry::Ball;
using geometry::Point2;
using geometry::Primitive;

/// Closed time interval relative to the prediction start t_0.
struct Interval {
  double begin = 0.0;
  double end = 0.0;
};

struct TimedOccupancy {
  Interval interval;
  Primitive prim;
};

using OccupancySet = std::vector<TimedOccupancy>;

/// zeta = a_max dt^2 / (8 m): bound on the distance between the true position
/// and its linear interpolation between two grid points. `a_max` is the force
/// bound, so a_max / m is the acceleration bound.
double LinearizationError(double dt, double a_max, double mass);

/// One capsule per trajectory step: p(t_k) -> p(t_k+1), radius robot_radius + zeta.
OccupancySet RobotOccupancy(const dynamics::Trajectory& traj, double robot_radius, double zeta);

enum class ObstacleKind { kHazard, kGremlin, kGoal, kButton };
std::string_view ToString(ObstacleKind kind);

struct StaticMotion {
  Point2 center;
};

/// Constant-rate circular patrol: c(t) = pivot + orbit (cos(w t + phase), sin(w t + phase)).
struct CircularMotion {
  Point2 pivot;
  double orbit = 0.0;
  double angular_rate = 0.0;
  double phase = 0.0;
};

using ObstacleMotion = std::variant<StaticMotion, CircularMotion>;

struct Obstacle {
  int id = 0;
  ObstacleKind kind = ObstacleKind::kHazard;
  double footprint_radius = 0.0;
  /// Declared speed bound used for occupancy growth.
  double v_max = 0.0;
  ObstacleMotion motion = StaticMotion{};
  /// Absolute time up to which the motion is defined.
  double horizon = std::numeric_limits<double>::infinity();

  Point2 PositionAt(double t) const;
  /// Ball containing the footprint at every time of a scripted patrol.
  std::optional<Ball> Confinement() const;
};

/// Throws std::invalid_argument if the motion exceeds v_max anywhere, checked
/// by finite differences at `sample_dt` over one period (or `span` seconds).
void ValidateObstacle(const Obstacle& ob, double sample_dt, double span = 100.0);

/// Occupancy of `ob` over `interval` (relative to the observation time t_obs):
/// a ball at the observed position whose radius grows at v_max over the whole
/// lookahead [t_0, interval.end]. When the obstacle has a confinement ball that
/// is smaller, that ball is returned instead; both contain every reachable
/// footprint. Throws std::invalid_argument past the motion horizon.
TimedOccupancy ObstacleOccupancy(const Obstacle& ob, double t_obs, Interval interval);

/// Radius-only fast path of ObstacleOccupancy used by the verifier.
struct ObstaclePredictor {
  ObstaclePredictor(const Obstacle& ob, double t_obs);
  Ball At(double lookahead_end) const;

  int id;
  Point2 center;
  double radius;
  double v_max;
  std::optional<Ball> confinement;
};

}  // namespace shieldsim::reachability

#endif  // SHIELDSIM_REACHABILITY_HPP_
