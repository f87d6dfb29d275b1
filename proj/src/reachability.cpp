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

#include "shieldsim/reachability.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace shieldsim::reachability {

double LinearizationError(double dt, double a_max, double mass) {
  if (!(mass > 0.0)) throw std::invalid_argument("LinearizationError: mass must be > 0");
  return a_max * dt * dt / (8.0 * mass);
}

OccupancySet RobotOccupancy(const dynamics::Trajectory& traj, double robot_radius, double zeta) {
  OccupancySet out;
  out.reserve(traj.num_steps());
  const double r = robot_radius + zeta;
  dynamics::RobotState prev = traj.front();
  for (std::size_t k = 0; k < traj.num_steps(); ++k) {
    const dynamics::RobotState next = traj.state(k + 1);
    Primitive prim = geometry::Capsule{prev.p, next.p, r};
    if (prev.p == next.p) prim = Ball{prev.p, r};
    out.push_back({{traj.time(k), traj.time(k + 1)}, prim});
    prev = next;
  }
  return out;
}

std::string_view ToString(ObstacleKind kind) {
  switch (kind) {
    case ObstacleKind::kHazard: return "hazard";
    case ObstacleKind::kGremlin: return "gremlin";
    case ObstacleKind::kGoal: return "goal";
    case ObstacleKind::kButton: return "button";
  }
  return "unknown";
}

Point2 Obstacle::PositionAt(double t) const {
  if (const auto* m = std::get_if<CircularMotion>(&motion)) {
    const double a = m->angular_rate * t + m->phase;
    return m->pivot + m->orbit * Point2{std::cos(a), std::sin(a)};
  }
  return std::get<StaticMotion>(motion).center;
}

std::optional<Ball> Obstacle::Confinement() const {
  if (const auto* m = std::get_if<CircularMotion>(&motion)) {
    return Ball{m->pivot, m->orbit + footprint_radius};
  }
  // A static entry with v_max > 0 stands for an obstacle last seen at `center`.
  return std::nullopt;
}

void ValidateObstacle(const Obstacle& ob, double sample_dt, double span) {
  if (!(ob.footprint_radius >= 0.0) || !(ob.v_max >= 0.0)) {
    throw std::invalid_argument("obstacle " + std::to_string(ob.id) +
                                ": radius and v_max must be >= 0");
  }
  if (!(sample_dt > 0.0)) throw std::invalid_argument("ValidateObstacle: sample_dt must be > 0");
  if (const auto* m = std::get_if<CircularMotion>(&ob.motion)) {
    if (m->angular_rate != 0.0) {
      span = std::min(span, 2.0 * std::numbers::pi / std::abs(m->angular_rate));
    }
  }
  span = std::min(span, ob.horizon);
  // The chord between two samples is never longer than the arc, so the
  // finite-difference speed is a lower bound on the true peak; the slack
  // covers rounding only.
  Point2 prev = ob.PositionAt(0.0);
  for (double t = sample_dt; t <= span + 0.5 * sample_dt; t += sample_dt) {
    const Point2 cur = ob.PositionAt(t);
    const double speed = geometry::Distance(cur, prev) / sample_dt;
    if (speed > ob.v_max * (1.0 + 1e-9) + 1e-12) {
      throw std::invalid_argument("obstacle " + std::to_string(ob.id) + " moves at " +
                                  std::to_string(speed) + " m/s, above its declared v_max " +
                                  std::to_string(ob.v_max));
    }
    prev = cur;
  }
  if (const auto* m = std::get_if<CircularMotion>(&ob.motion)) {
    if (std::abs(m->orbit * m->angular_rate) > ob.v_max * (1.0 + 1e-9)) {
      throw std::invalid_argument("obstacle " + std::to_string(ob.id) +
                                  ": orbit speed exceeds declared v_max");
    }
  }
}

ObstaclePredictor::ObstaclePredictor(const Obstacle& ob, double t_obs)
    : id(ob.id),
      center(ob.PositionAt(t_obs)),
      radius(ob.footprint_radius),
      v_max(ob.v_max),
      confinement(ob.Confinement()) {}

Ball ObstaclePredictor::At(double lookahead_end) const {
  const Ball grown{center, radius + v_max * lookahead_end};
  if (confinement && confinement->radius < grown.radius) return *confinement;
  return grown;
}

TimedOccupancy ObstacleOccupancy(const Obstacle& ob, double t_obs, Interval interval) {
  if (!(interval.begin <= interval.end) || interval.begin < 0.0) {
    throw std::invalid_argument("ObstacleOccupancy: need 0 <= begin <= end");
  }
  if (t_obs + interval.end > ob.horizon) {
    throw std::invalid_argument("ObstacleOccupancy: interval extends past the motion horizon of obstacle " +
                                std::to_string(ob.id));
  }
  return {interval, ObstaclePredictor(ob, t_obs).At(interval.end)};
}

}  // namespace shieldsim::reachability
