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

#include "shieldsim/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace shieldsim::dynamics {

namespace {

constexpr double kPi = std::numbers::pi;
// Relative slack on the input box; controls computed as err / dt can land a
// few ulps past the limit.
constexpr double kBoundSlack = 1e-12;
// Braking stops once the speed is below this.
constexpr double kRestSpeed = 1e-12;
constexpr int kFailsafeMargin = 200;
// Heading error below which braking stops steering.
constexpr double kLockTol = 1e-12;

// Integrals of the unit heading vector over one step with constant yaw rate:
//   first  = int_0^dt e(phi + w s) ds
//   second = int_0^dt int_0^s e(phi + w r) dr ds
struct HeadingIntegrals {
  Point2 first;
  Point2 second;
};

HeadingIntegrals IntegrateHeading(double phi, double yaw_rate, double dt) {
  const double th = yaw_rate * dt;
  double s1 = 1.0;  // sin(th) / th
  double c1 = 0.0;  // (1 - cos th) / th
  double s2 = 0.5;  // (1 - cos th) / th^2
  double c2 = 0.0;  // (th - sin th) / th^2
  if (th != 0.0) {
    const double half = std::sin(0.5 * th);
    s1 = std::sin(th) / th;
    c1 = 2.0 * half * half / th;
    s2 = 2.0 * half * half / (th * th);
    if (std::abs(th) < 0.1) {
      const double t2 = th * th;
      c2 = th * (1.0 / 6.0 - t2 * (1.0 / 120.0 - t2 * (1.0 / 5040.0 - t2 / 362880.0)));
    } else {
      c2 = (th - std::sin(th)) / (th * th);
    }
  }
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {{dt * (c * s1 - s * c1), dt * (s * s1 + c * c1)},
          {dt * dt * (c * s2 - s * c2), dt * dt * (s * s2 + c * c2)}};
}

RobotState Advance(const RobotState& s, const Control& u, double dt, const HeadingIntegrals& h) {
  RobotState next;
  if (u.thrust == 0.0) {
    next.v = s.v;
    next.p = s.p + dt * s.v;
  } else {
    next.v = s.v + u.thrust * h.first;
    next.p = s.p + dt * s.v + u.thrust * h.second;
  }
  next.phi = WrapAngle(s.phi + u.yaw_rate * dt);
  return next;
}

double Clamp(double x, double lim) { return std::clamp(x, -lim, lim); }

double TravelAxisError(const RobotState& s) {
  return WrapHalfTurn(std::atan2(s.v.y, s.v.x) - s.phi);
}

}  // namespace

double WrapAngle(double a) {
  if (a > -kPi && a <= kPi) return a;
  a = std::remainder(a, 2.0 * kPi);  // [-pi, pi]
  return a <= -kPi ? a + 2.0 * kPi : a;
}

double WrapHalfTurn(double a) {
  if (a > -0.5 * kPi && a <= 0.5 * kPi) return a;
  a = std::remainder(a, kPi);  // [-pi/2, pi/2]
  return a <= -0.5 * kPi ? a + kPi : a;
}

Action ClampAction(Action a) {
  auto unit = [](double x) { return std::isfinite(x) ? std::clamp(x, -1.0, 1.0) : 0.0; };
  return {unit(a.a1), unit(a.a2)};
}

int RotationSteps(const RobotParams& params, double dt) {
  return static_cast<int>(std::ceil(0.5 * kPi / (params.u2_max * dt)));
}

int MinFailsafeSteps(const RobotParams& params, double dt) {
  return static_cast<int>(std::ceil(params.v_cap / (params.u1_max * dt))) +
         RotationSteps(params, dt);
}

TimeGrid DefaultGrid(const RobotParams& params, double dt, int steps_per_action) {
  TimeGrid grid{dt, steps_per_action, 0};
  grid.failsafe_steps = MinFailsafeSteps(params, dt) + kFailsafeMargin;
  return grid;
}

void ValidateGrid(const TimeGrid& grid, const RobotParams& params) {
  if (!(grid.dt > 0.0)) throw std::invalid_argument("time grid: dt must be > 0");
  if (grid.steps_per_action < 1) throw std::invalid_argument("time grid: L must be >= 1");
  const int need = MinFailsafeSteps(params, grid.dt);
  if (grid.failsafe_steps < need) {
    throw std::invalid_argument("time grid: k_failsafe = " + std::to_string(grid.failsafe_steps) +
                                " is below the braking + rotation bound " + std::to_string(need));
  }
}

std::string_view ToString(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::kIntended: return "intended";
    case TrajectoryKind::kFailsafe: return "failsafe";
    case TrajectoryKind::kShielded: return "shielded";
    case TrajectoryKind::kValidation: return "validation";
    case TrajectoryKind::kProjected: return "projected";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Trajectory

Trajectory::Trajectory(TrajectoryKind kind, double dt, const RobotState& start)
    : kind_(kind), dt_(dt), states_{start} {}

void Trajectory::Append(const Control& u, const RobotState& next) {
  if (hold_steps_ != 0) throw std::logic_error("Trajectory::Append after HoldFor");
  controls_.push_back(u);
  states_.push_back(next);
}

void Trajectory::Reserve(std::size_t steps) {
  controls_.reserve(controls_.size() + steps);
  states_.reserve(states_.size() + steps);
}

void Trajectory::HoldFor(std::size_t n) { hold_steps_ += n; }

RobotState Trajectory::state(std::size_t k) const {
  if (k < states_.size()) return states_[k];
  if (k > num_steps()) throw std::out_of_range("Trajectory::state index past the end");
  RobotState s = states_.back();
  s.p = s.p + (static_cast<double>(k - controls_.size()) * dt_) * s.v;
  return s;
}

Control Trajectory::control(std::size_t k) const {
  if (k < controls_.size()) return controls_[k];
  if (k >= num_steps()) throw std::out_of_range("Trajectory::control index past the end");
  return {};
}

// ---------------------------------------------------------------------------
// PointRobot

PointRobot::PointRobot(RobotParams params) : params_(params) {
  if (!(params_.mass > 0.0 && params_.u1_max > 0.0 && params_.u2_max > 0.0 &&
        params_.v_cap > 0.0 && params_.radius >= 0.0 && params_.align_tol > 0.0 &&
        params_.v_stop > 0.0)) {
    throw std::invalid_argument("PointRobot: parameters must be positive");
  }
}

RobotState PointRobot::Step(const RobotState& s, const Control& u, double dt) const {
  if (!(std::abs(u.thrust) <= params_.u1_max * (1.0 + kBoundSlack)) ||
      !(std::abs(u.yaw_rate) <= params_.u2_max * (1.0 + kBoundSlack))) {
    throw std::invalid_argument("PointRobot::Step: control outside the input box");
  }
  if (u.thrust == 0.0) return Advance(s, u, dt, HeadingIntegrals{});
  return Advance(s, u, dt, IntegrateHeading(s.phi, u.yaw_rate, dt));
}

Control PointRobot::ToControl(Action a) const {
  a = ClampAction(a);
  return {a.a1 * params_.u1_max, a.a2 * params_.u2_max};
}

Control PointRobot::Govern(const RobotState& s, const Control& u, double dt) const {
  const Point2 dir = IntegrateHeading(s.phi, u.yaw_rate, dt).first;
  const Point2 next = s.v + u.thrust * dir;
  const double cap = params_.v_cap;
  if (Dot(next, next) <= cap * cap) return u;
  // Admissible thrusts x satisfy |v + x dir| <= max(cap, |v|); the root
  // interval always contains zero.
  const double a = Dot(dir, dir);
  const double b = Dot(s.v, dir);
  const double cc = Dot(s.v, s.v) - std::max(cap * cap, Dot(s.v, s.v));
  const double root = std::sqrt(std::max(0.0, b * b - a * cc));
  const double lo = (1.0 - 1e-12) * (-b - root) / a;
  const double hi = (1.0 - 1e-12) * (-b + root) / a;
  return {std::clamp(u.thrust, std::min(lo, 0.0), std::max(hi, 0.0)), u.yaw_rate};
}

Control PointRobot::GovernHold(const RobotState& s, const Control& u, double dt, int steps) const {
  auto feasible = [&](double thrust) {
    RobotState x = s;
    const double cap2 = params_.v_cap * params_.v_cap;
    for (int k = 0; k < steps; ++k) {
      x = Step(x, {thrust, u.yaw_rate}, dt);
      if (Dot(x.v, x.v) > cap2 && Dot(x.v, x.v) > Dot(s.v, s.v)) return false;
    }
    return true;
  };
  if (feasible(u.thrust)) return u;
  double lo = 0.0;
  double hi = 1.0;
  for (int it = 0; it < 50; ++it) {
    const double mid = 0.5 * (lo + hi);
    (feasible(mid * u.thrust) ? lo : hi) = mid;
  }
  return {lo * u.thrust, u.yaw_rate};
}

Trajectory PointRobot::IntendedTrajectory(const RobotState& s0, Action a,
                                          const TimeGrid& grid) const {
  return IntendedTrajectory(s0, ToControl(a), grid);
}

Trajectory PointRobot::IntendedTrajectory(const RobotState& s0, const Control& u,
                                          const TimeGrid& grid) const {
  Trajectory traj(TrajectoryKind::kIntended, grid.dt, s0);
  RobotState s = s0;
  for (int k = 0; k < grid.steps_per_action; ++k) {
    const Control g = Govern(s, u, grid.dt);
    s = Step(s, g, grid.dt);
    traj.Append(g, s);
  }
  return traj;
}

void PointRobot::AppendFailsafe(Trajectory& traj, std::size_t budget) const {
  const double dt = traj.dt();
  RobotState s = traj.back();
  std::size_t used = 0;
  const double brake_steps = Norm(s.v) / (params_.u1_max * dt);
  const double turn_steps = std::abs(TravelAxisError(s)) / (params_.u2_max * dt);
  traj.Reserve(
      static_cast<std::size_t>(std::min<double>(budget, brake_steps + turn_steps + 64.0)));

  // Rotation phase: exact alignment with the travel axis, no thrust.
  if (Norm(s.v) > kRestSpeed && std::abs(TravelAxisError(s)) > params_.align_tol) {
    // Without thrust the velocity, and so the travel axis, stays fixed.
    const double axis = std::atan2(s.v.y, s.v.x);
    double err = WrapHalfTurn(axis - s.phi);
    while (used < budget && std::abs(err) > 1e-12) {
      const Control u{0.0, Clamp(err / dt, params_.u2_max)};
      s = Step(s, u, dt);
      traj.Append(u, s);
      ++used;
      err = WrapHalfTurn(axis - s.phi);
    }
  }

  // Braking phase. Over one step the thrust acts along the mid-step heading,
  // so a yaw rate of 2 err / dt keeps the velocity on its own axis and lets
  // the last step cancel it exactly. While the heading is further off than
  // that, thrust is limited so the axis turns slower than the heading.
  const double reach = 0.5 * params_.u2_max * dt;
  // Once the heading is on the travel axis it is held there, and the heading
  // integrals of the remaining steps are all the same.
  bool locked = false;
  HeadingIntegrals h;
  // Tracking tends to alternate between two headings; remember both.
  struct Cached {
    double phi = std::numeric_limits<double>::quiet_NaN();
    double yaw_rate = 0.0;
    HeadingIntegrals h;
  } cache[2];
  int slot = 0;
  while (used < budget && Norm(s.v) > kRestSpeed) {
    double yaw_rate = 0.0;
    double err = 0.0;
    if (!locked) {
      err = TravelAxisError(s);
      locked = std::abs(err) <= kLockTol;
      yaw_rate = locked ? 0.0 : Clamp(2.0 * err / dt, params_.u2_max);
      const Cached* hit = nullptr;
      for (const Cached& c : cache) {
        if (c.phi == s.phi && c.yaw_rate == yaw_rate) hit = &c;
      }
      if (hit != nullptr) {
        h = hit->h;
      } else {
        h = IntegrateHeading(s.phi, yaw_rate, dt);
        cache[slot] = {s.phi, yaw_rate, h};
        slot ^= 1;
      }
    }
    const Point2 dir = h.first;
    const double along = Dot(s.v, dir) / Dot(dir, dir);
    double limit = params_.u1_max;
    if (std::abs(err) > reach) {
      const double align_steps = std::ceil(std::abs(err) / (params_.u2_max * dt));
      limit = std::min(limit, Norm(s.v) / (2.0 * align_steps * Norm(dir)));
    }
    const Control u{-std::copysign(std::min(limit, std::abs(along)), along), yaw_rate};
    s = Advance(s, u, dt, h);
    traj.Append(u, s);
    ++used;
  }
  traj.HoldFor(budget - used);
}

Trajectory PointRobot::FailsafeTrajectory(const RobotState& s0, const TimeGrid& grid) const {
  Trajectory traj(TrajectoryKind::kFailsafe, grid.dt, s0);
  AppendFailsafe(traj, static_cast<std::size_t>(grid.failsafe_steps));
  return traj;
}

PointRobot::PlanResult PointRobot::PlanToPoint(const RobotState& s0, Point2 target,
                                               const TimeGrid& grid) const {
  const int steps = grid.steps_per_action;
  const double horizon = steps * grid.dt;
  const Point2 to_target = target - s0.p;
  const double dist = Norm(to_target);

  double yaw_rate = 0.0;
  if (dist > 1e-12) {
    const double bearing = std::atan2(to_target.y, to_target.x);
    yaw_rate = Clamp(WrapHalfTurn(bearing - s0.phi) / horizon, params_.u2_max);
  }
  const Point2 heading{std::cos(s0.phi), std::sin(s0.phi)};

  // Signed along-heading miss of the predicted rest point: hold the thrust
  // for L steps, then brake at u1_max along the travel direction.
  auto miss = [&](double thrust) {
    RobotState x = s0;
    for (int k = 0; k < steps; ++k) x = Step(x, {thrust, yaw_rate}, grid.dt);
    const double speed = Norm(x.v);
    Point2 rest = x.p;
    if (speed > 0.0) rest = rest + (speed / (2.0 * params_.u1_max)) * x.v;
    return Dot(rest - target, heading);
  };

  double thrust = 0.0;
  const double at_zero = miss(0.0);
  if (std::abs(at_zero) > 1e-12) {
    double lo = -params_.u1_max;
    double hi = params_.u1_max;
    if (miss(lo) >= 0.0) {
      thrust = lo;
    } else if (miss(hi) <= 0.0) {
      thrust = hi;
    } else {
      for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (miss(mid) < 0.0 ? lo : hi) = mid;
      }
      thrust = 0.5 * (lo + hi);
    }
  }

  const Control u = GovernHold(s0, {thrust, yaw_rate}, grid.dt, steps);
  Trajectory traj(TrajectoryKind::kProjected, grid.dt, s0);
  RobotState s = s0;
  for (int k = 0; k < steps; ++k) {
    s = Step(s, u, grid.dt);
    traj.Append(u, s);
  }
  AppendFailsafe(traj, static_cast<std::size_t>(grid.failsafe_steps));
  const double terminal = Distance(traj.back().p, target);
  return {std::move(traj), u, terminal};
}

bool PointRobot::AtRest(const RobotState& s, double tol) { return Norm(s.v) <= tol; }

}  // namespace shieldsim::dynamics
