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

#include "shieldsim/filters.hpp"

#include <algorithm>
#include <stdexcept>

namespace shieldsim::filters {

void Validate(const FilterConfig& cfg) {
  if (cfg.replace_samples < 1 || cfg.project_retries < 1 || !(cfg.epsilon > 0.0) ||
      !(cfg.alpha_min > 0.0) || !(cfg.alpha_cap > 0.0) || !(cfg.alpha_cap < 1.0)) {
    throw std::invalid_argument(
        "filter config: sample counts, epsilon and alpha bounds must be positive, alpha_cap < 1");
  }
}

std::string_view ToString(OutcomeKind kind) {
  switch (kind) {
    case OutcomeKind::kOriginal: return "original";
    case OutcomeKind::kReplaced: return "replaced";
    case OutcomeKind::kProjected: return "projected";
    case OutcomeKind::kZeroAction: return "zero-action";
  }
  return "unknown";
}

ActionFilter::ActionFilter(const shield::SafetyShield& shield, FilterConfig cfg)
    : shield_(&shield), cfg_(cfg) {
  Validate(cfg_);
}

Trajectory ActionFilter::BuildValidation(const RobotState& s0, const Control& u) const {
  Trajectory traj = shield_->robot().IntendedTrajectory(s0, u, shield_->grid());
  traj.set_kind(dynamics::TrajectoryKind::kValidation);
  shield_->robot().AppendFailsafe(traj, static_cast<std::size_t>(shield_->grid().failsafe_steps));
  return traj;
}

bool ActionFilter::ValidateTemporal(const RobotState& s0, const Control& u,
                                    std::span<const Obstacle> obstacles, double t_now) const {
  return shield_->Verify(BuildValidation(s0, u), obstacles, t_now).safe;
}

FilterOutcome ActionFilter::ReplaceAction(const RobotState& s0, Action a,
                                          std::span<const Obstacle> obstacles, double t_now,
                                          Rng& rng) const {
  const auto& robot = shield_->robot();
  a = dynamics::ClampAction(a);
  if (ValidateTemporal(s0, robot.ToControl(a), obstacles, t_now)) {
    return {a, robot.ToControl(a), OutcomeKind::kOriginal, std::nullopt, 0};
  }
  for (int i = 1; i <= cfg_.replace_samples; ++i) {
    const double a1 = rng.Uniform(-1.0, 1.0);
    const double a2 = rng.Uniform(-1.0, 1.0);
    const Action sample{a1, a2};
    if (ValidateTemporal(s0, robot.ToControl(sample), obstacles, t_now)) {
      return {sample, robot.ToControl(sample), OutcomeKind::kReplaced, std::nullopt, i};
    }
  }
  return {{}, {}, OutcomeKind::kZeroAction, std::nullopt, cfg_.replace_samples};
}

FilterOutcome ActionFilter::ProjectAction(const RobotState& s0, Action a,
                                          std::span<const Obstacle> obstacles, double t_now,
                                          ProjectionTrace* trace) const {
  const auto& robot = shield_->robot();
  const auto& grid = shield_->grid();
  a = dynamics::ClampAction(a);
  const Control desired = robot.ToControl(a);
  const Trajectory validation = BuildValidation(s0, desired);
  if (shield_->Verify(validation, obstacles, t_now).safe) {
    return {a, desired, OutcomeKind::kOriginal, std::nullopt, 0};
  }
  const FilterOutcome zero{{}, {}, OutcomeKind::kZeroAction, std::nullopt, 0};

  // Ball around the robot's occupancy over the last validation step.
  const std::size_t n = validation.num_steps();
  const geometry::Primitive last =
      geometry::Capsule{validation.state(n - 1).p, validation.state(n).p,
                        shield_->occupancy_radius()};
  const Ball terminal = geometry::BallOverapprox(std::span(&last, 1));
  const double t_end = validation.time(n);
  const double r_exp = terminal.radius + cfg_.epsilon;

  std::vector<geometry::Primitive> expanded;
  std::vector<Ball> unexpanded;
  for (const Obstacle& ob : obstacles) {
    if (ob.kind == reachability::ObstacleKind::kGoal) continue;
    const Ball occ = reachability::ObstaclePredictor(ob, t_now).At(t_end);
    unexpanded.push_back(occ);
    expanded.emplace_back(geometry::Expand(occ, r_exp));
  }
  if (trace != nullptr) {
    trace->origin = s0.p;
    trace->terminal = terminal;
    trace->unexpanded = unexpanded;
    trace->expanded.clear();
    for (const auto& e : expanded) trace->expanded.push_back(std::get<Ball>(e));
    trace->plan.reset();
  }

  const geometry::FreePrefix prefix = geometry::FreePrefixAlpha(s0.p, terminal.center, expanded);
  if (prefix.origin_inside()) return zero;
  double alpha = std::min(prefix.alpha, cfg_.alpha_cap);
  if (alpha < -cfg_.alpha_min) return zero;

  for (int attempt = 0; attempt <= cfg_.project_retries; ++attempt, alpha *= 0.5) {
    const Point2 target = s0.p + alpha * (terminal.center - s0.p);
    auto plan = robot.PlanToPoint(s0, target, grid);
    bool constant = true;
    for (int k = 1; k < grid.steps_per_action; ++k) {
      constant = constant && plan.trajectory.control(k) == plan.trajectory.control(0);
    }
    if (!constant || !shield_->Verify(plan.trajectory, obstacles, t_now).safe) continue;
    if (trace != nullptr) trace->plan = std::move(plan.trajectory);
    const auto& lim = robot.params();
    const Action equivalent{plan.control.thrust / lim.u1_max, plan.control.yaw_rate / lim.u2_max};
    return {equivalent, plan.control, OutcomeKind::kProjected, alpha, attempt + 1};
  }
  return zero;
}

}  // namespace shieldsim::filters
