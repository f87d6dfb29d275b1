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

// Action filters that swap temporarily unsafe agent actions for substitutes
// before the shield sees them. An action is temporarily safe when its whole
// agent step followed by a failsafe maneuver verifies. Substitutes still go
// through SafetyShield::Step like any other action.

#ifndef SHIELDSIM_FILTERS_HPP_
#define SHIELDSIM_FILTERS_HPP_

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "shieldsim/rng.hpp"
#include "shieldsim/shield.hpp"

namespace shieldsim::filters {

using dynamics::Action;
using dynamics::Control;
using dynamics::RobotState;
using dynamics::Trajectory;
using geometry::Ball;
using geometry::Point2;
using reachability::Obstacle;

struct FilterConfig {
  int replace_samples = 32;  // M for replacement
  int project_retries = 5;   // M for projection
  double epsilon = 0.01;     // m
  double alpha_min = 0.5;
  double alpha_cap = 0.999;
};

/// Throws std::invalid_argument unless every field is positive and alpha_cap < 1.
void Validate(const FilterConfig& cfg);

enum class OutcomeKind { kOriginal, kReplaced, kProjected, kZeroAction };
std::string_view ToString(OutcomeKind kind);

struct FilterOutcome {
  Action action;
  /// Control to request from the shield for every step of this agent step.
  Control control;
  OutcomeKind kind = OutcomeKind::kOriginal;
  std::optional<double> alpha_used;
  int samples_tried = 0;
};

/// Geometry of a projection attempt, kept for inspection and tests.
struct ProjectionTrace {
  Point2 origin;
  Ball terminal;                        // (c_V, r_V)
  std::vector<Ball> expanded;           // obstacle occupancies over [t_0, t_V] grown by r_V + eps
  std::vector<Ball> unexpanded;         // the same occupancies before growth
  std::optional<Trajectory> plan;       // accepted projected plan
};

class ActionFilter {
 public:
  ActionFilter(const shield::SafetyShield& shield, FilterConfig cfg);

  const FilterConfig& config() const { return cfg_; }

  /// The whole agent step (L governed steps) followed by the failsafe maneuver.
  Trajectory BuildValidation(const RobotState& s0, const Control& u) const;
  bool ValidateTemporal(const RobotState& s0, const Control& u, std::span<const Obstacle> obstacles,
                        double t_now) const;

  /// Keeps `a` if it is temporarily safe; otherwise the first of up to M
  /// uniform samples that is; otherwise the zero action.
  FilterOutcome ReplaceAction(const RobotState& s0, Action a, std::span<const Obstacle> obstacles,
                              double t_now, Rng& rng) const;

  /// Keeps `a` if it is temporarily safe; otherwise steers toward the farthest
  /// point on the segment from the robot to the action's predicted rest point
  /// that clears every inflated obstacle occupancy, halving the step on each
  /// failed plan; otherwise the zero action.
  FilterOutcome ProjectAction(const RobotState& s0, Action a, std::span<const Obstacle> obstacles,
                              double t_now, ProjectionTrace* trace = nullptr) const;

 private:
  const shield::SafetyShield* shield_;
  FilterConfig cfg_;
};

}  // namespace shieldsim::filters

#endif  // SHIELDSIM_FILTERS_HPP_
