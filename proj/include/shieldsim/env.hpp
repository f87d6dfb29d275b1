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

// Episodic point-goal task: a square arena with static hazards, gremlins on
// circular patrols and a goal that is resampled each time it is reached. The
// robot is always driven through the safety shield; an optional action filter
// runs first.

#ifndef SHIELDSIM_ENV_HPP_
#define SHIELDSIM_ENV_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shieldsim/dynamics.hpp"
#include "shieldsim/filters.hpp"
#include "shieldsim/reachability.hpp"
#include "shieldsim/rng.hpp"
#include "shieldsim/shield.hpp"

namespace shieldsim::env {

using dynamics::Action;
using dynamics::Control;
using dynamics::RobotState;
using geometry::Ball;
using geometry::Point2;
using reachability::Obstacle;

enum class Mode { kBareShield, kReplace, kProject };
std::string_view ToString(Mode mode);
/// Accepts "bare-shield", "replace" and "project". Throws std::invalid_argument.
Mode ParseMode(std::string_view name);

struct EnvConfig {
  double arena_half_extent = 2.0;
  int num_hazards = 8;
  double hazard_radius = 0.2;
  int num_gremlins = 4;
  double gremlin_radius = 0.1;
  double gremlin_orbit = 0.3;
  double gremlin_speed = 0.12;  // declared v_max and patrol speed
  double goal_radius = 0.3;
  double goal_min_distance = 1.0;  // from the robot when a goal is placed
  double clearance = 0.15;         // spawn and goal margin around obstacles
  double spacing = 0.1;            // minimum gap between obstacle footprints
  int max_layout_attempts = 10000;
  int horizon = 1000;  // agent steps
  double progress_weight = 1.0;
  double goal_bonus = 1.0;
  dynamics::RobotParams robot;
  dynamics::TimeGrid grid = dynamics::DefaultGrid(dynamics::RobotParams{});
  filters::FilterConfig filters;
};

/// Throws std::invalid_argument on the first inconsistent field.
void Validate(const EnvConfig& cfg);

/// Parses the JSON config format documented in configs/README.md. Unknown keys
/// are errors. `source` names the input in diagnostics.
EnvConfig ParseConfig(std::string_view json_text, std::string_view source = "<string>");
EnvConfig LoadConfig(const std::string& path);

struct Layout {
  double half_extent = 0.0;
  RobotState spawn;
  Ball goal;
  std::vector<Obstacle> hazards;
  std::vector<Obstacle> gremlins;
};

struct ObstacleObservation {
  reachability::ObstacleKind kind;
  Point2 relative;  // obstacle center minus robot position
  double radius;
  double v_max;
  /// Disc the obstacle never leaves (its footprint when static).
  Point2 region_relative;
  double region_radius;
};

struct Observation {
  RobotState robot;
  Point2 goal_relative;
  double goal_radius = 0.0;
  double time = 0.0;
  std::vector<ObstacleObservation> obstacles;

  /// [p.x, p.y, v.x, v.y, phi, goal.x, goal.y, goal_r, then per obstacle
  /// rel.x, rel.y, radius, v_max, region.x, region.y, region_r].
  std::vector<double> Flatten() const;
};

struct StepRecord {
  Observation observation;
  double reward = 0.0;
  int cost = 0;
  bool intervention = false;
  filters::OutcomeKind substituted = filters::OutcomeKind::kOriginal;
  bool goal_reached = false;
  bool done = false;
  /// Robot disc overlapped a hazard or gremlin disc at some swept sample.
  bool contact = false;
  Action action;  // action handed to the shield after filtering
};

/// One executed shield step, kept for replay checks.
struct ExecutedStep {
  RobotState start;
  Control control;
  double time;
};

class Env {
 public:
  explicit Env(EnvConfig cfg);

  Observation Reset(std::uint64_t seed);
  /// Throws std::logic_error if the episode is finished or was never reset.
  StepRecord Step(Action a, Mode mode);

  const EnvConfig& config() const { return cfg_; }
  const Layout& layout() const { return layout_; }
  const RobotState& state() const { return state_; }
  double time() const;
  int steps_taken() const { return steps_taken_; }
  bool done() const { return steps_taken_ >= cfg_.horizon; }
  /// Hazards and gremlins, as handed to the shield.
  const std::vector<Obstacle>& obstacles() const { return obstacles_; }
  const shield::SafetyShield& shield() const { return shield_; }
  const filters::ActionFilter& filter() const { return filter_; }
  const shield::ShieldState& shield_state() const { return shield_state_; }

  const std::vector<ExecutedStep>& last_executed() const { return executed_; }
  /// Set when the last step was projected.
  const std::optional<filters::ProjectionTrace>& last_projection() const { return projection_; }
  std::optional<double> last_alpha() const { return alpha_; }

  /// Moves the goal; used by tests.
  void SetGoal(Point2 center);

  Observation Observe() const;

 private:
  Layout SampleLayout(Rng& rng) const;
  Point2 SampleGoal(Rng& rng, Point2 robot) const;
  bool SweepStep(const RobotState& s, const Control& u, double t, int* cost) const;

  EnvConfig cfg_;
  shield::SafetyShield shield_;
  filters::ActionFilter filter_;
  Layout layout_;
  std::vector<Obstacle> obstacles_;
  RobotState state_;
  shield::ShieldState shield_state_;
  Rng layout_rng_{0};
  Rng filter_rng_{0};
  std::int64_t shield_steps_ = 0;
  int steps_taken_ = 0;
  bool active_ = false;
  std::vector<ExecutedStep> executed_;
  std::optional<filters::ProjectionTrace> projection_;
  std::optional<double> alpha_;
};

/// Proportional bearing controller toward the goal with a speed governor.
Action PolicyGoalSeek(const Observation& obs, const dynamics::RobotParams& params);
/// Uniform on the unit box.
Action PolicyRandom(Rng& rng);

}  // namespace shieldsim::env

#endif  // SHIELDSIM_ENV_HPP_
