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

#include "shieldsim/env.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace shieldsim::env {

namespace {

using reachability::CircularMotion;
using reachability::ObstacleKind;
using reachability::StaticMotion;

constexpr double kPi = std::numbers::pi;
// Dense sweep resolution inside one shield step.
constexpr int kSweepSamples = 10;

}  // namespace

std::string_view ToString(Mode mode) {
  switch (mode) {
    case Mode::kBareShield: return "bare-shield";
    case Mode::kReplace: return "replace";
    case Mode::kProject: return "project";
  }
  return "unknown";
}

Mode ParseMode(std::string_view name) {
  if (name == "bare-shield") return Mode::kBareShield;
  if (name == "replace") return Mode::kReplace;
  if (name == "project") return Mode::kProject;
  throw std::invalid_argument("unknown mode '" + std::string(name) +
                              "' (expected bare-shield, replace or project)");
}

void Validate(const EnvConfig& cfg) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("env config: ") + what);
  };
  require(cfg.arena_half_extent > 0.0, "arena half extent must be > 0");
  require(cfg.num_hazards >= 0 && cfg.num_gremlins >= 0, "obstacle counts must be >= 0");
  require(cfg.hazard_radius > 0.0 && cfg.gremlin_radius > 0.0, "obstacle radii must be > 0");
  require(cfg.gremlin_orbit >= 0.0 && cfg.gremlin_speed >= 0.0,
          "gremlin orbit and speed must be >= 0");
  require(cfg.goal_radius > 0.0, "goal radius must be > 0");
  require(cfg.goal_min_distance >= 0.0 && cfg.clearance >= 0.0 && cfg.spacing >= 0.0,
          "distances must be >= 0");
  require(cfg.max_layout_attempts > 0, "max layout attempts must be > 0");
  require(cfg.horizon > 0, "horizon must be > 0");
  require(std::isfinite(cfg.progress_weight) && std::isfinite(cfg.goal_bonus),
          "reward weights must be finite");
  dynamics::PointRobot check(cfg.robot);
  dynamics::ValidateGrid(cfg.grid, cfg.robot);
  filters::Validate(cfg.filters);
}

std::vector<double> Observation::Flatten() const {
  std::vector<double> out{robot.p.x,       robot.p.y,       robot.v.x, robot.v.y, robot.phi,
                          goal_relative.x, goal_relative.y, goal_radius};
  out.reserve(out.size() + 7 * obstacles.size());
  for (const auto& ob : obstacles) {
    out.insert(out.end(), {ob.relative.x, ob.relative.y, ob.radius, ob.v_max,
                           ob.region_relative.x, ob.region_relative.y, ob.region_radius});
  }
  return out;
}

Env::Env(EnvConfig cfg)
    : cfg_((Validate(cfg), cfg)),
      shield_(dynamics::PointRobot(cfg_.robot), cfg_.grid),
      filter_(shield_, cfg_.filters) {}

double Env::time() const { return static_cast<double>(shield_steps_) * cfg_.grid.dt; }

Layout Env::SampleLayout(Rng& rng) const {
  const double H = cfg_.arena_half_extent;
  const double r_robot = cfg_.robot.radius;
  Layout layout;
  layout.half_extent = H;

  auto fail = [&](const std::string& what) {
    throw std::runtime_error("layout sampling failed after " +
                             std::to_string(cfg_.max_layout_attempts) + " attempts placing " +
                             what + "; the arena is too crowded for this config");
  };
  auto uniform_in = [&](double margin) {
    const double lim = std::max(0.0, H - margin);
    return Point2{rng.Uniform(-lim, lim), rng.Uniform(-lim, lim)};
  };
  // Footprint discs already placed: hazards and gremlin confinement discs.
  std::vector<Ball> placed;
  auto clear_of_placed = [&](Point2 c, double r, double gap) {
    return std::all_of(placed.begin(), placed.end(), [&](const Ball& b) {
      return geometry::Distance(c, b.center) >= b.radius + r + gap;
    });
  };

  int next_id = 0;
  for (int i = 0; i < cfg_.num_hazards; ++i) {
    int tries = 0;
    Point2 c;
    do {
      if (tries++ == cfg_.max_layout_attempts) fail("hazard " + std::to_string(i));
      c = uniform_in(cfg_.hazard_radius);
    } while (!clear_of_placed(c, cfg_.hazard_radius, cfg_.spacing));
    Obstacle ob;
    ob.id = next_id++;
    ob.kind = ObstacleKind::kHazard;
    ob.footprint_radius = cfg_.hazard_radius;
    ob.v_max = 0.0;
    ob.motion = StaticMotion{c};
    layout.hazards.push_back(ob);
    placed.push_back({c, cfg_.hazard_radius});
  }

  const double confine = cfg_.gremlin_orbit + cfg_.gremlin_radius;
  for (int i = 0; i < cfg_.num_gremlins; ++i) {
    int tries = 0;
    Point2 c;
    do {
      if (tries++ == cfg_.max_layout_attempts) fail("gremlin " + std::to_string(i));
      c = uniform_in(confine);
    } while (!clear_of_placed(c, confine, cfg_.spacing));
    const double phase = rng.Uniform(-kPi, kPi);
    const double direction = rng.Unit() < 0.5 ? -1.0 : 1.0;
    Obstacle ob;
    ob.id = next_id++;
    ob.kind = ObstacleKind::kGremlin;
    ob.footprint_radius = cfg_.gremlin_radius;
    ob.v_max = cfg_.gremlin_speed;
    const double rate = cfg_.gremlin_orbit > 0.0 ? cfg_.gremlin_speed / cfg_.gremlin_orbit : 0.0;
    ob.motion = CircularMotion{c, cfg_.gremlin_orbit, direction * rate, phase};
    layout.gremlins.push_back(ob);
    placed.push_back({c, confine});
  }

  int tries = 0;
  Point2 spawn;
  do {
    if (tries++ == cfg_.max_layout_attempts) fail("the robot");
    spawn = uniform_in(r_robot);
  } while (!clear_of_placed(spawn, r_robot, cfg_.clearance));
  layout.spawn.p = spawn;
  layout.spawn.phi = dynamics::WrapAngle(rng.Uniform(-kPi, kPi));
  return layout;
}

Point2 Env::SampleGoal(Rng& rng, Point2 robot) const {
  const double lim = std::max(0.0, cfg_.arena_half_extent - cfg_.goal_radius);
  const double r_robot = cfg_.robot.radius;
  for (int tries = 0; tries < cfg_.max_layout_attempts; ++tries) {
    const Point2 c{rng.Uniform(-lim, lim), rng.Uniform(-lim, lim)};
    if (geometry::Distance(c, robot) < cfg_.goal_min_distance) continue;
    bool ok = true;
    for (const Obstacle& ob : obstacles_) {
      const auto conf = ob.Confinement();
      const Ball disc = conf ? *conf : Ball{ob.PositionAt(0.0), ob.footprint_radius};
      ok = ok && geometry::Distance(c, disc.center) >= disc.radius + r_robot + cfg_.clearance;
    }
    if (ok) return c;
  }
  throw std::runtime_error("goal sampling failed after " +
                           std::to_string(cfg_.max_layout_attempts) +
                           " attempts; the arena is too crowded for this config");
}

Observation Env::Reset(std::uint64_t seed) {
  layout_rng_ = Rng(seed);
  filter_rng_ = Rng(MixSeed(seed, 1));
  layout_ = SampleLayout(layout_rng_);
  obstacles_.clear();
  obstacles_.insert(obstacles_.end(), layout_.hazards.begin(), layout_.hazards.end());
  obstacles_.insert(obstacles_.end(), layout_.gremlins.begin(), layout_.gremlins.end());
  for (const Obstacle& ob : obstacles_) reachability::ValidateObstacle(ob, cfg_.grid.dt / 10.0);
  layout_.goal = {SampleGoal(layout_rng_, layout_.spawn.p), cfg_.goal_radius};

  state_ = layout_.spawn;
  shield_steps_ = 0;
  steps_taken_ = 0;
  executed_.clear();
  projection_.reset();
  alpha_.reset();
  shield_state_ = shield_.Initialize(state_, obstacles_, 0.0);
  active_ = true;
  return Observe();
}

void Env::SetGoal(Point2 center) { layout_.goal.center = center; }

Observation Env::Observe() const {
  Observation obs;
  obs.robot = state_;
  obs.goal_relative = layout_.goal.center - state_.p;
  obs.goal_radius = layout_.goal.radius;
  obs.time = time();
  obs.obstacles.reserve(obstacles_.size());
  for (const Obstacle& ob : obstacles_) {
    const Point2 c = ob.PositionAt(time());
    const Ball region = ob.Confinement().value_or(Ball{c, ob.footprint_radius});
    obs.obstacles.push_back({ob.kind, c - state_.p, ob.footprint_radius, ob.v_max,
                             region.center - state_.p, region.radius});
  }
  return obs;
}

bool Env::SweepStep(const RobotState& s, const Control& u, double t, int* cost) const {
  const auto& robot = shield_.robot();
  const double dt = cfg_.grid.dt;
  bool contact = false;
  for (int j = 1; j <= kSweepSamples; ++j) {
    const double tau = dt * j / kSweepSamples;
    const Point2 p = robot.Step(s, u, tau).p;
    for (const Obstacle& ob : obstacles_) {
      const double d = geometry::Distance(p, ob.PositionAt(t + tau));
      if (d < ob.footprint_radius + cfg_.robot.radius) {
        contact = true;
        if (ob.kind == ObstacleKind::kGremlin || d < ob.footprint_radius) *cost = 1;
      }
    }
  }
  return contact;
}

StepRecord Env::Step(Action a, Mode mode) {
  if (!active_) throw std::logic_error("Env::Step called before Reset");
  if (done()) throw std::logic_error("Env::Step called on a finished episode");
  a = dynamics::ClampAction(a);
  const auto& robot = shield_.robot();
  const double t0 = time();

  projection_.reset();
  alpha_.reset();
  filters::FilterOutcome out;
  switch (mode) {
    case Mode::kBareShield:
      out = {a, robot.ToControl(a), filters::OutcomeKind::kOriginal, std::nullopt, 0};
      break;
    case Mode::kReplace:
      out = filter_.ReplaceAction(state_, a, obstacles_, t0, filter_rng_);
      break;
    case Mode::kProject: {
      filters::ProjectionTrace trace;
      out = filter_.ProjectAction(state_, a, obstacles_, t0, &trace);
      if (out.kind == filters::OutcomeKind::kProjected) {
        projection_ = std::move(trace);
        alpha_ = out.alpha_used;
      }
      break;
    }
  }

  StepRecord rec;
  rec.substituted = out.kind;
  rec.action = out.action;
  const double d_prev = geometry::Distance(state_.p, layout_.goal.center);

  shield::SafetyShield::BeginAction(shield_state_);
  executed_.clear();
  for (int k = 0; k < cfg_.grid.steps_per_action; ++k) {
    const double t = time();
    auto [st, decision] = shield_.Step(std::move(shield_state_), state_, out.control, obstacles_, t);
    shield_state_ = std::move(st);
    rec.intervention = rec.intervention || decision.intervention;
    executed_.push_back({state_, decision.executed, t});
    rec.contact = SweepStep(state_, decision.executed, t, &rec.cost) || rec.contact;
    state_ = robot.Step(state_, decision.executed, cfg_.grid.dt);
    ++shield_steps_;
  }
  ++steps_taken_;

  const double d_now = geometry::Distance(state_.p, layout_.goal.center);
  rec.reward = cfg_.progress_weight * (d_prev - d_now);
  if (d_now <= layout_.goal.radius) {
    rec.goal_reached = true;
    rec.reward += cfg_.goal_bonus;
    layout_.goal.center = SampleGoal(layout_rng_, state_.p);
  }
  rec.done = done();
  rec.observation = Observe();
  return rec;
}

Action PolicyGoalSeek(const Observation& obs, const dynamics::RobotParams& params) {
  const Point2 to_goal = obs.goal_relative;
  const double dist = Norm(to_goal);
  if (dist < 1e-9) return {};
  Point2 dir = (1.0 / dist) * to_goal;
  const double phi = obs.robot.phi;
  const Point2 heading{std::cos(phi), std::sin(phi)};

  // Head for a tangent of the nearest region that blocks the straight line
  // to the goal. Of the two tangents, prefer the one closest to the current
  // direction of travel (or the heading axis when nearly at rest), so the
  // choice does not flip while passing.
  constexpr double kMargin = 0.15;
  double nearest_edge = std::numeric_limits<double>::infinity();
  double blocked_at = std::numeric_limits<double>::infinity();
  Point2 detour = dir;
  const double speed = Norm(obs.robot.v);
  const Point2 travel = speed > 0.02 ? (1.0 / speed) * obs.robot.v : heading;
  for (const ObstacleObservation& ob : obs.obstacles) {
    const Point2 c = ob.region_relative;
    const double range = Norm(c);
    const double keep_out = ob.region_radius + params.radius + kMargin;
    nearest_edge = std::min(nearest_edge, range - ob.region_radius - params.radius);
    const double along = Dot(c, dir);
    if (along <= 0.0 || along >= dist + keep_out) continue;
    if (std::abs(Cross(dir, c)) >= keep_out || along >= blocked_at) continue;
    blocked_at = along;
    const double base = std::atan2(c.y, c.x);
    const double off = range > keep_out ? std::asin(keep_out / range) : 0.5 * kPi;
    const Point2 left{std::cos(base + off), std::sin(base + off)};
    const Point2 right{std::cos(base - off), std::sin(base - off)};
    auto score = [&](Point2 t) {
      return (speed > 0.02 ? Dot(t, travel) : std::abs(Dot(t, travel))) + 0.5 * Dot(t, dir);
    };
    detour = score(left) >= score(right) ? left : right;
  }
  dir = detour;

  // Velocity error against a reference that still allows stopping at the
  // goal or short of the nearest region. Thrust works both ways, so the
  // heading only needs to line up with the axis of that error, never more
  // than a quarter turn away. Turning is slow, so thrust fades out while the
  // heading is far off that axis.
  const double room = std::max(0.0, std::min(dist, 2.0 * nearest_edge));
  const double v_ref = std::min(0.6 * params.v_cap, 0.7 * std::sqrt(2.0 * params.u1_max * room));
  Point2 want = v_ref * dir - obs.robot.v;
  // Drifting the wrong way: stop first.
  if (speed > 0.03 && Dot(obs.robot.v, dir) < 0.5 * speed) want = -1.0 * obs.robot.v;
  const Point2 axis = Norm(want) > 1e-9 ? want : dir;
  const double err = dynamics::WrapHalfTurn(std::atan2(axis.y, axis.x) - phi);
  const double a2 = std::clamp(err / 0.2, -1.0, 1.0);
  const double gate = std::max(0.0, 1.0 - std::abs(err) / 0.35);
  const double a1 =
      gate * std::clamp(Dot(want, heading) / (2.0 * params.u1_max), -1.0, 1.0);
  return {a1, a2};
}

Action PolicyRandom(Rng& rng) {
  const double a1 = rng.Uniform(-1.0, 1.0);
  const double a2 = rng.Uniform(-1.0, 1.0);
  return {a1, a2};
}

}  // namespace shieldsim::env
