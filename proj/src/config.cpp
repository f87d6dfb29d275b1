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

#include <fstream>
#include <sstream>

#include "json_util.hpp"
#include "shieldsim/env.hpp"

namespace shieldsim::env {

using internal::ConfigError;
using internal::Section;

EnvConfig ParseConfig(std::string_view json_text, std::string_view source) {
  const internal::Json root = internal::ParseJson(json_text, source);
  const Section top(root, "", source);
  top.AllowOnly({"version", "arena", "hazards", "gremlins", "goal", "layout", "episode", "robot",
                 "time", "filters", "run"});
  int version = 1;
  top.Read("version", version);
  if (version != 1) top.Fail("version", "unsupported config version " + std::to_string(version));

  EnvConfig cfg;
  if (top.Has("arena")) {
    const Section s = top.Child("arena");
    s.AllowOnly({"half_extent"});
    s.Read("half_extent", cfg.arena_half_extent);
  }
  if (top.Has("hazards")) {
    const Section s = top.Child("hazards");
    s.AllowOnly({"count", "radius"});
    s.Read("count", cfg.num_hazards);
    s.Read("radius", cfg.hazard_radius);
  }
  if (top.Has("gremlins")) {
    const Section s = top.Child("gremlins");
    s.AllowOnly({"count", "radius", "orbit", "speed"});
    s.Read("count", cfg.num_gremlins);
    s.Read("radius", cfg.gremlin_radius);
    s.Read("orbit", cfg.gremlin_orbit);
    s.Read("speed", cfg.gremlin_speed);
  }
  if (top.Has("goal")) {
    const Section s = top.Child("goal");
    s.AllowOnly({"radius", "min_distance"});
    s.Read("radius", cfg.goal_radius);
    s.Read("min_distance", cfg.goal_min_distance);
  }
  if (top.Has("layout")) {
    const Section s = top.Child("layout");
    s.AllowOnly({"clearance", "spacing", "max_attempts"});
    s.Read("clearance", cfg.clearance);
    s.Read("spacing", cfg.spacing);
    s.Read("max_attempts", cfg.max_layout_attempts);
  }
  if (top.Has("episode")) {
    const Section s = top.Child("episode");
    s.AllowOnly({"horizon", "progress_weight", "goal_bonus"});
    s.Read("horizon", cfg.horizon);
    s.Read("progress_weight", cfg.progress_weight);
    s.Read("goal_bonus", cfg.goal_bonus);
  }
  if (top.Has("robot")) {
    const Section s = top.Child("robot");
    s.AllowOnly({"mass", "u1_max", "u2_max", "v_cap", "align_tol", "v_stop", "radius"});
    s.Read("mass", cfg.robot.mass);
    s.Read("u1_max", cfg.robot.u1_max);
    s.Read("u2_max", cfg.robot.u2_max);
    s.Read("v_cap", cfg.robot.v_cap);
    s.Read("align_tol", cfg.robot.align_tol);
    s.Read("v_stop", cfg.robot.v_stop);
    s.Read("radius", cfg.robot.radius);
  }
  double dt = 0.01;
  int steps_per_action = 10;
  int failsafe_steps = 0;
  if (top.Has("time")) {
    const Section s = top.Child("time");
    s.AllowOnly({"dt", "steps_per_action", "failsafe_steps"});
    s.Read("dt", dt);
    s.Read("steps_per_action", steps_per_action);
    s.Read("failsafe_steps", failsafe_steps);
  }
  if (!(dt > 0.0)) top.Fail("time.dt", "must be > 0");
  cfg.grid = dynamics::DefaultGrid(cfg.robot, dt, steps_per_action);
  if (failsafe_steps != 0) cfg.grid.failsafe_steps = failsafe_steps;
  if (top.Has("filters")) {
    const Section s = top.Child("filters");
    s.AllowOnly({"replace_samples", "project_retries", "epsilon", "alpha_min", "alpha_cap"});
    s.Read("replace_samples", cfg.filters.replace_samples);
    s.Read("project_retries", cfg.filters.project_retries);
    s.Read("epsilon", cfg.filters.epsilon);
    s.Read("alpha_min", cfg.filters.alpha_min);
    s.Read("alpha_cap", cfg.filters.alpha_cap);
  }

  try {
    Validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string(source) + ": " + e.what());
  }
  return cfg;
}

EnvConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  return ParseConfig(text.str(), path);
}

}  // namespace shieldsim::env
