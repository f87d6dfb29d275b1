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

// Batch episode runner, metrics tables and episode traces.

#ifndef SHIELDSIM_HARNESS_HPP_
#define SHIELDSIM_HARNESS_HPP_

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "shieldsim/env.hpp"

namespace shieldsim::harness {

enum class Policy { kGoalSeek, kRandom };
std::string_view ToString(Policy policy);
/// Accepts "goal-seek" and "random". Throws std::invalid_argument.
Policy ParsePolicy(std::string_view name);

struct RunConfig {
  std::string config_path;
  env::EnvConfig env;
  env::Mode mode = env::Mode::kBareShield;
  Policy policy = Policy::kGoalSeek;
  std::vector<std::uint64_t> seeds{0};
  int episodes_per_seed = 1;
  std::string out_dir;  // empty: nothing is written
  int threads = 0;      // 0: one per hardware thread
  int trace_episodes = 1;
};

void Validate(const RunConfig& cfg);

/// Reads the env config and the optional "run" section (seeds,
/// episodes_per_seed, threads, trace_episodes) from a JSON file.
RunConfig LoadRunConfig(const std::string& path);
RunConfig ParseRunConfig(std::string_view json_text, std::string_view source = "<string>");

struct EpisodeMetrics {
  std::uint64_t seed = 0;
  int episode = 0;
  std::uint64_t episode_seed = 0;
  double episode_return = 0.0;
  int cost = 0;
  int interventions = 0;
  int replaced = 0;
  int projected = 0;
  int zero_actions = 0;
  int goals_reached = 0;
  int contacts = 0;  // agent steps with a robot/obstacle disc overlap
  int steps = 0;
};

struct TraceStep {
  double t = 0.0;
  dynamics::RobotState state;
  geometry::Point2 goal;
  bool intervention = false;
  filters::OutcomeKind substituted = filters::OutcomeKind::kOriginal;
};

/// Everything needed to redraw an episode.
struct EpisodeLog {
  std::uint64_t episode_seed = 0;
  std::string mode;
  std::string policy;
  double half_extent = 0.0;
  double robot_radius = 0.0;
  double goal_radius = 0.0;
  std::vector<reachability::Obstacle> obstacles;
  std::vector<TraceStep> steps;  // steps[0] is the reset state
};

struct Stat {
  double mean = 0.0;
  double stddev = 0.0;
};

struct Summary {
  int episodes = 0;
  Stat episode_return, cost, interventions, replaced, projected, zero_actions, goals_reached,
      contacts;
};

struct SuiteResult {
  std::vector<EpisodeMetrics> episodes;  // ordered by (seed index, episode)
  Summary summary;
  std::vector<EpisodeLog> traces;
};

std::uint64_t EpisodeSeed(std::uint64_t seed, int episode);

/// Called after every agent step with the environment and its record.
using StepObserver = std::function<void(const env::Env&, const env::StepRecord&)>;

EpisodeMetrics RunEpisode(const env::EnvConfig& cfg, env::Mode mode, Policy policy,
                          std::uint64_t episode_seed, EpisodeLog* log = nullptr,
                          const StepObserver& observer = {});

/// Runs every (seed, episode) pair, in parallel when threads allow, and writes
/// episodes.csv, summary.csv and traces/episode_<i>.{json,svg} under out_dir
/// when it is set.
SuiteResult RunSuite(const RunConfig& cfg);

/// Population mean and sample standard deviation of each metric.
Summary Summarize(const std::vector<EpisodeMetrics>& episodes);

std::string EpisodesCsv(const std::vector<EpisodeMetrics>& episodes, env::Mode mode,
                        Policy policy);
std::string SummaryCsv(const Summary& summary, env::Mode mode, Policy policy);

std::string TraceToJson(const EpisodeLog& log);
/// Throws std::runtime_error naming `source` on malformed input.
EpisodeLog ParseTrace(std::string_view json_text, std::string_view source = "<string>");
std::string RenderSvg(const EpisodeLog& log);

}  // namespace shieldsim::harness

#endif  // SHIELDSIM_HARNESS_HPP_
