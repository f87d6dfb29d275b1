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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "shieldsim/harness.hpp"

namespace shieldsim::harness {
namespace {

namespace fs = std::filesystem;

int Count(const std::string& text, const std::string& needle) {
  int n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) {
    ++n;
  }
  return n;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

RunConfig SmallRun(env::Mode mode, Policy policy) {
  RunConfig cfg;
  cfg.env.horizon = 40;
  cfg.mode = mode;
  cfg.policy = policy;
  cfg.seeds = {3, 4};
  cfg.episodes_per_seed = 3;
  cfg.threads = 1;
  cfg.trace_episodes = 2;
  return cfg;
}

TEST(Policy, RoundTrip) {
  EXPECT_EQ(ParsePolicy("goal-seek"), Policy::kGoalSeek);
  EXPECT_EQ(ParsePolicy(ToString(Policy::kRandom)), Policy::kRandom);
  EXPECT_THROW(ParsePolicy("greedy"), std::invalid_argument);
}

TEST(RunConfig, Parsing) {
  const RunConfig cfg = ParseRunConfig(
      R"({"version": 1, "run": {"seeds": [5, 18446744073709551615], "episodes_per_seed": 2}})");
  ASSERT_EQ(cfg.seeds.size(), 2u);
  EXPECT_EQ(cfg.seeds[1], 18446744073709551615ULL);
  EXPECT_EQ(cfg.episodes_per_seed, 2);
  EXPECT_THROW(ParseRunConfig(R"({"version": 1, "run": {"seeds": []}})"), std::runtime_error);
  EXPECT_THROW(ParseRunConfig(R"({"version": 1, "run": {"seeds": [-1]}})"), std::runtime_error);
  EXPECT_THROW(ParseRunConfig(R"({"version": 1, "run": {"seed": [1]}})"), std::runtime_error);
  EXPECT_NO_THROW(LoadRunConfig(SHIELDSIM_CONFIG_DIR "/default.json"));
  EXPECT_NO_THROW(LoadRunConfig(SHIELDSIM_CONFIG_DIR "/free.json"));
}

TEST(Summary, MeanAndSampleStd) {
  std::vector<EpisodeMetrics> eps(3);
  eps[0].episode_return = 1.0;
  eps[1].episode_return = 2.0;
  eps[2].episode_return = 6.0;
  eps[2].interventions = 3;
  const Summary s = Summarize(eps);
  EXPECT_EQ(s.episodes, 3);
  EXPECT_DOUBLE_EQ(s.episode_return.mean, 3.0);
  EXPECT_DOUBLE_EQ(s.episode_return.stddev, std::sqrt(7.0));
  EXPECT_DOUBLE_EQ(s.interventions.mean, 1.0);
  EXPECT_DOUBLE_EQ(s.cost.stddev, 0.0);
}

TEST(RunSuite, WritesVersionedOutputs) {
  const fs::path dir = fs::path(::testing::TempDir()) / "shieldsim_harness_out";
  fs::remove_all(dir);
  RunConfig cfg = SmallRun(env::Mode::kReplace, Policy::kRandom);
  cfg.out_dir = dir.string();
  const SuiteResult r = RunSuite(cfg);
  ASSERT_EQ(r.episodes.size(), 6u);
  EXPECT_EQ(r.episodes[4].seed, 4u);
  EXPECT_EQ(r.episodes[4].episode, 1);
  EXPECT_EQ(r.episodes[4].episode_seed, EpisodeSeed(4, 1));

  const std::string episodes = Slurp(dir / "episodes.csv");
  EXPECT_EQ(episodes.rfind("# shieldsim-metrics v1\nseed,episode,episode_seed,mode,policy,", 0), 0u);
  EXPECT_EQ(Count(episodes, "\n"), 2 + 6);
  EXPECT_EQ(Count(episodes, ",replace,random,"), 6);
  EXPECT_EQ(episodes, EpisodesCsv(r.episodes, cfg.mode, cfg.policy));

  const std::string summary = Slurp(dir / "summary.csv");
  EXPECT_EQ(summary.rfind("# shieldsim-summary v1\nmode,policy,episodes,metric,mean,std\n", 0), 0u);
  EXPECT_EQ(summary, SummaryCsv(Summarize(r.episodes), cfg.mode, cfg.policy));

  for (int i = 0; i < 2; ++i) {
    const std::string stem = "episode_" + std::to_string(i);
    EXPECT_TRUE(fs::exists(dir / "traces" / (stem + ".json")));
    EXPECT_TRUE(fs::exists(dir / "traces" / (stem + ".svg")));
  }
  EXPECT_FALSE(fs::exists(dir / "traces" / "episode_2.json"));
  fs::remove_all(dir);
}

TEST(RunSuite, DeterministicAcrossThreadCounts) {
  RunConfig cfg = SmallRun(env::Mode::kProject, Policy::kRandom);
  const SuiteResult one = RunSuite(cfg);
  cfg.threads = 4;
  const SuiteResult four = RunSuite(cfg);
  EXPECT_EQ(EpisodesCsv(one.episodes, cfg.mode, cfg.policy),
            EpisodesCsv(four.episodes, cfg.mode, cfg.policy));
  EXPECT_EQ(TraceToJson(one.traces[1]), TraceToJson(four.traces[1]));
}

TEST(RunSuite, ModesShareLayoutsAndPolicyStreams) {
  // Same seeds give the same layouts in every mode; only the filter differs.
  for (Policy policy : {Policy::kGoalSeek, Policy::kRandom}) {
    EpisodeLog bare, replace;
    const auto& cfg = SmallRun(env::Mode::kBareShield, policy).env;
    RunEpisode(cfg, env::Mode::kBareShield, policy, 99, &bare);
    RunEpisode(cfg, env::Mode::kReplace, policy, 99, &replace);
    bare.steps.resize(1);
    replace.steps.resize(1);
    replace.mode = bare.mode;
    EXPECT_EQ(TraceToJson(bare), TraceToJson(replace));
  }
}

TEST(RunEpisode, BareShieldNeverSubstitutes) {
  const auto cfg = SmallRun(env::Mode::kBareShield, Policy::kRandom);
  int steps = 0;
  const EpisodeMetrics m = RunEpisode(
      cfg.env, env::Mode::kBareShield, Policy::kRandom, 7, nullptr,
      [&](const env::Env& e, const env::StepRecord& rec) {
        ++steps;
        EXPECT_EQ(rec.substituted, filters::OutcomeKind::kOriginal);
        EXPECT_EQ(e.steps_taken(), steps);
      });
  EXPECT_EQ(steps, 40);
  EXPECT_EQ(m.steps, 40);
  EXPECT_EQ(m.replaced + m.projected + m.zero_actions, 0);
}

TEST(RunSuite, FreeSpaceGoalSeekIsUntouched) {
  RunConfig cfg = ParseRunConfig(R"({"version": 1, "hazards": {"count": 0},
                                     "gremlins": {"count": 0}, "run": {"seeds": [8]}})");
  cfg.policy = Policy::kGoalSeek;
  cfg.mode = env::Mode::kBareShield;
  const SuiteResult r = RunSuite(cfg);
  ASSERT_EQ(r.episodes.size(), 1u);
  EXPECT_EQ(r.episodes[0].interventions, 0);
  EXPECT_EQ(r.episodes[0].cost, 0);
  EXPECT_GT(r.episodes[0].goals_reached, 0);
}

TEST(Trace, RoundTrip) {
  EpisodeLog log;
  RunEpisode(SmallRun(env::Mode::kProject, Policy::kGoalSeek).env, env::Mode::kProject,
             Policy::kGoalSeek, 12, &log);
  ASSERT_EQ(log.steps.size(), 41u);
  const std::string json = TraceToJson(log);
  const EpisodeLog back = ParseTrace(json);
  EXPECT_EQ(TraceToJson(back), json);
  EXPECT_EQ(back.steps[17].state, log.steps[17].state);
  EXPECT_EQ(back.obstacles.size(), 12u);
}

TEST(Trace, MalformedInputIsRejected) {
  EXPECT_THROW(ParseTrace("[]", "x.json"), std::runtime_error);
  EXPECT_THROW(ParseTrace("{", "x.json"), std::runtime_error);
  const std::string ok =
      R"({"format":"shieldsim-trace","version":1,"episode_seed":1,"mode":"project",)"
      R"("policy":"random","half_extent":2,"robot_radius":0.1,"goal_radius":0.3,)"
      R"("obstacles":[],"steps":[[0,0,0,0,0,0,1,1,0,"original"]]})";
  EXPECT_NO_THROW(ParseTrace(ok));
  std::string bad = ok;
  bad.replace(bad.find("original"), 8, "teleport");
  EXPECT_THROW(ParseTrace(bad), std::runtime_error);
  bad = ok;
  bad.replace(bad.find("\"version\":1"), 11, "\"version\":2");
  EXPECT_THROW(ParseTrace(bad), std::runtime_error);
  bad = ok;
  bad.replace(bad.find("[[0,0"), 5, "[[0");
  EXPECT_THROW(ParseTrace(bad), std::runtime_error);
  try {
    ParseTrace(R"({"format":"other"})", "named.json");
    FAIL();
  } catch (const std::runtime_error& e) {
    EXPECT_NE(std::string(e.what()).find("named.json"), std::string::npos);
  }
}

TEST(Svg, OneMarkerPerInterventionAndSubstitution) {
  EpisodeLog log;
  RunEpisode(SmallRun(env::Mode::kReplace, Policy::kRandom).env, env::Mode::kReplace,
             Policy::kRandom, 21, &log);
  int interventions = 0, replaced = 0, zero = 0;
  for (const TraceStep& s : log.steps) {
    interventions += s.intervention;
    replaced += s.substituted == filters::OutcomeKind::kReplaced;
    zero += s.substituted == filters::OutcomeKind::kZeroAction;
  }
  const std::string svg = RenderSvg(log);
  EXPECT_EQ(svg.rfind("<?xml", 0), 0u);
  EXPECT_EQ(Count(svg, "class=\"intervention\""), interventions);
  EXPECT_EQ(Count(svg, "class=\"replaced\""), replaced);
  EXPECT_EQ(Count(svg, "class=\"zero-action\""), zero);
  EXPECT_EQ(Count(svg, "class=\"hazard\""), 8);
  EXPECT_EQ(Count(svg, "class=\"confinement\""), 4);
  EXPECT_EQ(Count(svg, "class=\"gremlin\"") % 4, 0);
  EXPECT_EQ(Count(svg, "class=\"path\""), 1);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
}

TEST(Svg, EmptyScene) {
  EpisodeLog log;
  log.half_extent = 1.0;
  log.robot_radius = 0.1;
  log.goal_radius = 0.2;
  log.steps.push_back({});
  log.steps.push_back({0.1, {{0.5, 0.0}, {}, 0.0}, {}, false, {}});
  const std::string svg = RenderSvg(log);
  EXPECT_EQ(Count(svg, "<circle class=\"hazard\""), 0);
  EXPECT_EQ(Count(svg, "class=\"intervention\""), 0);
  EXPECT_EQ(Count(svg, "class=\"path\""), 1);
}

}  // namespace
}  // namespace shieldsim::harness
