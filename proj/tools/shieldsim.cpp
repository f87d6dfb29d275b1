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

// shieldsim run | render | selftest

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "oracles.hpp"
#include "shieldsim/harness.hpp"

namespace {

using namespace shieldsim;

int Run(const std::string& config, const std::string& mode, const std::string& policy,
        const std::string& out, std::optional<std::uint64_t> seed,
        std::optional<int> episodes, std::optional<int> threads) {
  harness::RunConfig cfg = harness::LoadRunConfig(config);
  cfg.mode = env::ParseMode(mode);
  cfg.policy = harness::ParsePolicy(policy);
  cfg.out_dir = out;
  if (seed) cfg.seeds = {*seed};
  if (episodes) cfg.episodes_per_seed = *episodes;
  if (threads) cfg.threads = *threads;

  const harness::SuiteResult result = harness::RunSuite(cfg);
  const harness::Summary& s = result.summary;
  std::printf("%s/%s: %d episodes, return %.4f, interventions %.3f, goals %.3f, cost %.3f\n",
              mode.c_str(), policy.c_str(), s.episodes, s.episode_return.mean,
              s.interventions.mean, s.goals_reached.mean, s.cost.mean);

  int bad = 0;
  for (const auto& m : result.episodes) {
    if (m.contacts > 0 || m.cost > 0) {
      std::fprintf(stderr, "shieldsim: seed %llu episode %d: %d contacts, cost %d\n",
                   static_cast<unsigned long long>(m.seed), m.episode, m.contacts, m.cost);
      ++bad;
    }
  }
  return bad == 0 ? 0 : 3;
}

int Render(const std::string& log_path, const std::string& out) {
  std::ifstream in(log_path);
  if (!in) throw std::runtime_error("cannot read " + log_path);
  std::ostringstream text;
  text << in.rdbuf();
  const harness::EpisodeLog log = harness::ParseTrace(text.str(), log_path);
  std::ofstream file(out);
  if (!file) throw std::runtime_error("cannot write " + out);
  file << harness::RenderSvg(log);
  if (!file.flush()) throw std::runtime_error("write failed: " + out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shielded point-robot simulator"};
  app.require_subcommand(1);

  std::string config, mode, policy, out;
  std::optional<std::uint64_t> seed;
  std::optional<int> episodes, threads;
  CLI::App* run = app.add_subcommand("run", "Run an episode suite and write metrics and traces");
  run->add_option("--config", config, "JSON config file")->required()->check(CLI::ExistingFile);
  run->add_option("--mode", mode, "bare-shield | replace | project")
      ->required()
      ->check(CLI::IsMember({"bare-shield", "replace", "project"}));
  run->add_option("--policy", policy, "goal-seek | random")
      ->required()
      ->check(CLI::IsMember({"goal-seek", "random"}));
  run->add_option("--out", out, "Output directory")->required();
  run->add_option("--seed", seed, "Run this single seed instead of the config's list");
  run->add_option("--episodes", episodes, "Episodes per seed")->check(CLI::PositiveNumber);
  run->add_option("--threads", threads, "Worker threads, 0 for all cores")
      ->check(CLI::NonNegativeNumber);

  std::string log_path, svg_path;
  CLI::App* render = app.add_subcommand("render", "Draw an episode trace as SVG");
  render->add_option("--log", log_path, "Trace JSON written by run")
      ->required()
      ->check(CLI::ExistingFile);
  render->add_option("--out", svg_path, "SVG file to write")->required();

  std::uint64_t selftest_seed = 1;
  long cases = 1000;
  CLI::App* selftest = app.add_subcommand("selftest", "Check the kernels against reference oracles");
  selftest->add_option("--seed", selftest_seed, "Fuzz seed");
  selftest->add_option("--cases", cases, "Cases per suite")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) return Run(config, mode, policy, out, seed, episodes, threads);
    if (*render) return Render(log_path, svg_path);
    if (*selftest) return oracle::RunSelftest(std::cout, selftest_seed, cases) ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "shieldsim: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
