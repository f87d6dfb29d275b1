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

#include "shieldsim/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json_util.hpp"

namespace shieldsim::harness {

namespace {

using internal::Json;
using reachability::CircularMotion;
using reachability::Obstacle;
using reachability::ObstacleKind;
using reachability::StaticMotion;

std::string Num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw std::runtime_error(path.string() + ": write failed");
}

Stat Describe(const std::vector<EpisodeMetrics>& eps, double (*get)(const EpisodeMetrics&)) {
  Stat s;
  if (eps.empty()) return s;
  double sum = 0.0;
  for (const auto& e : eps) sum += get(e);
  s.mean = sum / static_cast<double>(eps.size());
  if (eps.size() > 1) {
    double ss = 0.0;
    for (const auto& e : eps) ss += (get(e) - s.mean) * (get(e) - s.mean);
    s.stddev = std::sqrt(ss / static_cast<double>(eps.size() - 1));
  }
  return s;
}

ObstacleKind ParseKind(const std::string& s) {
  for (ObstacleKind k : {ObstacleKind::kHazard, ObstacleKind::kGremlin, ObstacleKind::kGoal,
                         ObstacleKind::kButton}) {
    if (reachability::ToString(k) == s) return k;
  }
  throw std::invalid_argument("unknown obstacle kind '" + s + "'");
}

filters::OutcomeKind ParseOutcome(const std::string& s) {
  for (auto k : {filters::OutcomeKind::kOriginal, filters::OutcomeKind::kReplaced,
                 filters::OutcomeKind::kProjected, filters::OutcomeKind::kZeroAction}) {
    if (filters::ToString(k) == s) return k;
  }
  throw std::invalid_argument("unknown substitution kind '" + s + "'");
}

}  // namespace

std::string_view ToString(Policy policy) {
  return policy == Policy::kGoalSeek ? "goal-seek" : "random";
}

Policy ParsePolicy(std::string_view name) {
  if (name == "goal-seek") return Policy::kGoalSeek;
  if (name == "random") return Policy::kRandom;
  throw std::invalid_argument("unknown policy '" + std::string(name) +
                              "' (expected goal-seek or random)");
}

void Validate(const RunConfig& cfg) {
  if (cfg.seeds.empty()) throw std::invalid_argument("run config: seeds must be nonempty");
  if (cfg.episodes_per_seed < 1) {
    throw std::invalid_argument("run config: episodes_per_seed must be >= 1");
  }
  if (cfg.threads < 0 || cfg.trace_episodes < 0) {
    throw std::invalid_argument("run config: threads and trace_episodes must be >= 0");
  }
  env::Validate(cfg.env);
}

RunConfig ParseRunConfig(std::string_view json_text, std::string_view source) {
  RunConfig cfg;
  cfg.env = env::ParseConfig(json_text, source);
  const Json root = internal::ParseJson(json_text, source);
  const internal::Section top(root, "", source);
  if (top.Has("run")) {
    const internal::Section s = top.Child("run");
    s.AllowOnly({"seeds", "episodes_per_seed", "threads", "trace_episodes"});
    if (s.Has("seeds")) {
      const Json& seeds = s.json().at("seeds");
      if (!seeds.is_array()) s.Fail(s.Join("seeds"), "expected an array of integers");
      cfg.seeds.clear();
      for (const Json& v : seeds) {
        if (!v.is_number_unsigned()) s.Fail(s.Join("seeds"), "expected unsigned 64-bit integers");
        cfg.seeds.push_back(v.get<std::uint64_t>());
      }
    }
    s.Read("episodes_per_seed", cfg.episodes_per_seed);
    s.Read("threads", cfg.threads);
    s.Read("trace_episodes", cfg.trace_episodes);
  }
  try {
    Validate(cfg);
  } catch (const std::invalid_argument& e) {
    throw internal::ConfigError(std::string(source) + ": " + e.what());
  }
  return cfg;
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw internal::ConfigError(path + ": cannot open config file");
  std::ostringstream text;
  text << in.rdbuf();
  RunConfig cfg = ParseRunConfig(text.str(), path);
  cfg.config_path = path;
  return cfg;
}

std::uint64_t EpisodeSeed(std::uint64_t seed, int episode) {
  return MixSeed(seed, static_cast<std::uint64_t>(episode));
}

EpisodeMetrics RunEpisode(const env::EnvConfig& cfg, env::Mode mode, Policy policy,
                          std::uint64_t episode_seed, EpisodeLog* log,
                          const StepObserver& observer) {
  env::Env e(cfg);
  env::Observation obs = e.Reset(episode_seed);
  Rng policy_rng(MixSeed(episode_seed, 2));

  if (log != nullptr) {
    *log = {};
    log->episode_seed = episode_seed;
    log->mode = std::string(env::ToString(mode));
    log->policy = std::string(ToString(policy));
    log->half_extent = cfg.arena_half_extent;
    log->robot_radius = cfg.robot.radius;
    log->goal_radius = cfg.goal_radius;
    log->obstacles = e.obstacles();
    log->steps.push_back({0.0, e.state(), e.layout().goal.center, false, {}});
  }

  EpisodeMetrics m;
  m.episode_seed = episode_seed;
  while (!e.done()) {
    const dynamics::Action a = policy == Policy::kGoalSeek ? env::PolicyGoalSeek(obs, cfg.robot)
                                                           : env::PolicyRandom(policy_rng);
    const env::StepRecord rec = e.Step(a, mode);
    if (observer) observer(e, rec);
    m.episode_return += rec.reward;
    m.cost += rec.cost;
    m.interventions += rec.intervention ? 1 : 0;
    m.replaced += rec.substituted == filters::OutcomeKind::kReplaced ? 1 : 0;
    m.projected += rec.substituted == filters::OutcomeKind::kProjected ? 1 : 0;
    m.zero_actions += rec.substituted == filters::OutcomeKind::kZeroAction ? 1 : 0;
    m.goals_reached += rec.goal_reached ? 1 : 0;
    m.contacts += rec.contact ? 1 : 0;
    ++m.steps;
    obs = rec.observation;
    if (log != nullptr) {
      log->steps.push_back(
          {e.time(), e.state(), e.layout().goal.center, rec.intervention, rec.substituted});
    }
  }
  return m;
}

Summary Summarize(const std::vector<EpisodeMetrics>& eps) {
  Summary s;
  s.episodes = static_cast<int>(eps.size());
  s.episode_return = Describe(eps, [](const EpisodeMetrics& e) { return e.episode_return; });
  s.cost = Describe(eps, [](const EpisodeMetrics& e) { return double(e.cost); });
  s.interventions = Describe(eps, [](const EpisodeMetrics& e) { return double(e.interventions); });
  s.replaced = Describe(eps, [](const EpisodeMetrics& e) { return double(e.replaced); });
  s.projected = Describe(eps, [](const EpisodeMetrics& e) { return double(e.projected); });
  s.zero_actions = Describe(eps, [](const EpisodeMetrics& e) { return double(e.zero_actions); });
  s.goals_reached = Describe(eps, [](const EpisodeMetrics& e) { return double(e.goals_reached); });
  s.contacts = Describe(eps, [](const EpisodeMetrics& e) { return double(e.contacts); });
  return s;
}

SuiteResult RunSuite(const RunConfig& cfg) {
  Validate(cfg);
  struct Task {
    std::uint64_t seed;
    int episode;
  };
  std::vector<Task> tasks;
  for (std::uint64_t seed : cfg.seeds) {
    for (int ep = 0; ep < cfg.episodes_per_seed; ++ep) tasks.push_back({seed, ep});
  }

  SuiteResult result;
  result.episodes.resize(tasks.size());
  const std::size_t n_traces = std::min<std::size_t>(tasks.size(), cfg.trace_episodes);
  result.traces.resize(n_traces);
  std::vector<std::exception_ptr> errors(tasks.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      try {
        const std::uint64_t es = EpisodeSeed(tasks[i].seed, tasks[i].episode);
        EpisodeLog* log = i < n_traces ? &result.traces[i] : nullptr;
        EpisodeMetrics m = RunEpisode(cfg.env, cfg.mode, cfg.policy, es, log);
        m.seed = tasks[i].seed;
        m.episode = tasks[i].episode;
        result.episodes[i] = m;
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  std::size_t n_threads = cfg.threads > 0 ? static_cast<std::size_t>(cfg.threads)
                                          : std::max(1u, std::thread::hardware_concurrency());
  n_threads = std::min(n_threads, tasks.size());
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 1; t < n_threads; ++t) pool.emplace_back(worker);
    worker();
  }
  for (const auto& err : errors) {
    if (err) std::rethrow_exception(err);
  }
  result.summary = Summarize(result.episodes);

  if (!cfg.out_dir.empty()) {
    namespace fs = std::filesystem;
    const fs::path out(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(out / "traces", ec);
    if (ec) throw std::runtime_error(out.string() + ": cannot create directory: " + ec.message());
    WriteFile(out / "episodes.csv", EpisodesCsv(result.episodes, cfg.mode, cfg.policy));
    WriteFile(out / "summary.csv", SummaryCsv(result.summary, cfg.mode, cfg.policy));
    for (std::size_t i = 0; i < result.traces.size(); ++i) {
      const std::string stem = "episode_" + std::to_string(i);
      WriteFile(out / "traces" / (stem + ".json"), TraceToJson(result.traces[i]));
      WriteFile(out / "traces" / (stem + ".svg"), RenderSvg(result.traces[i]));
    }
  }
  return result;
}

std::string EpisodesCsv(const std::vector<EpisodeMetrics>& eps, env::Mode mode, Policy policy) {
  std::string out =
      "# shieldsim-metrics v1\n"
      "seed,episode,episode_seed,mode,policy,return,cost,interventions,replaced,projected,"
      "zero_actions,goals_reached,contacts,steps\n";
  for (const auto& e : eps) {
    out += std::to_string(e.seed) + "," + std::to_string(e.episode) + "," +
           std::to_string(e.episode_seed) + "," + std::string(env::ToString(mode)) + "," +
           std::string(ToString(policy)) + "," + Num(e.episode_return) + "," +
           std::to_string(e.cost) + "," + std::to_string(e.interventions) + "," +
           std::to_string(e.replaced) + "," + std::to_string(e.projected) + "," +
           std::to_string(e.zero_actions) + "," + std::to_string(e.goals_reached) + "," +
           std::to_string(e.contacts) + "," + std::to_string(e.steps) + "\n";
  }
  return out;
}

std::string SummaryCsv(const Summary& s, env::Mode mode, Policy policy) {
  std::string out = "# shieldsim-summary v1\nmode,policy,episodes,metric,mean,std\n";
  const std::string prefix = std::string(env::ToString(mode)) + "," +
                             std::string(ToString(policy)) + "," + std::to_string(s.episodes) +
                             ",";
  const std::pair<const char*, const Stat*> rows[] = {
      {"return", &s.episode_return}, {"cost", &s.cost},
      {"interventions", &s.interventions}, {"replaced", &s.replaced},
      {"projected", &s.projected}, {"zero_actions", &s.zero_actions},
      {"goals_reached", &s.goals_reached}, {"contacts", &s.contacts}};
  for (const auto& [name, stat] : rows) {
    out += prefix + name + "," + Num(stat->mean) + "," + Num(stat->stddev) + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// Traces

std::string TraceToJson(const EpisodeLog& log) {
  Json j;
  j["format"] = "shieldsim-trace";
  j["version"] = 1;
  j["episode_seed"] = log.episode_seed;
  j["mode"] = log.mode;
  j["policy"] = log.policy;
  j["half_extent"] = log.half_extent;
  j["robot_radius"] = log.robot_radius;
  j["goal_radius"] = log.goal_radius;
  j["obstacles"] = Json::array();
  for (const Obstacle& ob : log.obstacles) {
    Json o;
    o["id"] = ob.id;
    o["kind"] = std::string(reachability::ToString(ob.kind));
    o["radius"] = ob.footprint_radius;
    o["v_max"] = ob.v_max;
    if (const auto* c = std::get_if<CircularMotion>(&ob.motion)) {
      o["motion"] = {{"type", "circular"},
                     {"pivot", {c->pivot.x, c->pivot.y}},
                     {"orbit", c->orbit},
                     {"rate", c->angular_rate},
                     {"phase", c->phase}};
    } else {
      const auto& s = std::get<StaticMotion>(ob.motion);
      o["motion"] = {{"type", "static"}, {"center", {s.center.x, s.center.y}}};
    }
    j["obstacles"].push_back(o);
  }
  j["steps"] = Json::array();
  for (const TraceStep& s : log.steps) {
    j["steps"].push_back({s.t, s.state.p.x, s.state.p.y, s.state.v.x, s.state.v.y, s.state.phi,
                          s.goal.x, s.goal.y, s.intervention ? 1 : 0,
                          std::string(filters::ToString(s.substituted))});
  }
  return j.dump() + "\n";
}

EpisodeLog ParseTrace(std::string_view text, std::string_view source) {
  const Json j = internal::ParseJson(text, source);
  const std::string src(source);
  auto bad = [&](const std::string& what) -> std::runtime_error {
    return std::runtime_error(src + ": malformed trace: " + what);
  };
  try {
    if (!j.is_object() || j.value("format", "") != "shieldsim-trace") {
      throw bad("missing format tag 'shieldsim-trace'");
    }
    if (j.at("version").get<int>() != 1) throw bad("unsupported version");
    EpisodeLog log;
    log.episode_seed = j.at("episode_seed").get<std::uint64_t>();
    log.mode = j.at("mode").get<std::string>();
    log.policy = j.at("policy").get<std::string>();
    log.half_extent = j.at("half_extent").get<double>();
    log.robot_radius = j.at("robot_radius").get<double>();
    log.goal_radius = j.at("goal_radius").get<double>();
    if (!(log.half_extent > 0.0)) throw bad("half_extent must be > 0");
    for (const Json& o : j.at("obstacles")) {
      Obstacle ob;
      ob.id = o.at("id").get<int>();
      ob.kind = ParseKind(o.at("kind").get<std::string>());
      ob.footprint_radius = o.at("radius").get<double>();
      ob.v_max = o.at("v_max").get<double>();
      const Json& m = o.at("motion");
      const std::string type = m.at("type").get<std::string>();
      if (type == "circular") {
        const Json& p = m.at("pivot");
        ob.motion = CircularMotion{{p.at(0).get<double>(), p.at(1).get<double>()},
                                   m.at("orbit").get<double>(),
                                   m.at("rate").get<double>(),
                                   m.at("phase").get<double>()};
      } else if (type == "static") {
        const Json& c = m.at("center");
        ob.motion = StaticMotion{{c.at(0).get<double>(), c.at(1).get<double>()}};
      } else {
        throw bad("unknown motion type '" + type + "'");
      }
      log.obstacles.push_back(ob);
    }
    const Json& steps = j.at("steps");
    if (!steps.is_array() || steps.empty()) throw bad("steps must be a nonempty array");
    for (const Json& s : steps) {
      if (!s.is_array() || s.size() != 10) throw bad("each step must have 10 fields");
      TraceStep ts;
      ts.t = s.at(0).get<double>();
      ts.state.p = {s.at(1).get<double>(), s.at(2).get<double>()};
      ts.state.v = {s.at(3).get<double>(), s.at(4).get<double>()};
      ts.state.phi = s.at(5).get<double>();
      ts.goal = {s.at(6).get<double>(), s.at(7).get<double>()};
      ts.intervention = s.at(8).get<int>() != 0;
      ts.substituted = ParseOutcome(s.at(9).get<std::string>());
      log.steps.push_back(ts);
    }
    return log;
  } catch (const Json::exception& e) {
    throw bad(e.what());
  } catch (const std::invalid_argument& e) {
    throw bad(e.what());
  }
}

std::string RenderSvg(const EpisodeLog& log) {
  constexpr double kSize = 640.0;
  constexpr double kMargin = 20.0;
  const double H = log.half_extent;
  // Fit the arena and the whole path.
  double extent = H;
  for (const TraceStep& s : log.steps) {
    extent = std::max({extent, std::abs(s.state.p.x), std::abs(s.state.p.y)});
  }
  extent += log.robot_radius;
  const double scale = (kSize - 2.0 * kMargin) / (2.0 * extent);
  auto X = [&](double x) { return Num(kMargin + (x + extent) * scale); };
  auto Y = [&](double y) { return Num(kMargin + (extent - y) * scale); };
  auto R = [&](double r) { return Num(r * scale); };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kSize << "\" height=\"" << kSize
      << "\" viewBox=\"0 0 " << kSize << " " << kSize << "\">\n"
      << "<title>episode " << log.episode_seed << " (" << log.mode << ", " << log.policy
      << ")</title>\n"
      << "<rect class=\"arena\" x=\"" << X(-H) << "\" y=\"" << Y(H) << "\" width=\""
      << R(2.0 * H) << "\" height=\"" << R(2.0 * H)
      << "\" fill=\"#fafafa\" stroke=\"#888\" stroke-width=\"1\"/>\n";

  // Obstacles, with gremlins drawn at evenly spaced times.
  const double t_end = log.steps.back().t;
  for (const Obstacle& ob : log.obstacles) {
    if (std::holds_alternative<StaticMotion>(ob.motion)) {
      const auto c = ob.PositionAt(0.0);
      svg << "<circle class=\"hazard\" cx=\"" << X(c.x) << "\" cy=\"" << Y(c.y) << "\" r=\""
          << R(ob.footprint_radius) << "\" fill=\"#e6a0a0\" stroke=\"#b03030\"/>\n";
      continue;
    }
    if (const auto conf = ob.Confinement()) {
      svg << "<circle class=\"confinement\" cx=\"" << X(conf->center.x) << "\" cy=\""
          << Y(conf->center.y) << "\" r=\"" << R(conf->radius)
          << "\" fill=\"none\" stroke=\"#7070c0\" stroke-dasharray=\"4 3\"/>\n";
    }
    constexpr int kSamples = 8;
    for (int i = 0; i <= kSamples; ++i) {
      const auto c = ob.PositionAt(t_end * i / kSamples);
      svg << "<circle class=\"gremlin\" cx=\"" << X(c.x) << "\" cy=\"" << Y(c.y) << "\" r=\""
          << R(ob.footprint_radius) << "\" fill=\"#9090e0\" fill-opacity=\"0.35\"/>\n";
    }
  }

  // Goals in the order they were visited.
  std::vector<geometry::Point2> goals;
  for (const TraceStep& s : log.steps) {
    if (goals.empty() || !(goals.back() == s.goal)) goals.push_back(s.goal);
  }
  for (const auto& g : goals) {
    svg << "<circle class=\"goal\" cx=\"" << X(g.x) << "\" cy=\"" << Y(g.y) << "\" r=\""
        << R(log.goal_radius) << "\" fill=\"#a0e0a0\" fill-opacity=\"0.5\" stroke=\"#309030\"/>\n";
  }

  svg << "<polyline class=\"path\" fill=\"none\" stroke=\"#202020\" stroke-width=\"1.5\" points=\"";
  for (std::size_t i = 0; i < log.steps.size(); ++i) {
    svg << (i ? " " : "") << X(log.steps[i].state.p.x) << "," << Y(log.steps[i].state.p.y);
  }
  svg << "\"/>\n";

  for (const TraceStep& s : log.steps) {
    const std::string cx = X(s.state.p.x);
    const std::string cy = Y(s.state.p.y);
    switch (s.substituted) {
      case filters::OutcomeKind::kReplaced:
        svg << "<rect class=\"replaced\" x=\"" << Num(std::stod(cx) - 3) << "\" y=\""
            << Num(std::stod(cy) - 3) << "\" width=\"6\" height=\"6\" fill=\"#e0a020\"/>\n";
        break;
      case filters::OutcomeKind::kProjected:
        svg << "<circle class=\"projected\" cx=\"" << cx << "\" cy=\"" << cy
            << "\" r=\"3\" fill=\"#20a0e0\"/>\n";
        break;
      case filters::OutcomeKind::kZeroAction:
        svg << "<circle class=\"zero-action\" cx=\"" << cx << "\" cy=\"" << cy
            << "\" r=\"3\" fill=\"#808080\"/>\n";
        break;
      case filters::OutcomeKind::kOriginal:
        break;
    }
    if (s.intervention) {
      svg << "<circle class=\"intervention\" cx=\"" << cx << "\" cy=\"" << cy
          << "\" r=\"4\" fill=\"none\" stroke=\"#d02020\" stroke-width=\"1.5\"/>\n";
    }
  }
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace shieldsim::harness
