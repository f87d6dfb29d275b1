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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>

#include "shieldsim/harness.hpp"

namespace py = pybind11;
using namespace shieldsim;

namespace {

py::dict ToDict(const env::StepRecord& r) {
  py::dict d;
  d["observation"] = r.observation.Flatten();
  d["reward"] = r.reward;
  d["cost"] = r.cost;
  d["intervention"] = r.intervention;
  d["substituted"] = std::string(filters::ToString(r.substituted));
  d["goal_reached"] = r.goal_reached;
  d["done"] = r.done;
  d["contact"] = r.contact;
  d["action"] = py::make_tuple(r.action.a1, r.action.a2);
  return d;
}

py::dict ToDict(const harness::EpisodeMetrics& m) {
  py::dict d;
  d["seed"] = m.seed;
  d["episode"] = m.episode;
  d["episode_seed"] = m.episode_seed;
  d["return"] = m.episode_return;
  d["cost"] = m.cost;
  d["interventions"] = m.interventions;
  d["replaced"] = m.replaced;
  d["projected"] = m.projected;
  d["zero_actions"] = m.zero_actions;
  d["goals_reached"] = m.goals_reached;
  d["contacts"] = m.contacts;
  d["steps"] = m.steps;
  return d;
}

}  // namespace

PYBIND11_MODULE(_shieldsim, m) {
  m.doc() = "Shielded point-robot simulator";

  py::class_<env::EnvConfig>(m, "EnvConfig")
      .def(py::init<>())
      .def_static("load", &env::LoadConfig, py::arg("path"))
      .def_static("parse", [](const std::string& text) { return env::ParseConfig(text); },
                  py::arg("json_text"))
      .def_readwrite("horizon", &env::EnvConfig::horizon)
      .def_readwrite("num_hazards", &env::EnvConfig::num_hazards)
      .def_readwrite("num_gremlins", &env::EnvConfig::num_gremlins)
      .def_readwrite("arena_half_extent", &env::EnvConfig::arena_half_extent);

  py::class_<env::Env>(m, "Env")
      .def(py::init<env::EnvConfig>(), py::arg("config") = env::EnvConfig{})
      .def("reset",
           [](env::Env& e, std::uint64_t seed) { return e.Reset(seed).Flatten(); },
           py::arg("seed"))
      .def(
          "step",
          [](env::Env& e, double a1, double a2, const std::string& mode) {
            return ToDict(e.Step({a1, a2}, env::ParseMode(mode)));
          },
          py::arg("a1"), py::arg("a2"), py::arg("mode") = "bare-shield")
      .def("goal_seek_action",
           [](const env::Env& e) {
             const auto a = env::PolicyGoalSeek(e.Observe(), e.config().robot);
             return py::make_tuple(a.a1, a.a2);
           })
      .def_property_readonly("done", &env::Env::done)
      .def_property_readonly("time", &env::Env::time)
      .def_property_readonly("steps_taken", &env::Env::steps_taken)
      .def_property_readonly("position", [](const env::Env& e) {
        return py::make_tuple(e.state().p.x, e.state().p.y);
      });

  m.def(
      "run_episode",
      [](const env::EnvConfig& cfg, const std::string& mode, const std::string& policy,
         std::uint64_t episode_seed) {
        const env::Mode m = env::ParseMode(mode);
        const harness::Policy p = harness::ParsePolicy(policy);
        harness::EpisodeMetrics metrics;
        {
          py::gil_scoped_release release;
          metrics = harness::RunEpisode(cfg, m, p, episode_seed);
        }
        return ToDict(metrics);
      },
      py::arg("config"), py::arg("mode"), py::arg("policy"), py::arg("episode_seed"));

  m.def(
      "run",
      [](const std::string& config_path, const std::string& mode, const std::string& policy,
         const std::string& out_dir) {
        harness::RunConfig cfg = harness::LoadRunConfig(config_path);
        cfg.mode = env::ParseMode(mode);
        cfg.policy = harness::ParsePolicy(policy);
        cfg.out_dir = out_dir;
        harness::SuiteResult r;
        {
          py::gil_scoped_release release;
          r = harness::RunSuite(cfg);
        }
        py::list out;
        for (const auto& e : r.episodes) out.append(ToDict(e));
        return out;
      },
      py::arg("config_path"), py::arg("mode"), py::arg("policy"), py::arg("out_dir") = "");

  m.def(
      "render",
      [](const std::string& trace_json) {
        return harness::RenderSvg(harness::ParseTrace(trace_json));
      },
      py::arg("trace_json"));

  m.def("episode_seed", &harness::EpisodeSeed, py::arg("seed"), py::arg("episode"));
}
