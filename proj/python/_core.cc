// Copyright 2026 The Rallycoach Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <tuple>
#include <vector>

#include "rallycoach/estimation.h"
#include "rallycoach/fixture.h"
#include "rallycoach/json_io.h"
#include "rallycoach/match_data.h"
#include "rallycoach/recommender.h"
#include "rallycoach/simulator.h"

namespace py = pybind11;
namespace rc = rallycoach;

namespace {

// Results cross the boundary as JSON text; the Python side decodes them.
std::string Dump(const nlohmann::json& j) { return j.dump(); }

rc::LoadOptions Options(bool drop_to_smash) {
  rc::LoadOptions o;
  o.soft_rules.drop_to_smash = drop_to_smash;
  return o;
}

std::vector<rc::ShotEvent> Shots(const std::vector<std::tuple<std::string, std::string>>& pairs,
                                 const rc::Taxonomy& taxonomy) {
  std::vector<rc::ShotEvent> out;
  for (const auto& [actor, shot] : pairs) out.push_back({actor, taxonomy.Parse(shot), out.size()});
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "rallycoach core: match logs, conditional models, recommendations, rollouts";

  // Translators are tried newest first, so the base class goes in first.
  auto& base = py::register_exception<rc::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<rc::ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<rc::ParseError>(m, "ParseError", base.ptr());
  py::register_exception<rc::ValidationError>(m, "ValidationError", base.ptr());
  py::register_exception<rc::UnknownPlayerError>(m, "UnknownPlayerError", base.ptr());
  py::register_exception<rc::UnknownShotError>(m, "UnknownShotError", base.ptr());

  m.def("shots", [] {
    std::vector<std::string> names;
    const auto& t = *rc::Taxonomy::Default();
    for (rc::ShotId s : t.All()) names.push_back(t.Name(s));
    return names;
  });

  py::class_<rc::Dataset>(m, "Dataset")
      .def_property_readonly("rally_count", &rc::Dataset::RallyCount)
      .def_property_readonly("shot_count", &rc::Dataset::ShotCount)
      .def_property_readonly("players",
                             [](const rc::Dataset& d) {
                               std::vector<std::string> ids;
                               for (const auto& p : d.players()) ids.push_back(p.id);
                               return ids;
                             })
      .def_property_readonly("match_ids",
                             [](const rc::Dataset& d) {
                               std::vector<std::string> ids;
                               for (const auto& x : d.matches()) ids.push_back(x.match_id);
                               return ids;
                             })
      .def("to_text", &rc::WriteDataset)
      .def("shot_frequencies",
           [](const rc::Dataset& d, const std::string& player) {
             return rc::ShotFrequencies(d, player);
           })
      .def("replicate", &rc::Replicate, py::arg("times"))
      .def("__eq__", [](const rc::Dataset& a, const rc::Dataset& b) { return a == b; });

  m.def(
      "parse_dataset",
      [](const std::string& text, bool drop_to_smash) {
        return rc::ParseDataset(text, "<python>", Options(drop_to_smash));
      },
      py::arg("text"), py::arg("drop_to_smash") = true);
  m.def(
      "load_dataset",
      [](const std::string& path, bool drop_to_smash) {
        return rc::LoadDataset(path, Options(drop_to_smash));
      },
      py::arg("path"), py::arg("drop_to_smash") = true);
  m.def(
      "generate_fixture",
      [](std::uint64_t seed, std::size_t matches, std::size_t rallies_per_match) {
        rc::FixtureOptions o;
        o.seed = seed;
        o.matches = matches;
        o.rallies_per_match = rallies_per_match;
        return rc::GenerateFixture(o);
      },
      py::arg("seed") = rc::FixtureOptions{}.seed, py::arg("matches") = 3,
      py::arg("rallies_per_match") = 110);

  py::class_<rc::ConditionalModel>(m, "Model")
      .def_property_readonly("responder", &rc::ConditionalModel::responder)
      .def_property_readonly("stimulator", &rc::ConditionalModel::stimulator)
      .def_property_readonly("alpha", &rc::ConditionalModel::alpha)
      .def_property_readonly("rallies_observed", &rc::ConditionalModel::rallies_observed)
      .def("n_played",
           [](const rc::ConditionalModel& m, const std::string& response,
              const std::string& stimulus) {
             return m.Stats(m.taxonomy().Parse(response), m.taxonomy().Parse(stimulus)).n_played;
           })
      .def("prob",
           [](const rc::ConditionalModel& m, const std::string& response,
              const std::string& stimulus) {
             return rc::Prob(m, m.taxonomy().Parse(response), m.taxonomy().Parse(stimulus));
           })
      .def("success_rate",
           [](const rc::ConditionalModel& m, const std::string& response,
              const std::string& stimulus) {
             return rc::SuccessRate(m, m.taxonomy().Parse(response),
                                    m.taxonomy().Parse(stimulus));
           })
      .def("to_json", [](const rc::ConditionalModel& m) { return Dump(rc::ModelToJson(m)); })
      .def("__eq__",
           [](const rc::ConditionalModel& a, const rc::ConditionalModel& b) { return a == b; });

  m.def("build_model", &rc::BuildModel, py::arg("dataset"), py::arg("responder"),
        py::arg("stimulator"), py::arg("alpha") = 0.0);
  m.def(
      "model_from_json",
      [](const std::string& text) { return rc::ModelFromJson(nlohmann::json::parse(text)); },
      py::arg("text"));

  m.def(
      "best_response",
      [](const rc::ConditionalModel& m, const std::string& stimulus, std::size_t k,
         bool drop_to_smash) {
        const auto matrix = m.legality().WithSoftRules({drop_to_smash});
        return Dump(
            rc::ToJson(rc::BestResponse(m, m.taxonomy().Parse(stimulus), k, matrix), m.taxonomy()));
      },
      py::arg("model"), py::arg("stimulus"), py::arg("k") = rc::kDefaultSuggestions,
      py::arg("drop_to_smash") = true);
  m.def(
      "serve_choice",
      [](const rc::ConditionalModel& m, std::size_t k) {
        return Dump(rc::ToJson(rc::ServeChoice(m, k), m.taxonomy()));
      },
      py::arg("model"), py::arg("k") = rc::kDefaultSuggestions);
  m.def(
      "recommendation_table",
      [](const rc::ConditionalModel& m, std::size_t k, const std::string& format) {
        return rc::FormatRecommendationTable(rc::RecommendationTable(m, k), m.taxonomy(), k,
                                             rc::ParseReportFormat(format));
      },
      py::arg("model"), py::arg("k") = rc::kDefaultSuggestions, py::arg("format") = "csv");

  m.def(
      "label_rewards",
      [](const std::vector<std::tuple<std::string, std::string>>& shots, const std::string& winner,
         const std::string& termination, const std::string& focal) {
        const auto& t = *rc::Taxonomy::Default();
        rc::Rally rally{"r", shots.empty() ? "" : std::get<0>(shots.front()), Shots(shots, t),
                        {winner, rc::ParseTermination(termination)}};
        std::vector<std::tuple<std::size_t, std::string, double>> out;
        for (const auto& l : rc::LabelRewards(rally, focal, rc::RewardConfig{})) {
          out.emplace_back(l.index, std::string(rc::RewardTierName(l.tier)), l.value);
        }
        return out;
      },
      py::arg("shots"), py::arg("winner"), py::arg("termination"), py::arg("focal"));

  m.def(
      "simulate",
      [](const rc::ConditionalModel& focal_model, const rc::ConditionalModel& opponent_model,
         const std::vector<std::tuple<std::string, std::string>>& seed, std::size_t steps,
         std::size_t depth, bool live_update, const std::string& opponent_policy,
         const std::string& format) {
        rc::SimConfig cfg;
        cfg.step_limit = steps;
        cfg.depth = depth;
        cfg.live_update = live_update;
        cfg.opponent_policy = rc::ParseOpponentPolicy(opponent_policy);
        const auto r =
            rc::Simulate(focal_model, opponent_model, Shots(seed, focal_model.taxonomy()), cfg);
        return rc::FormatRollout(r, focal_model.taxonomy(), rc::ParseRolloutFormat(format));
      },
      py::arg("focal_model"), py::arg("opponent_model"), py::arg("seed"), py::arg("steps") = 10,
      py::arg("depth") = 3, py::arg("live_update") = false,
      py::arg("opponent_policy") = "best-own-utility", py::arg("format") = "json");
}
