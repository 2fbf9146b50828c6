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

#include "rallycoach/json_io.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "rallycoach/recommender.h"
#include "rallycoach/simulator.h"

namespace rallycoach {
namespace {

using nlohmann::json;

std::shared_ptr<const Taxonomy> TaxonomyFromJson(const json& rows) {
  std::string text;
  for (const auto& row : rows) {
    text += row.at("id").get<std::string>() + " " + row.at("category").get<std::string>() + " " +
            row.at("side").get<std::string>() + "\n";
  }
  Taxonomy parsed = Taxonomy::FromText(text);
  auto def = Taxonomy::Default();
  if (parsed == *def) return def;
  return std::make_shared<const Taxonomy>(std::move(parsed));
}

std::string InstanceText(const InstanceRef& ref) {
  return ref.match_id + ":" + ref.rally_id + ":" + std::to_string(ref.index);
}

InstanceRef ParseInstance(const std::string& text) {
  auto a = text.find(':');
  auto b = text.rfind(':');
  if (a == std::string::npos || a == b) throw ParseError("malformed instance '" + text + "'");
  InstanceRef ref{text.substr(0, a), text.substr(a + 1, b - a - 1), 0};
  const std::string idx = text.substr(b + 1);
  auto [ptr, ec] = std::from_chars(idx.data(), idx.data() + idx.size(), ref.index);
  if (ec != std::errc() || ptr != idx.data() + idx.size()) {
    throw ParseError("malformed instance index in '" + text + "'");
  }
  return ref;
}

}  // namespace

std::string FormatNumber(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

json ToJson(const NodeValue& value) { return json{{"u_p", value.u_p}, {"u_o", value.u_o}}; }

json ToJson(const Recommendation& rec, const Taxonomy& taxonomy) {
  json ranked = json::array();
  for (const auto& u : rec.ranked) {
    ranked.push_back({{"shot", taxonomy.Name(u.shot)},
                      {"utility", u.utility},
                      {"p", u.p},
                      {"p_success", u.p_success},
                      {"support", u.support}});
  }
  return json{{"stimulus", rec.stimulus ? json(taxonomy.Name(*rec.stimulus)) : json(nullptr)},
              {"ranked", ranked},
              {"model_ref",
               {{"responder", rec.model_ref.responder},
                {"stimulator", rec.model_ref.stimulator},
                {"rallies_observed", rec.model_ref.rallies_observed}}}};
}

json ToJson(const Rollout& rollout, const Taxonomy& taxonomy) {
  json seed = json::array();
  for (const auto& e : rollout.seed_shots) {
    seed.push_back({{"agent", e.actor}, {"shot", taxonomy.Name(e.shot)}});
  }
  json entries = json::array();
  for (const auto& e : rollout.entries) {
    entries.push_back(
        {{"agent", e.agent}, {"shot", taxonomy.Name(e.shot)}, {"value", ToJson(e.value)}});
  }
  return json{{"focal", rollout.focal},
              {"opponent", rollout.opponent},
              {"step_limit", rollout.step_limit},
              {"seed", seed},
              {"entries", entries}};
}

json ToJson(const InductionResult& result, const Taxonomy& taxonomy) {
  json line = json::array();
  for (const auto& step : result.line) {
    line.push_back({{"agent", step.agent},
                    {"shot", taxonomy.Name(step.shot)},
                    {"edge_utility", step.edge_utility},
                    {"value", ToJson(step.value)}});
  }
  return json{{"best_shot", result.best_shot ? json(taxonomy.Name(*result.best_shot))
                                             : json(nullptr)},
              {"value", ToJson(result.values)},
              {"line", line}};
}

json ModelToJson(const ConditionalModel& m) {
  const Taxonomy& taxonomy = m.taxonomy();
  json shots = json::array();
  for (ShotId s : taxonomy.All()) {
    const ShotType& t = taxonomy.at(s);
    shots.push_back({{"id", t.id},
                     {"category", std::string(CategoryName(t.category))},
                     {"side", std::string(SideName(t.side))}});
  }
  json rows = json::array();
  for (const ModelEntry& e : m.Entries()) {
    json instances = json::array();
    for (const auto& ref : e.stats.instances) instances.push_back(InstanceText(ref));
    rows.push_back({{"stimulus", e.stimulus ? json(taxonomy.Name(*e.stimulus)) : json(nullptr)},
                    {"response", taxonomy.Name(e.response)},
                    {"n_played", e.stats.n_played},
                    {"hp", e.stats.hp},
                    {"mp", e.stats.mp},
                    {"mn", e.stats.mn},
                    {"ln", e.stats.ln},
                    {"instances", instances}});
  }
  return json{{"format", kModelFormat},
              {"responder", m.responder()},
              {"stimulator", m.stimulator()},
              {"alpha", m.alpha()},
              {"rallies_observed", m.rallies_observed()},
              {"soft_rules", {{"drop_to_smash", m.legality().soft_rules().drop_to_smash}}},
              {"taxonomy", shots},
              {"rows", rows}};
}

ConditionalModel ModelFromJson(const json& j) {
  try {
    if (j.at("format").get<std::string>() != kModelFormat) {
      throw ParseError("unsupported model format '" + j.at("format").get<std::string>() + "'");
    }
    auto taxonomy = TaxonomyFromJson(j.at("taxonomy"));
    SoftRules soft;
    soft.drop_to_smash = j.at("soft_rules").at("drop_to_smash").get<bool>();
    std::vector<ModelEntry> entries;
    for (const auto& row : j.at("rows")) {
      ModelEntry e;
      if (!row.at("stimulus").is_null()) {
        e.stimulus = taxonomy->Parse(row.at("stimulus").get<std::string>());
      }
      e.response = taxonomy->Parse(row.at("response").get<std::string>());
      e.stats.n_played = row.at("n_played").get<std::size_t>();
      e.stats.hp = row.at("hp").get<std::size_t>();
      e.stats.mp = row.at("mp").get<std::size_t>();
      e.stats.mn = row.at("mn").get<std::size_t>();
      e.stats.ln = row.at("ln").get<std::size_t>();
      for (const auto& inst : row.at("instances")) {
        e.stats.instances.push_back(ParseInstance(inst.get<std::string>()));
      }
      entries.push_back(std::move(e));
    }
    return ConditionalModel::FromEntries(LegalityMatrix(taxonomy, soft),
                                         j.at("responder").get<std::string>(),
                                         j.at("stimulator").get<std::string>(),
                                         j.at("alpha").get<double>(),
                                         j.at("rallies_observed").get<std::size_t>(), entries);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed model JSON: ") + e.what());
  }
}

void SaveModel(const ConditionalModel& m, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << ModelToJson(m).dump(2) << "\n";
  if (!out) throw Error("failed writing '" + path.string() + "'");
}

ConditionalModel LoadModel(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  return ModelFromJson(j);
}

}  // namespace rallycoach
