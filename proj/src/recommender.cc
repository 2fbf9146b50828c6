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

#include "rallycoach/recommender.h"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "rallycoach/json_io.h"

namespace rallycoach {
namespace {

void CheckK(std::size_t k) {
  if (k == 0) throw ConfigError("number of suggestions must be >= 1");
}

ModelRef RefOf(const ConditionalModel& m) {
  return {m.responder(), m.stimulator(), m.rallies_observed()};
}

Recommendation Rank(std::vector<UtilityBreakdown> candidates, std::size_t k) {
  std::sort(candidates.begin(), candidates.end(), RanksBefore);
  if (candidates.size() > k) candidates.resize(k);
  Recommendation rec;
  rec.ranked = std::move(candidates);
  return rec;
}

std::string Cell(const Recommendation& rec, std::size_t i, const Taxonomy& taxonomy) {
  return i < rec.ranked.size() ? taxonomy.Name(rec.ranked[i].shot) : std::string();
}

std::string StimulusName(const Recommendation& rec, const Taxonomy& taxonomy) {
  return rec.stimulus ? taxonomy.Name(*rec.stimulus) : std::string("(serve)");
}

}  // namespace

bool RanksBefore(const UtilityBreakdown& a, const UtilityBreakdown& b) {
  if (a.utility != b.utility) return a.utility > b.utility;
  if (a.support != b.support) return a.support > b.support;
  return a.shot < b.shot;
}

Recommendation BestResponse(const ConditionalModel& m, ShotId stimulus, std::size_t k,
                            const LegalityMatrix& matrix) {
  CheckK(k);
  std::vector<UtilityBreakdown> candidates;
  for (ShotId r : matrix.LegalResponses(stimulus)) {
    const double p = Prob(m, r, stimulus);
    const double ps = SuccessRate(m, r, stimulus);
    candidates.push_back({r, p, ps, p * ps, m.Stats(r, stimulus).n_played});
  }
  Recommendation rec = Rank(std::move(candidates), k);
  rec.stimulus = stimulus;
  rec.model_ref = RefOf(m);
  return rec;
}

Recommendation BestResponse(const ConditionalModel& m, ShotId stimulus, std::size_t k) {
  return BestResponse(m, stimulus, k, m.legality());
}

Recommendation ServeChoice(const ConditionalModel& m, std::size_t k) {
  CheckK(k);
  std::vector<UtilityBreakdown> candidates;
  for (ShotId s : m.taxonomy().Serves()) {
    const double p = ServeProb(m, s);
    const double ps = ServeSuccessRate(m, s);
    candidates.push_back({s, p, ps, p * ps, m.ServeStats(s).n_played});
  }
  Recommendation rec = Rank(std::move(candidates), k);
  rec.model_ref = RefOf(m);
  return rec;
}

std::vector<Recommendation> RecommendationTable(const ConditionalModel& m, std::size_t k,
                                                const LegalityMatrix& matrix) {
  CheckK(k);
  std::vector<Recommendation> table;
  for (ShotId s : m.ObservedStimuli()) table.push_back(BestResponse(m, s, k, matrix));
  return table;
}

std::vector<Recommendation> RecommendationTable(const ConditionalModel& m, std::size_t k) {
  return RecommendationTable(m, k, m.legality());
}

Recommendation PredictOpponent(const ConditionalModel& opponent_model, ShotId own_shot,
                               std::size_t k) {
  return BestResponse(opponent_model, own_shot, k);
}

ReportFormat ParseReportFormat(std::string_view name) {
  if (name == "text") return ReportFormat::kText;
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "json") return ReportFormat::kJson;
  throw ConfigError("unknown format '" + std::string(name) + "' (expected text, csv or json)");
}

std::string FormatRecommendationTable(const std::vector<Recommendation>& table,
                                      const Taxonomy& taxonomy, std::size_t k,
                                      ReportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::kCsv: {
      out << "opponent_shot";
      for (std::size_t i = 1; i <= k; ++i) out << ",suggestion_" << i;
      out << "\n";
      for (const auto& rec : table) {
        out << StimulusName(rec, taxonomy);
        for (std::size_t i = 0; i < k; ++i) out << "," << Cell(rec, i, taxonomy);
        out << "\n";
      }
      break;
    }
    case ReportFormat::kText: {
      constexpr int kWidth = 26;
      out << std::left << std::setw(kWidth) << "opponent's shot";
      for (std::size_t i = 1; i <= k; ++i) {
        out << std::setw(kWidth) << ("suggestion " + std::to_string(i));
      }
      out << "\n";
      for (const auto& rec : table) {
        out << std::setw(kWidth) << StimulusName(rec, taxonomy);
        for (std::size_t i = 0; i < k; ++i) {
          std::string cell = Cell(rec, i, taxonomy);
          if (i < rec.ranked.size() && rec.ranked[i].support == 0) cell += " (support=0)";
          out << std::setw(kWidth) << cell;
        }
        out << "\n";
      }
      break;
    }
    case ReportFormat::kJson: {
      nlohmann::json rows = nlohmann::json::array();
      for (const auto& rec : table) rows.push_back(ToJson(rec, taxonomy));
      out << rows.dump(2) << "\n";
      break;
    }
  }
  return out.str();
}

std::string FormatRecommendation(const Recommendation& rec, const Taxonomy& taxonomy,
                                 ReportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::kJson:
      out << ToJson(rec, taxonomy).dump(2) << "\n";
      break;
    case ReportFormat::kCsv:
      out << "rank,shot,utility,p,p_success,support\n";
      for (std::size_t i = 0; i < rec.ranked.size(); ++i) {
        const auto& u = rec.ranked[i];
        out << i + 1 << "," << taxonomy.Name(u.shot) << "," << FormatNumber(u.utility) << ","
            << FormatNumber(u.p) << "," << FormatNumber(u.p_success) << "," << u.support << "\n";
      }
      break;
    case ReportFormat::kText:
      out << "best responses to " << StimulusName(rec, taxonomy) << " (" << rec.model_ref.responder
          << " vs " << rec.model_ref.stimulator << ")\n";
      for (std::size_t i = 0; i < rec.ranked.size(); ++i) {
        const auto& u = rec.ranked[i];
        out << "  " << i + 1 << ". " << std::left << std::setw(26) << taxonomy.Name(u.shot)
            << " utility=" << FormatNumber(u.utility) << " p=" << FormatNumber(u.p)
            << " p_success=" << FormatNumber(u.p_success) << " support=" << u.support << "\n";
      }
      break;
  }
  return out.str();
}

std::string FormatShotFrequencies(const Taxonomy& taxonomy, std::string_view player_a,
                                  const std::vector<std::size_t>& counts_a,
                                  std::string_view player_b,
                                  const std::vector<std::size_t>& counts_b,
                                  ReportFormat format) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::kJson: {
      nlohmann::json j = nlohmann::json::object();
      for (auto [player, counts] : {std::pair{player_a, &counts_a}, std::pair{player_b, &counts_b}}) {
        nlohmann::json row = nlohmann::json::object();
        for (ShotId s : taxonomy.All()) row[taxonomy.Name(s)] = (*counts)[s.index];
        j[std::string(player)] = row;
      }
      out << j.dump(2) << "\n";
      break;
    }
    case ReportFormat::kCsv:
      out << "shot," << player_a << "," << player_b << "\n";
      for (ShotId s : taxonomy.All()) {
        out << taxonomy.Name(s) << "," << counts_a[s.index] << "," << counts_b[s.index] << "\n";
      }
      break;
    case ReportFormat::kText:
      out << std::left << std::setw(26) << "shot" << std::setw(16) << player_a << player_b
          << "\n";
      for (ShotId s : taxonomy.All()) {
        out << std::setw(26) << taxonomy.Name(s) << std::setw(16) << counts_a[s.index]
            << counts_b[s.index] << "\n";
      }
      break;
  }
  return out.str();
}

}  // namespace rallycoach
