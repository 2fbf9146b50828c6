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

#ifndef RALLYCOACH_RECOMMENDER_H_
#define RALLYCOACH_RECOMMENDER_H_

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rallycoach/estimation.h"

namespace rallycoach {

// Utility of one candidate response: p * p_success.
struct UtilityBreakdown {
  ShotId shot;
  double p = 0.0;
  double p_success = 0.0;
  double utility = 0.0;
  std::size_t support = 0;

  bool operator==(const UtilityBreakdown&) const = default;
};

// Ranking order: utility desc, then support desc, then taxonomy order.
bool RanksBefore(const UtilityBreakdown& a, const UtilityBreakdown& b);

struct ModelRef {
  std::string responder;
  std::string stimulator;
  std::size_t rallies_observed = 0;

  bool operator==(const ModelRef&) const = default;
};

struct Recommendation {
  // Absent for a serve choice (nothing to respond to yet).
  std::optional<ShotId> stimulus;
  std::vector<UtilityBreakdown> ranked;
  ModelRef model_ref;

  bool operator==(const Recommendation&) const = default;
};

inline constexpr std::size_t kDefaultSuggestions = 2;

// Top-k legal responses to `stimulus` under `matrix` (which may enable soft
// rules the model's own legality does not). k must be >= 1; the list is
// clamped to the number of legal responses.
Recommendation BestResponse(const ConditionalModel& m, ShotId stimulus, std::size_t k,
                            const LegalityMatrix& matrix);
Recommendation BestResponse(const ConditionalModel& m, ShotId stimulus,
                            std::size_t k = kDefaultSuggestions);

// Ranked serves for a rally the responder opens.
Recommendation ServeChoice(const ConditionalModel& m, std::size_t k = kDefaultSuggestions);

// One row per stimulus observed at least once, in taxonomy order.
std::vector<Recommendation> RecommendationTable(const ConditionalModel& m, std::size_t k,
                                                const LegalityMatrix& matrix);
std::vector<Recommendation> RecommendationTable(const ConditionalModel& m,
                                                std::size_t k = kDefaultSuggestions);

// Likely returns of the opponent to `own_shot`, read from the model in which
// the opponent is the responder.
Recommendation PredictOpponent(const ConditionalModel& opponent_model, ShotId own_shot,
                               std::size_t k = kDefaultSuggestions);

enum class ReportFormat { kText, kCsv, kJson };
ReportFormat ParseReportFormat(std::string_view name);

// One row per stimulus: the stimulus, then suggestions 1..k.
std::string FormatRecommendationTable(const std::vector<Recommendation>& table,
                                      const Taxonomy& taxonomy, std::size_t k,
                                      ReportFormat format);
std::string FormatRecommendation(const Recommendation& rec, const Taxonomy& taxonomy,
                                 ReportFormat format);

// Per-shot counts for both players of a pair (shot, a, b), all shots listed.
std::string FormatShotFrequencies(const Taxonomy& taxonomy, std::string_view player_a,
                                  const std::vector<std::size_t>& counts_a,
                                  std::string_view player_b,
                                  const std::vector<std::size_t>& counts_b,
                                  ReportFormat format);

}  // namespace rallycoach

#endif  // RALLYCOACH_RECOMMENDER_H_
