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

// Conditional shot statistics estimated from match logs.
//
// A ConditionalModel is oriented: it counts how `responder` answered each
// shot of `stimulator`. Every counted response also carries a reward tier
// derived from how the rally ended within a two-shot window:
//
//   hp  the shot was the rally-winning final shot
//   ln  the shot was the final shot and lost the point
//   mp  the responder's shot two later won the rally
//   mn  the opponent's very next shot won the rally
//
// Terminal tiers take precedence. Everything else is neutral.

#ifndef RALLYCOACH_ESTIMATION_H_
#define RALLYCOACH_ESTIMATION_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rallycoach/match_data.h"
#include "rallycoach/shots.h"

namespace rallycoach {

enum class RewardTier { kHp, kMp, kMn, kLn, kNeutral };

std::string_view RewardTierName(RewardTier tier);

struct RewardConfig {
  double hp = 5.0;
  double mp = 2.0;
  double mn = -2.0;
  double ln = -5.0;
  double neutral = 0.0;

  // All tiers worth 1: edge utilities collapse to P * P_success.
  static RewardConfig Unit() { return {1.0, 1.0, 1.0, 1.0, 1.0}; }

  double Value(RewardTier tier) const;
  // Requires hp > mp > neutral > mn >= ln. Throws ConfigError.
  void Validate() const;

  bool operator==(const RewardConfig&) const = default;
};

struct RewardLabel {
  std::size_t index = 0;  // position of the labelled shot in the rally
  RewardTier tier = RewardTier::kNeutral;
  double value = 0.0;

  bool operator==(const RewardLabel&) const = default;
};

// Tier of the shot at `index` given how the rally ended. The shot must have
// been hit by `focal`.
RewardTier TierAt(std::span<const ShotEvent> shots, std::size_t index,
                  const RallyOutcome& outcome, std::string_view focal);

// One label per shot hit by `focal`, in rally order.
std::vector<RewardLabel> LabelRewards(const Rally& rally, std::string_view focal,
                                      const RewardConfig& cfg);

struct InstanceRef {
  std::string match_id;
  std::string rally_id;
  std::size_t index = 0;

  bool operator==(const InstanceRef&) const = default;
};

struct PairStats {
  std::size_t n_played = 0;
  std::size_t hp = 0;
  std::size_t mp = 0;
  std::size_t mn = 0;
  std::size_t ln = 0;
  std::vector<InstanceRef> instances;

  // A response counts as successful when it won the point directly or set
  // up the winner two shots later.
  std::size_t n_point_won() const { return hp + mp; }
  std::size_t n_neutral() const { return n_played - hp - mp - mn - ln; }
  double reward_sum(const RewardConfig& cfg) const;
  void AddTier(RewardTier tier);

  bool operator==(const PairStats&) const = default;
};

// One observed (response | stimulus) cell; no stimulus means a serve.
struct ModelEntry {
  std::optional<ShotId> stimulus;
  ShotId response;
  PairStats stats;
};

class ConditionalModel {
 public:
  ConditionalModel(LegalityMatrix legality, std::string responder, std::string stimulator,
                   double alpha = 0.0);

  const LegalityMatrix& legality() const { return legality_; }
  const Taxonomy& taxonomy() const { return legality_.taxonomy(); }
  const std::string& responder() const { return responder_; }
  const std::string& stimulator() const { return stimulator_; }
  double alpha() const { return alpha_; }
  // Completed rallies folded into the model.
  std::size_t rallies_observed() const { return rallies_observed_; }

  const PairStats& Stats(ShotId response, ShotId stimulus) const;
  // How often `serve` opened a rally served by the responder.
  const PairStats& ServeStats(ShotId serve) const;
  // Responses observed to `stimulus`, summed over all responses.
  std::size_t StimulusTotal(ShotId stimulus) const;
  std::size_t ServeTotal() const;
  // Stimuli with at least one observed response, in taxonomy order.
  std::vector<ShotId> ObservedStimuli() const;

  // Non-empty cells: serves first, then by stimulus and response.
  std::vector<ModelEntry> Entries() const;
  // Inverse of Entries(). Throws ValidationError on inconsistent counts.
  static ConditionalModel FromEntries(LegalityMatrix legality, std::string responder,
                                      std::string stimulator, double alpha,
                                      std::size_t rallies_observed,
                                      std::span<const ModelEntry> entries);

  // Same counts, different smoothing.
  ConditionalModel WithAlpha(double alpha) const;
  ConditionalModel WithLegality(LegalityMatrix legality) const;

  bool operator==(const ConditionalModel& other) const;

 private:
  friend class ModelCounter;

  std::size_t Slot(ShotId response, ShotId stimulus) const;

  LegalityMatrix legality_;
  std::string responder_;
  std::string stimulator_;
  double alpha_;
  std::size_t rallies_observed_ = 0;
  std::vector<PairStats> pairs_;       // [stimulus * n + response]
  std::vector<PairStats> serves_;      // [serve]
  std::vector<std::size_t> stimulus_totals_;
};

// Counts every adjacent (stimulus, response) pair in `d` where `responder`
// answered `stimulator`.
ConditionalModel BuildModel(const Dataset& d, std::string_view responder,
                            std::string_view stimulator, double alpha = 0.0);

// (n(s_i|s) + alpha) / (sum_r n(r|s) + alpha * |hard-legal responses to s|).
// Zero for serves, hard-illegal responses and zero-support denominators.
double Prob(const ConditionalModel& m, ShotId response, ShotId stimulus);
// n_point_won / n_played; zero without support. Never smoothed.
double SuccessRate(const ConditionalModel& m, ShotId response, ShotId stimulus);
// Mean reward label over the pair's instances; zero without support.
double TotalReward(const ConditionalModel& m, ShotId response, ShotId stimulus,
                   const RewardConfig& cfg);

// Serve choice when the responder opens the rally.
double ServeProb(const ConditionalModel& m, ShotId serve);
double ServeSuccessRate(const ConditionalModel& m, ShotId serve);
double ServeTotalReward(const ConditionalModel& m, ShotId serve, const RewardConfig& cfg);

// A rally observed live, possibly unfinished.
struct LiveObservation {
  std::string match_id;
  std::string rally_id;
  std::vector<ShotEvent> shots;        // the whole rally so far
  std::size_t already_counted = 0;     // leading shots already folded in
  std::optional<RallyOutcome> outcome;  // set once the rally has ended
};

// Folds newly observed shots into a copy of `m`. New responder shots count
// toward n_played straight away as neutral; their tier is added once the
// outcome arrives. Throws ValidationError for an invalid sequence.
ConditionalModel UpdateLive(const ConditionalModel& m, const LiveObservation& obs);

}  // namespace rallycoach

#endif  // RALLYCOACH_ESTIMATION_H_
