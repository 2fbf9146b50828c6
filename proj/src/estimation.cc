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

#include "rallycoach/estimation.h"

#include <cmath>

namespace rallycoach {

std::string_view RewardTierName(RewardTier tier) {
  switch (tier) {
    case RewardTier::kHp:
      return "hp";
    case RewardTier::kMp:
      return "mp";
    case RewardTier::kMn:
      return "mn";
    case RewardTier::kLn:
      return "ln";
    case RewardTier::kNeutral:
      return "neutral";
  }
  return "?";
}

double RewardConfig::Value(RewardTier tier) const {
  switch (tier) {
    case RewardTier::kHp:
      return hp;
    case RewardTier::kMp:
      return mp;
    case RewardTier::kMn:
      return mn;
    case RewardTier::kLn:
      return ln;
    case RewardTier::kNeutral:
      return neutral;
  }
  return neutral;
}

void RewardConfig::Validate() const {
  for (double v : {hp, mp, mn, ln, neutral}) {
    if (!std::isfinite(v)) throw ConfigError("reward values must be finite");
  }
  if (!(hp > mp && mp > neutral && neutral > mn && mn >= ln)) {
    throw ConfigError("rewards must satisfy hp > mp > neutral > mn >= ln");
  }
}

RewardTier TierAt(std::span<const ShotEvent> shots, std::size_t index,
                  const RallyOutcome& outcome, std::string_view focal) {
  const std::size_t last = shots.size() - 1;
  const bool focal_won = outcome.winner == focal;
  const bool winner_shot = outcome.termination == Termination::kWinnerShot;
  if (index == last) {
    if (focal_won && winner_shot) return RewardTier::kHp;
    if (!focal_won) return RewardTier::kLn;
    return RewardTier::kNeutral;
  }
  if (index + 2 == last && focal_won && winner_shot) return RewardTier::kMp;
  if (index + 1 == last && !focal_won && winner_shot) return RewardTier::kMn;
  return RewardTier::kNeutral;
}

std::vector<RewardLabel> LabelRewards(const Rally& rally, std::string_view focal,
                                      const RewardConfig& cfg) {
  std::vector<RewardLabel> labels;
  for (const ShotEvent& e : rally.shots) {
    if (e.actor != focal) continue;
    const RewardTier tier = TierAt(rally.shots, e.index, rally.outcome, focal);
    labels.push_back({e.index, tier, cfg.Value(tier)});
  }
  return labels;
}

double PairStats::reward_sum(const RewardConfig& cfg) const {
  return static_cast<double>(hp) * cfg.hp + static_cast<double>(mp) * cfg.mp +
         static_cast<double>(mn) * cfg.mn + static_cast<double>(ln) * cfg.ln +
         static_cast<double>(n_neutral()) * cfg.neutral;
}

void PairStats::AddTier(RewardTier tier) {
  switch (tier) {
    case RewardTier::kHp:
      ++hp;
      break;
    case RewardTier::kMp:
      ++mp;
      break;
    case RewardTier::kMn:
      ++mn;
      break;
    case RewardTier::kLn:
      ++ln;
      break;
    case RewardTier::kNeutral:
      break;
  }
}

ConditionalModel::ConditionalModel(LegalityMatrix legality, std::string responder,
                                   std::string stimulator, double alpha)
    : legality_(std::move(legality)),
      responder_(std::move(responder)),
      stimulator_(std::move(stimulator)),
      alpha_(alpha) {
  if (!(alpha_ >= 0.0) || !std::isfinite(alpha_)) {
    throw ConfigError("smoothing alpha must be a finite value >= 0");
  }
  if (responder_ == stimulator_) throw ConfigError("responder and stimulator must differ");
  const std::size_t n = legality_.taxonomy().size();
  pairs_.resize(n * n);
  serves_.resize(n);
  stimulus_totals_.assign(n, 0);
}

std::size_t ConditionalModel::Slot(ShotId response, ShotId stimulus) const {
  return stimulus.index * taxonomy().size() + response.index;
}

const PairStats& ConditionalModel::Stats(ShotId response, ShotId stimulus) const {
  return pairs_.at(Slot(response, stimulus));
}

const PairStats& ConditionalModel::ServeStats(ShotId serve) const { return serves_.at(serve.index); }

std::size_t ConditionalModel::StimulusTotal(ShotId stimulus) const {
  return stimulus_totals_.at(stimulus.index);
}

std::size_t ConditionalModel::ServeTotal() const {
  std::size_t total = 0;
  for (const auto& s : serves_) total += s.n_played;
  return total;
}

std::vector<ShotId> ConditionalModel::ObservedStimuli() const {
  std::vector<ShotId> out;
  for (ShotId s : taxonomy().All()) {
    if (StimulusTotal(s) > 0) out.push_back(s);
  }
  return out;
}

std::vector<ModelEntry> ConditionalModel::Entries() const {
  std::vector<ModelEntry> out;
  for (ShotId s : taxonomy().Serves()) {
    if (serves_[s.index].n_played > 0) out.push_back({std::nullopt, s, serves_[s.index]});
  }
  for (ShotId stimulus : taxonomy().All()) {
    for (ShotId response : taxonomy().All()) {
      const PairStats& st = Stats(response, stimulus);
      if (st.n_played > 0) out.push_back({stimulus, response, st});
    }
  }
  return out;
}

ConditionalModel ConditionalModel::FromEntries(LegalityMatrix legality, std::string responder,
                                               std::string stimulator, double alpha,
                                               std::size_t rallies_observed,
                                               std::span<const ModelEntry> entries) {
  ConditionalModel m(std::move(legality), std::move(responder), std::move(stimulator), alpha);
  m.rallies_observed_ = rallies_observed;
  const Taxonomy& taxonomy = m.taxonomy();
  for (const ModelEntry& e : entries) {
    const PairStats& st = e.stats;
    if (st.hp + st.mp + st.mn + st.ln > st.n_played) {
      throw ValidationError("tier counts exceed n_played for '" + taxonomy.Name(e.response) + "'");
    }
    if (!st.instances.empty() && st.instances.size() != st.n_played) {
      throw ValidationError("instance list does not match n_played");
    }
    PairStats* slot;
    if (!e.stimulus) {
      if (!taxonomy.IsServe(e.response)) {
        throw ValidationError("serve entry for non-serve '" + taxonomy.Name(e.response) + "'");
      }
      slot = &m.serves_[e.response.index];
    } else {
      if (!m.legality().IsHardLegal(e.response, *e.stimulus)) {
        throw ValidationError("entry for illegal response '" + taxonomy.Name(e.response) +
                              "' to '" + taxonomy.Name(*e.stimulus) + "'");
      }
      slot = &m.pairs_[m.Slot(e.response, *e.stimulus)];
      m.stimulus_totals_[e.stimulus->index] += st.n_played;
    }
    if (slot->n_played != 0) throw ValidationError("duplicate model entry");
    *slot = st;
  }
  return m;
}

ConditionalModel ConditionalModel::WithAlpha(double alpha) const {
  ConditionalModel out = *this;
  if (!(alpha >= 0.0) || !std::isfinite(alpha)) {
    throw ConfigError("smoothing alpha must be a finite value >= 0");
  }
  out.alpha_ = alpha;
  return out;
}

ConditionalModel ConditionalModel::WithLegality(LegalityMatrix legality) const {
  if (!(legality.taxonomy() == taxonomy())) {
    throw ConfigError("legality matrix uses a different taxonomy");
  }
  ConditionalModel out = *this;
  out.legality_ = std::move(legality);
  return out;
}

bool ConditionalModel::operator==(const ConditionalModel& other) const {
  return taxonomy() == other.taxonomy() && responder_ == other.responder_ &&
         stimulator_ == other.stimulator_ && alpha_ == other.alpha_ &&
         rallies_observed_ == other.rallies_observed_ && pairs_ == other.pairs_ &&
         serves_ == other.serves_ && stimulus_totals_ == other.stimulus_totals_;
}

// Mutation access shared by the batch and live paths.
class ModelCounter {
 public:
  explicit ModelCounter(ConditionalModel& m) : m_(m) {}

  PairStats& Played(std::span<const ShotEvent> shots, std::size_t i, const InstanceRef& ref) {
    PairStats* stats;
    if (i == 0) {
      stats = &m_.serves_[shots[0].shot.index];
    } else {
      stats = &m_.pairs_[m_.Slot(shots[i].shot, shots[i - 1].shot)];
      ++m_.stimulus_totals_[shots[i - 1].shot.index];
    }
    ++stats->n_played;
    stats->instances.push_back(ref);
    return *stats;
  }

  PairStats& At(std::span<const ShotEvent> shots, std::size_t i) {
    if (i == 0) return m_.serves_[shots[0].shot.index];
    return m_.pairs_[m_.Slot(shots[i].shot, shots[i - 1].shot)];
  }

  void RallyDone() { ++m_.rallies_observed_; }

 private:
  ConditionalModel& m_;
};

ConditionalModel BuildModel(const Dataset& d, std::string_view responder,
                            std::string_view stimulator, double alpha) {
  for (std::string_view id : {responder, stimulator}) {
    if (d.FindPlayer(id) == nullptr) {
      throw UnknownPlayerError("unknown player '" + std::string(id) + "'");
    }
  }
  ConditionalModel m(d.legality(), std::string(responder), std::string(stimulator), alpha);
  ModelCounter counter(m);
  const RewardConfig unused;
  for (const Match& match : d.matches()) {
    const bool involved = (match.players[0] == responder && match.players[1] == stimulator) ||
                          (match.players[1] == responder && match.players[0] == stimulator);
    if (!involved) continue;
    for (const Rally& rally : match.rallies) {
      for (const RewardLabel& label : LabelRewards(rally, responder, unused)) {
        counter.Played(rally.shots, label.index, {match.match_id, rally.rally_id, label.index})
            .AddTier(label.tier);
      }
      counter.RallyDone();
    }
  }
  return m;
}

double Prob(const ConditionalModel& m, ShotId response, ShotId stimulus) {
  if (!m.legality().IsHardLegal(response, stimulus)) return 0.0;
  const double n = static_cast<double>(m.Stats(response, stimulus).n_played);
  const double legal = static_cast<double>(m.legality().HardLegalResponses(stimulus).size());
  const double denom = static_cast<double>(m.StimulusTotal(stimulus)) + m.alpha() * legal;
  if (denom <= 0.0) return 0.0;
  return (n + m.alpha()) / denom;
}

double SuccessRate(const ConditionalModel& m, ShotId response, ShotId stimulus) {
  const PairStats& s = m.Stats(response, stimulus);
  if (s.n_played == 0) return 0.0;
  return static_cast<double>(s.n_point_won()) / static_cast<double>(s.n_played);
}

double TotalReward(const ConditionalModel& m, ShotId response, ShotId stimulus,
                   const RewardConfig& cfg) {
  const PairStats& s = m.Stats(response, stimulus);
  if (s.n_played == 0) return 0.0;
  return s.reward_sum(cfg) / static_cast<double>(s.n_played);
}

double ServeProb(const ConditionalModel& m, ShotId serve) {
  if (!m.taxonomy().IsServe(serve)) return 0.0;
  const double total = static_cast<double>(m.ServeTotal());
  const double serves = static_cast<double>(m.taxonomy().Serves().size());
  const double denom = total + m.alpha() * serves;
  if (denom <= 0.0) return 0.0;
  return (static_cast<double>(m.ServeStats(serve).n_played) + m.alpha()) / denom;
}

double ServeSuccessRate(const ConditionalModel& m, ShotId serve) {
  const PairStats& s = m.ServeStats(serve);
  if (s.n_played == 0) return 0.0;
  return static_cast<double>(s.n_point_won()) / static_cast<double>(s.n_played);
}

double ServeTotalReward(const ConditionalModel& m, ShotId serve, const RewardConfig& cfg) {
  const PairStats& s = m.ServeStats(serve);
  if (s.n_played == 0) return 0.0;
  return s.reward_sum(cfg) / static_cast<double>(s.n_played);
}

ConditionalModel UpdateLive(const ConditionalModel& m, const LiveObservation& obs) {
  const std::array<std::string, 2> players = {m.responder(), m.stimulator()};
  if (obs.already_counted > obs.shots.size()) {
    throw ValidationError("already_counted exceeds the observed shots");
  }
  if (obs.outcome) {
    ValidateRally({obs.rally_id, obs.shots.empty() ? "" : obs.shots.front().actor, obs.shots,
                   *obs.outcome},
                  players, m.legality());
  } else {
    ValidateShotPrefix(obs.shots, players, m.legality());
  }

  ConditionalModel out = m;
  ModelCounter counter(out);
  for (std::size_t i = obs.already_counted; i < obs.shots.size(); ++i) {
    if (obs.shots[i].actor != m.responder()) continue;
    counter.Played(obs.shots, i, {obs.match_id, obs.rally_id, i});
  }
  if (obs.outcome) {
    // Only the last three shots can carry a non-neutral tier.
    const std::size_t n = obs.shots.size();
    for (std::size_t i = n >= 3 ? n - 3 : 0; i < n; ++i) {
      if (obs.shots[i].actor != m.responder()) continue;
      counter.At(obs.shots, i).AddTier(TierAt(obs.shots, i, *obs.outcome, m.responder()));
    }
    counter.RallyDone();
  }
  return out;
}

}  // namespace rallycoach
