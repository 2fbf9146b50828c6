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


#include "rallycoach/coach/session.h"

#include <algorithm>

#include "rallycoach/json_io.h"

namespace rallycoach::coach {
namespace {

using nlohmann::json;

std::string_view KindName(SessionEvent::Kind kind) {
  switch (kind) {
    case SessionEvent::Kind::kCreated:
      return "created";
    case SessionEvent::Kind::kShot:
      return "shot";
    case SessionEvent::Kind::kRallyEnd:
      return "rally_end";
    case SessionEvent::Kind::kUndo:
      return "undo";
  }
  return "?";
}

NodeValue Credit(NodeValue v, bool focal, double amount) {
  (focal ? v.u_p : v.u_o) += amount;
  return v;
}

}  // namespace

json SessionEvent::ToJson() const {
  json j = {{"event", std::string(KindName(kind))}};
  switch (kind) {
    case Kind::kCreated:
      j["session_id"] = session_id;
      j["dataset"] = dataset;
      j["focal"] = focal;
      j["opponent"] = opponent;
      j["date"] = date;
      j["config"] = config;
      break;
    case Kind::kShot:
      j["actor"] = actor;
      j["shot"] = shot;
      break;
    case Kind::kRallyEnd:
      j["winner"] = winner;
      j["termination"] = termination;
      break;
    case Kind::kUndo:
      break;
  }
  return j;
}

SessionEvent SessionEvent::FromJson(const json& j) {
  SessionEvent e;
  try {
    const std::string kind = j.at("event").get<std::string>();
    if (kind == "created") {
      e.kind = Kind::kCreated;
      e.session_id = j.at("session_id").get<std::string>();
      e.dataset = j.at("dataset").get<std::string>();
      e.focal = j.at("focal").get<std::string>();
      e.opponent = j.at("opponent").get<std::string>();
      e.date = j.at("date").get<std::string>();
      e.config = j.at("config");
    } else if (kind == "shot") {
      e.kind = Kind::kShot;
      e.actor = j.at("actor").get<std::string>();
      e.shot = j.at("shot").get<std::string>();
    } else if (kind == "rally_end") {
      e.kind = Kind::kRallyEnd;
      e.winner = j.at("winner").get<std::string>();
      e.termination = j.at("termination").get<std::string>();
    } else if (kind == "undo") {
      e.kind = Kind::kUndo;
    } else {
      throw ParseError("unknown session event '" + kind + "'");
    }
  } catch (const json::exception& ex) {
    throw ParseError(std::string("malformed session event: ") + ex.what());
  }
  return e;
}

Session Session::Create(std::string session_id, std::string dataset_ref,
                        std::shared_ptr<const Dataset> base, std::string focal,
                        std::string opponent, EngineConfig config, std::string date) {
  if (!base) throw Error("session needs a dataset");
  if (focal == opponent) throw ValidationError("focal and opponent must differ");
  for (const auto& p : {focal, opponent}) {
    if (base->FindPlayer(p) == nullptr) {
      throw UnknownPlayerError("unknown player '" + p + "'");
    }
  }
  config.Finalize();
  Session s;
  s.id_ = std::move(session_id);
  s.dataset_ref_ = std::move(dataset_ref);
  s.base_ = std::move(base);
  s.focal_ = std::move(focal);
  s.opponent_ = std::move(opponent);
  s.config_ = config;
  s.date_ = std::move(date);
  s.live_match_id_ = "live-" + s.id_;
  // Validates the session id and date as a match id and date.
  (void)s.base_->WithMatch(Match{s.live_match_id_, {s.focal_, s.opponent_}, s.date_, {}});
  s.focal_model_ = BuildModel(*s.base_, s.focal_, s.opponent_, config.alpha);
  s.opponent_model_ = BuildModel(*s.base_, s.opponent_, s.focal_, config.alpha);
  s.score_ = {{s.focal_, 0}, {s.opponent_, 0}};
  return s;
}

std::size_t Session::Score(const std::string& player) const {
  auto it = score_.find(player);
  return it == score_.end() ? 0 : it->second;
}

const std::string& Session::NextActor() const {
  if (!buffer_.empty()) return buffer_.back().actor == focal_ ? opponent_ : focal_;
  if (!live_rallies_.empty()) {
    return live_rallies_.back().outcome.winner == focal_ ? focal_ : opponent_;
  }
  return focal_;
}

std::string Session::NextRallyId() const { return "L" + std::to_string(live_rallies_.size() + 1); }

Session Session::RecordShot(const std::string& actor, ShotId shot) const {
  if (actor != focal_ && actor != opponent_) {
    throw ValidationError("unknown actor '" + actor + "'");
  }
  Session s = *this;
  s.buffer_.push_back({actor, shot, buffer_.size()});
  ValidateShotPrefix(s.buffer_, {focal_, opponent_}, focal_model_.legality());
  SessionEvent e;
  e.kind = SessionEvent::Kind::kShot;
  e.actor = actor;
  e.shot = focal_model_.taxonomy().Name(shot);
  s.history_.push_back(std::move(e));
  return s;
}

Session Session::EndRally(const std::string& winner, Termination termination) const {
  if (buffer_.empty()) throw ValidationError("no rally in progress");
  Rally rally{NextRallyId(), buffer_.front().actor, buffer_, {winner, termination}};
  ValidateRally(rally, {focal_, opponent_}, focal_model_.legality());
  Session s = *this;
  // Models only take whole rallies so they always match a batch rebuild.
  const LiveObservation obs{live_match_id_, rally.rally_id, buffer_, 0, rally.outcome};
  s.focal_model_ = UpdateLive(focal_model_, obs);
  s.opponent_model_ = UpdateLive(opponent_model_, obs);
  s.live_rallies_.push_back(std::move(rally));
  s.buffer_.clear();
  ++s.score_[winner];
  SessionEvent e;
  e.kind = SessionEvent::Kind::kRallyEnd;
  e.winner = winner;
  e.termination = std::string(TerminationName(termination));
  s.history_.push_back(std::move(e));
  return s;
}

Session Session::Replay(const std::vector<SessionEvent>& effective) const {
  Session s = Create(id_, dataset_ref_, base_, focal_, opponent_, config_, date_);
  for (const auto& e : effective) s = s.Apply(e);
  return s;
}

Session Session::Undo() const {
  if (history_.empty()) throw ValidationError("nothing to undo");
  std::vector<SessionEvent> effective(history_.begin(), history_.end() - 1);
  return Replay(effective);
}

Session Session::Apply(const SessionEvent& event) const {
  switch (event.kind) {
    case SessionEvent::Kind::kShot:
      return RecordShot(event.actor, focal_model_.taxonomy().Parse(event.shot));
    case SessionEvent::Kind::kRallyEnd:
      return EndRally(event.winner, ParseTermination(event.termination));
    case SessionEvent::Kind::kUndo:
      return Undo();
    case SessionEvent::Kind::kCreated:
      break;
  }
  throw ValidationError("a session can only be created once");
}

AdviceResponse Session::Advise() const {
  const LegalityMatrix matrix = focal_model_.legality().WithSoftRules(config_.soft_rules);
  const std::string& next = NextActor();
  const bool focal_next = next == focal_;
  const ConditionalModel& acting = focal_next ? focal_model_ : opponent_model_;
  AdviceResponse advice;
  advice.for_player = next;
  advice.lookahead_depth = config_.sim.depth;

  if (!buffer_.empty()) {
    const ShotId stimulus = buffer_.back().shot;
    advice.stimulus = stimulus;
    advice.recommendation = BestResponse(acting, stimulus, config_.k, matrix);
    advice.stimulus_support = acting.StimulusTotal(stimulus);
    advice.lookahead =
        BackwardInduce(ExpandTree(focal_model_, opponent_model_, stimulus, next, config_.sim));
    return advice;
  }

  // Nothing to answer yet: rank the server's serves and look ahead from the
  // best one.
  advice.recommendation = ServeChoice(acting, config_.k);
  advice.stimulus_support = acting.ServeTotal();
  const ShotId serve = advice.recommendation.ranked.front().shot;
  const double edge = ServeProb(acting, serve) * ServeSuccessRate(acting, serve) *
                      ServeTotalReward(acting, serve, config_.rewards);
  InductionResult rest;
  if (config_.sim.depth >= 2) {
    SimConfig shorter = config_.sim;
    shorter.depth -= 1;
    rest = BackwardInduce(ExpandTree(focal_model_, opponent_model_, serve,
                                     focal_next ? opponent_ : focal_, shorter));
  }
  advice.lookahead.best_shot = serve;
  advice.lookahead.values = Credit(rest.values, focal_next, edge);
  advice.lookahead.line.push_back({next, serve, edge, advice.lookahead.values});
  for (auto& step : rest.line) advice.lookahead.line.push_back(std::move(step));
  return advice;
}

WhatIfResult Session::WhatIf(ShotId shot) const {
  if (NextActor() != focal_) {
    throw ValidationError("it is " + opponent_ + "'s turn; what-if explores focal shots");
  }
  std::vector<ShotEvent> seed = buffer_;
  seed.push_back({focal_, shot, buffer_.size()});
  ValidateShotPrefix(seed, {focal_, opponent_}, focal_model_.legality());

  WhatIfResult result;
  result.shot = shot;
  const double edge =
      buffer_.empty()
          ? ServeProb(focal_model_, shot) * ServeSuccessRate(focal_model_, shot) *
                ServeTotalReward(focal_model_, shot, config_.rewards)
          : EdgeUtility(focal_model_, shot, buffer_.back().shot, config_.rewards);
  NodeValue below;
  if (config_.sim.depth >= 2) {
    SimConfig shorter = config_.sim;
    shorter.depth -= 1;
    below = BackwardInduce(ExpandTree(focal_model_, opponent_model_, shot, opponent_, shorter))
                .values;
  }
  result.value = Credit(below, true, edge);
  result.rollout = Simulate(focal_model_, opponent_model_, seed, config_.sim);
  return result;
}

Dataset Session::LiveDataset() const {
  return base_->WithMatch(Match{live_match_id_, {focal_, opponent_}, date_, live_rallies_});
}

ExportBundle Session::Export() const {
  ExportBundle bundle;
  Dataset live(base_->legality());
  live = live.WithPlayer(*base_->FindPlayer(focal_)).WithPlayer(*base_->FindPlayer(opponent_));
  live = live.WithMatch(Match{live_match_id_, {focal_, opponent_}, date_, live_rallies_});
  bundle.rally_log = WriteDataset(live);

  const LegalityMatrix matrix = focal_model_.legality().WithSoftRules(config_.soft_rules);
  const Taxonomy& taxonomy = focal_model_.taxonomy();
  bundle.focal_table_csv = FormatRecommendationTable(
      RecommendationTable(focal_model_, config_.k, matrix), taxonomy, config_.k, ReportFormat::kCsv);
  bundle.opponent_table_csv =
      FormatRecommendationTable(RecommendationTable(opponent_model_, config_.k, matrix), taxonomy,
                                config_.k, ReportFormat::kCsv);
  bundle.frequencies_csv =
      FormatShotFrequencies(taxonomy, focal_, ShotFrequencies(live, focal_), opponent_,
                            ShotFrequencies(live, opponent_), ReportFormat::kCsv);
  return bundle;
}

SessionEvent Session::CreatedEvent() const {
  SessionEvent e;
  e.kind = SessionEvent::Kind::kCreated;
  e.session_id = id_;
  e.dataset = dataset_ref_;
  e.focal = focal_;
  e.opponent = opponent_;
  e.date = date_;
  e.config = ConfigToJson(config_);
  return e;
}

json Session::StateJson() const {
  const Taxonomy& taxonomy = focal_model_.taxonomy();
  json buffer = json::array();
  for (const auto& e : buffer_) buffer.push_back({{"actor", e.actor}, {"shot", taxonomy.Name(e.shot)}});
  return json{{"schema", kApiSchema},
              {"session_id", id_},
              {"dataset", dataset_ref_},
              {"players", {{"focal", focal_}, {"opponent", opponent_}}},
              {"rally_buffer", buffer},
              {"next_actor", NextActor()},
              {"live_rallies", live_rallies_.size()},
              {"score", {{focal_, Score(focal_)}, {opponent_, Score(opponent_)}}},
              {"config", ConfigToJson(config_)}};
}

json ToJson(const AdviceResponse& advice, const Taxonomy& taxonomy) {
  json lookahead = rallycoach::ToJson(advice.lookahead, taxonomy);
  lookahead["depth"] = advice.lookahead_depth;
  return json{{"schema", kApiSchema},
              {"for_player", advice.for_player},
              {"stimulus", advice.stimulus ? json(taxonomy.Name(*advice.stimulus)) : json(nullptr)},
              {"recommendation", rallycoach::ToJson(advice.recommendation, taxonomy)},
              {"lookahead", lookahead},
              {"confidence", {{"stimulus_support", advice.stimulus_support}}}};
}

json ToJson(const WhatIfResult& whatif, const Taxonomy& taxonomy) {
  return json{{"schema", kApiSchema},
              {"shot", taxonomy.Name(whatif.shot)},
              {"value", rallycoach::ToJson(whatif.value)},
              {"rollout", rallycoach::ToJson(whatif.rollout, taxonomy)}};
}

json ToJson(const ExportBundle& bundle) {
  return json{{"schema", kApiSchema},
              {"rally_log", bundle.rally_log},
              {"focal_table_csv", bundle.focal_table_csv},
              {"opponent_table_csv", bundle.opponent_table_csv},
              {"frequencies_csv", bundle.frequencies_csv}};
}

}  // namespace rallycoach::coach
