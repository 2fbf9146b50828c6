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

// A live coaching session: the shots of the current rally, finished live
// rallies and the running tally, with models kept current as shots arrive.
// Sessions are values; every mutation returns a new Session.

#ifndef RALLYCOACH_COACH_SESSION_H_
#define RALLYCOACH_COACH_SESSION_H_

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "rallycoach/config.h"
#include "rallycoach/estimation.h"
#include "rallycoach/recommender.h"
#include "rallycoach/simulator.h"

namespace rallycoach::coach {

inline constexpr const char* kApiSchema = "rallycoach.api/1";

// One entry of the append-only session log.
struct SessionEvent {
  enum class Kind { kCreated, kShot, kRallyEnd, kUndo };
  Kind kind = Kind::kShot;
  // kCreated
  std::string session_id;
  std::string dataset;
  std::string focal;
  std::string opponent;
  std::string date;
  nlohmann::json config;
  // kShot
  std::string actor;
  std::string shot;
  // kRallyEnd
  std::string winner;
  std::string termination;

  nlohmann::json ToJson() const;
  static SessionEvent FromJson(const nlohmann::json& j);
};

struct AdviceResponse {
  std::string for_player;
  std::optional<ShotId> stimulus;
  Recommendation recommendation;
  InductionResult lookahead;
  std::size_t lookahead_depth = 0;
  std::size_t stimulus_support = 0;  // observed responses to the stimulus
};

struct WhatIfResult {
  ShotId shot;
  NodeValue value;  // induced value of playing `shot` now
  Rollout rollout;
};

struct ExportBundle {
  std::string rally_log;           // live rallies in rally-log format
  std::string focal_table_csv;     // recommendations for the focal player
  std::string opponent_table_csv;  // recommendations for the opponent
  std::string frequencies_csv;     // shots hit in the live rallies
};

class Session {
 public:
  // Builds both oriented models from `base`. Throws UnknownPlayerError.
  static Session Create(std::string session_id, std::string dataset_ref,
                        std::shared_ptr<const Dataset> base, std::string focal,
                        std::string opponent, EngineConfig config, std::string date);

  const std::string& id() const { return id_; }
  const std::string& focal() const { return focal_; }
  const std::string& opponent() const { return opponent_; }
  const EngineConfig& config() const { return config_; }
  const std::vector<ShotEvent>& rally_buffer() const { return buffer_; }
  const std::vector<Rally>& live_rallies() const { return live_rallies_; }
  std::size_t Score(const std::string& player) const;
  const ConditionalModel& focal_model() const { return focal_model_; }
  const ConditionalModel& opponent_model() const { return opponent_model_; }
  const std::string& live_match_id() const { return live_match_id_; }
  const std::vector<SessionEvent>& history() const { return history_; }
  // Who hits next: the server-to-be on an empty buffer.
  const std::string& NextActor() const;

  // Throws ValidationError (alternation, serve rule, hard legality).
  Session RecordShot(const std::string& actor, ShotId shot) const;
  // Throws ValidationError when the buffer is empty or the outcome does
  // not fit the last shot.
  Session EndRally(const std::string& winner, Termination termination) const;
  // Reverts the latest shot or rally end. Throws ValidationError if none.
  Session Undo() const;
  // Applies one logged event.
  Session Apply(const SessionEvent& event) const;

  AdviceResponse Advise() const;
  WhatIfResult WhatIf(ShotId shot) const;
  ExportBundle Export() const;

  // Base dataset plus the finished live rallies.
  Dataset LiveDataset() const;
  const Dataset& base() const { return *base_; }

  SessionEvent CreatedEvent() const;
  nlohmann::json StateJson() const;

 private:
  Session() = default;
  Session Replay(const std::vector<SessionEvent>& effective) const;
  std::string NextRallyId() const;

  std::string id_;
  std::string dataset_ref_;
  std::shared_ptr<const Dataset> base_;
  std::string focal_;
  std::string opponent_;
  EngineConfig config_;
  std::string date_;
  std::string live_match_id_;
  std::vector<ShotEvent> buffer_;
  std::vector<Rally> live_rallies_;
  std::map<std::string, std::size_t> score_;
  std::vector<SessionEvent> history_;  // effective shot / rally-end events
  ConditionalModel focal_model_{LegalityMatrix(Taxonomy::Default()), "a", "b"};
  ConditionalModel opponent_model_{LegalityMatrix(Taxonomy::Default()), "b", "a"};
};

nlohmann::json ToJson(const AdviceResponse& advice, const Taxonomy& taxonomy);
nlohmann::json ToJson(const WhatIfResult& whatif, const Taxonomy& taxonomy);
nlohmann::json ToJson(const ExportBundle& bundle);

}  // namespace rallycoach::coach

#endif  // RALLYCOACH_COACH_SESSION_H_
