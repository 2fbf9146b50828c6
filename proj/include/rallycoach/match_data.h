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

// Shot-by-shot match logs: data model, validation and the rally-log text
// format (see docs/rally_log_format.md).

#ifndef RALLYCOACH_MATCH_DATA_H_
#define RALLYCOACH_MATCH_DATA_H_

#include <array>
#include <cstddef>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rallycoach/shots.h"

namespace rallycoach {

struct Player {
  std::string id;
  std::string display_name;

  bool operator==(const Player&) const = default;
};

enum class Termination { kWinnerShot, kForcedError, kUnforcedError };

std::string_view TerminationName(Termination t);
Termination ParseTermination(std::string_view name);

struct ShotEvent {
  std::string actor;
  ShotId shot;
  std::size_t index = 0;

  bool operator==(const ShotEvent&) const = default;
};

struct RallyOutcome {
  std::string winner;
  Termination termination = Termination::kWinnerShot;

  bool operator==(const RallyOutcome&) const = default;
};

struct Rally {
  std::string rally_id;
  std::string server;
  std::vector<ShotEvent> shots;
  RallyOutcome outcome;

  bool operator==(const Rally&) const = default;
};

struct Match {
  std::string match_id;
  std::array<std::string, 2> players;
  std::string date;  // YYYY-MM-DD
  std::vector<Rally> rallies;

  bool operator==(const Match&) const = default;
};

// A non-fatal finding, e.g. a soft-rule violation in historical data.
struct Diagnostic {
  std::string source;
  std::size_t line = 0;
  std::string message;
};

// Validated collection of matches. Immutable once built: the With* members
// return modified copies.
class Dataset {
 public:
  explicit Dataset(LegalityMatrix legality);

  const LegalityMatrix& legality() const { return legality_; }
  const Taxonomy& taxonomy() const { return legality_.taxonomy(); }
  const std::vector<Player>& players() const { return players_; }
  const std::vector<Match>& matches() const { return matches_; }

  const Player* FindPlayer(std::string_view id) const;
  const Match* FindMatch(std::string_view id) const;
  std::size_t RallyCount() const;
  std::size_t ShotCount() const;

  // Adding an existing player id with the same display name is a no-op.
  Dataset WithPlayer(Player player) const;
  // The match's rallies are validated; rally ids must be unique in it.
  Dataset WithMatch(Match match) const;
  Dataset WithRally(std::string_view match_id, Rally rally) const;

  bool operator==(const Dataset& other) const {
    return players_ == other.players_ && matches_ == other.matches_ &&
           legality_.taxonomy() == other.legality_.taxonomy();
  }

 private:
  LegalityMatrix legality_;
  std::vector<Player> players_;
  std::vector<Match> matches_;
};

// Checks a (possibly unfinished) shot sequence: serve first and only first,
// strictly alternating actors drawn from `players`, 0-based indices, every
// response hard-legal. Throws ValidationError naming the first violation.
void ValidateShotPrefix(std::span<const ShotEvent> shots,
                        const std::array<std::string, 2>& players,
                        const LegalityMatrix& legality);

// Full rally check: prefix rules plus server and outcome consistency.
void ValidateRally(const Rally& rally, const std::array<std::string, 2>& players,
                   const LegalityMatrix& legality);

// Soft-rule violations, one message per offending shot.
std::vector<std::string> SoftRuleWarnings(const Rally& rally, const LegalityMatrix& legality);

struct LoadOptions {
  std::shared_ptr<const Taxonomy> taxonomy = Taxonomy::Default();
  SoftRules soft_rules;
};

// Parses rally-log text. `source` names the input in diagnostics.
Dataset ParseDataset(std::string_view text, std::string_view source = "<text>",
                     const LoadOptions& options = {},
                     std::vector<Diagnostic>* warnings = nullptr);

Dataset LoadDataset(const std::filesystem::path& path, const LoadOptions& options = {},
                    std::vector<Diagnostic>* warnings = nullptr);

// Loads and merges several files. Player ids must agree across files and
// match ids must be unique.
Dataset LoadDatasets(std::span<const std::filesystem::path> paths,
                     const LoadOptions& options = {},
                     std::vector<Diagnostic>* warnings = nullptr);

// Merges `extra` into `base` (players by id, matches appended).
Dataset MergeDatasets(const Dataset& base, const Dataset& extra);

// Canonical rally-log text; ParseDataset(WriteDataset(d)) == d.
std::string WriteDataset(const Dataset& d);
std::string FormatRallyLine(const Rally& rally, const Taxonomy& taxonomy);

// Appends a validated rally. With no match id the last match is used.
Dataset AppendRally(const Dataset& d, const Rally& rally,
                    std::optional<std::string_view> match_id = std::nullopt);

// Per-shot counts (indexed by ShotId) of the shots `player` hit.
std::vector<std::size_t> ShotFrequencies(const Dataset& d, std::string_view player);

// Copy with every match repeated `times` times; copies get "#k" id suffixes.
Dataset Replicate(const Dataset& d, std::size_t times);

}  // namespace rallycoach

#endif  // RALLYCOACH_MATCH_DATA_H_
