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

#include "rallycoach/match_data.h"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_set>

namespace rallycoach {
namespace {

constexpr std::string_view kFormatHeader = "format rallylog 1";

std::vector<std::string> SplitWhitespace(std::string_view line) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.emplace_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

std::vector<std::string> Split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? pos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

bool IsToken(std::string_view s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '_' || c == '-' || c == '.' || c == '#';
  });
}

bool IsValidDate(std::string_view s) {
  if (s.size() != 10 || s[4] != '-' || s[7] != '-') return false;
  int y = 0;
  unsigned m = 0, d = 0;
  auto parse = [](std::string_view part, auto& out) {
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
    return ec == std::errc() && ptr == part.data() + part.size();
  };
  if (!parse(s.substr(0, 4), y) || !parse(s.substr(5, 2), m) || !parse(s.substr(8, 2), d)) {
    return false;
  }
  return std::chrono::year_month_day{std::chrono::year{y}, std::chrono::month{m},
                                     std::chrono::day{d}}
      .ok();
}

void CheckPlayer(const Dataset& d, std::string_view id) {
  if (d.FindPlayer(id) == nullptr) {
    throw UnknownPlayerError("unknown player '" + std::string(id) + "'");
  }
}

}  // namespace

std::string_view TerminationName(Termination t) {
  switch (t) {
    case Termination::kWinnerShot:
      return "winner_shot";
    case Termination::kForcedError:
      return "forced_error";
    case Termination::kUnforcedError:
      return "unforced_error";
  }
  return "?";
}

Termination ParseTermination(std::string_view name) {
  if (name == "winner_shot") return Termination::kWinnerShot;
  if (name == "forced_error") return Termination::kForcedError;
  if (name == "unforced_error") return Termination::kUnforcedError;
  throw ParseError("unknown termination '" + std::string(name) +
                   "' (expected winner_shot, forced_error or unforced_error)");
}

void ValidateShotPrefix(std::span<const ShotEvent> shots,
                        const std::array<std::string, 2>& players,
                        const LegalityMatrix& legality) {
  const Taxonomy& taxonomy = legality.taxonomy();
  for (std::size_t i = 0; i < shots.size(); ++i) {
    const ShotEvent& e = shots[i];
    if (e.index != i) {
      throw ValidationError("shot index mismatch at index " + std::to_string(i));
    }
    if (e.shot.index >= taxonomy.size()) {
      throw ValidationError("unknown shot at index " + std::to_string(i));
    }
    if (e.actor != players[0] && e.actor != players[1]) {
      throw ValidationError("actor '" + e.actor + "' at index " + std::to_string(i) +
                            " is not a player of this match");
    }
    if (i == 0) {
      if (!taxonomy.IsServe(e.shot)) {
        throw ValidationError("rally must open with a serve, got '" + taxonomy.Name(e.shot) +
                              "'");
      }
      continue;
    }
    if (e.actor == shots[i - 1].actor) {
      throw ValidationError("alternation violated at index " + std::to_string(i));
    }
    if (taxonomy.IsServe(e.shot)) {
      throw ValidationError("serve mid-rally at index " + std::to_string(i));
    }
    if (!legality.IsHardLegal(e.shot, shots[i - 1].shot)) {
      throw ValidationError("illegal response at index " + std::to_string(i) + ": '" +
                            taxonomy.Name(e.shot) + "' cannot answer '" +
                            taxonomy.Name(shots[i - 1].shot) + "'");
    }
  }
}

void ValidateRally(const Rally& rally, const std::array<std::string, 2>& players,
                   const LegalityMatrix& legality) {
  const std::string where = "rally '" + rally.rally_id + "': ";
  try {
    if (rally.shots.empty()) throw ValidationError("rally has no shots");
    ValidateShotPrefix(rally.shots, players, legality);
    if (rally.server != rally.shots.front().actor) {
      throw ValidationError("server '" + rally.server + "' did not hit the first shot");
    }
    const RallyOutcome& out = rally.outcome;
    if (out.winner != players[0] && out.winner != players[1]) {
      throw ValidationError("winner '" + out.winner + "' is not a player of this match");
    }
    const std::string& last_actor = rally.shots.back().actor;
    if (out.termination == Termination::kWinnerShot && last_actor != out.winner) {
      throw ValidationError("outcome inconsistent: winner_shot but last shot by '" +
                            last_actor + "'");
    }
    if (out.termination != Termination::kWinnerShot && last_actor == out.winner) {
      throw ValidationError("outcome inconsistent: " +
                            std::string(TerminationName(out.termination)) +
                            " but last shot by the winner");
    }
  } catch (const ValidationError& e) {
    throw ValidationError(where + e.what());
  }
}

std::vector<std::string> SoftRuleWarnings(const Rally& rally, const LegalityMatrix& legality) {
  std::vector<std::string> out;
  const Taxonomy& taxonomy = legality.taxonomy();
  for (std::size_t i = 1; i < rally.shots.size(); ++i) {
    const ShotId r = rally.shots[i].shot;
    const ShotId s = rally.shots[i - 1].shot;
    if (legality.IsHardLegal(r, s) && !legality.IsLegalResponse(r, s)) {
      out.push_back("rally '" + rally.rally_id + "' index " + std::to_string(i) + ": '" +
                    taxonomy.Name(r) + "' answering '" + taxonomy.Name(s) +
                    "' breaks a soft rule");
    }
  }
  return out;
}

Dataset::Dataset(LegalityMatrix legality) : legality_(std::move(legality)) {}

const Player* Dataset::FindPlayer(std::string_view id) const {
  for (const auto& p : players_) {
    if (p.id == id) return &p;
  }
  return nullptr;
}

const Match* Dataset::FindMatch(std::string_view id) const {
  for (const auto& m : matches_) {
    if (m.match_id == id) return &m;
  }
  return nullptr;
}

std::size_t Dataset::RallyCount() const {
  std::size_t n = 0;
  for (const auto& m : matches_) n += m.rallies.size();
  return n;
}

std::size_t Dataset::ShotCount() const {
  std::size_t n = 0;
  for (const auto& m : matches_) {
    for (const auto& r : m.rallies) n += r.shots.size();
  }
  return n;
}

Dataset Dataset::WithPlayer(Player player) const {
  if (!IsToken(player.id)) throw ValidationError("invalid player id '" + player.id + "'");
  if (const Player* existing = FindPlayer(player.id)) {
    if (existing->display_name != player.display_name) {
      throw ValidationError("player '" + player.id + "' declared with two display names");
    }
    return *this;
  }
  Dataset out = *this;
  out.players_.push_back(std::move(player));
  return out;
}

Dataset Dataset::WithMatch(Match match) const {
  if (!IsToken(match.match_id)) {
    throw ValidationError("invalid match id '" + match.match_id + "'");
  }
  if (FindMatch(match.match_id) != nullptr) {
    throw ValidationError("duplicate match id '" + match.match_id + "'");
  }
  if (!IsValidDate(match.date)) {
    throw ValidationError("match '" + match.match_id + "': invalid date '" + match.date + "'");
  }
  if (match.players[0] == match.players[1]) {
    throw ValidationError("match '" + match.match_id + "' needs two distinct players");
  }
  for (const auto& p : match.players) CheckPlayer(*this, p);
  std::unordered_set<std::string> ids;
  for (const auto& r : match.rallies) {
    if (!IsToken(r.rally_id)) throw ValidationError("invalid rally id '" + r.rally_id + "'");
    if (!ids.insert(r.rally_id).second) {
      throw ValidationError("duplicate rally id '" + r.rally_id + "' in match '" +
                            match.match_id + "'");
    }
    ValidateRally(r, match.players, legality_);
  }
  Dataset out = *this;
  out.matches_.push_back(std::move(match));
  return out;
}

Dataset Dataset::WithRally(std::string_view match_id, Rally rally) const {
  auto it = std::find_if(matches_.begin(), matches_.end(),
                         [&](const Match& m) { return m.match_id == match_id; });
  if (it == matches_.end()) {
    throw ValidationError("unknown match '" + std::string(match_id) + "'");
  }
  if (!IsToken(rally.rally_id)) throw ValidationError("invalid rally id '" + rally.rally_id + "'");
  for (const auto& r : it->rallies) {
    if (r.rally_id == rally.rally_id) {
      throw ValidationError("duplicate rally id '" + rally.rally_id + "' in match '" +
                            it->match_id + "'");
    }
  }
  ValidateRally(rally, it->players, legality_);
  Dataset out = *this;
  out.matches_[static_cast<std::size_t>(it - matches_.begin())].rallies.push_back(
      std::move(rally));
  return out;
}

Dataset ParseDataset(std::string_view text, std::string_view source, const LoadOptions& options,
                     std::vector<Diagnostic>* warnings) {
  const LegalityMatrix legality(options.taxonomy, options.soft_rules);
  const Taxonomy& taxonomy = *options.taxonomy;
  Dataset d(legality);
  std::optional<Match> current;
  std::size_t line_no = 0;

  auto flush = [&](std::size_t at_line) {
    if (!current) return;
    try {
      d = d.WithMatch(std::move(*current));
    } catch (const ValidationError& e) {
      throw ParseError(std::string(e.what()), at_line);
    }
    current.reset();
  };

  std::size_t match_line = 0;
  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (auto first = line.find_first_not_of(" \t\r"); first == std::string_view::npos) {
      continue;
    } else if (line[first] == '#') {
      continue;
    }
    const std::vector<std::string> tok = SplitWhitespace(line);
    const std::string& kind = tok[0];
    try {
      if (kind == "format") {
        if (raw.substr(0, kFormatHeader.size()) != kFormatHeader || tok.size() != 3) {
          throw ParseError("unsupported format header (expected '" +
                           std::string(kFormatHeader) + "')");
        }
      } else if (kind == "player") {
        if (tok.size() < 2) throw ParseError("expected 'player <id> [display name]'");
        std::string name;
        for (std::size_t i = 2; i < tok.size(); ++i) name += (i > 2 ? " " : "") + tok[i];
        if (name.empty()) name = tok[1];
        d = d.WithPlayer({tok[1], name});
      } else if (kind == "match") {
        if (tok.size() != 5) throw ParseError("expected 'match <id> <date> <player> <player>'");
        flush(match_line);
        match_line = line_no;
        for (std::size_t i = 3; i < 5; ++i) CheckPlayer(d, tok[i]);
        if (d.FindMatch(tok[1]) != nullptr) {
          throw ValidationError("duplicate match id '" + tok[1] + "'");
        }
        if (!IsValidDate(tok[2])) throw ParseError("invalid date '" + tok[2] + "'");
        current = Match{tok[1], {tok[3], tok[4]}, tok[2], {}};
      } else if (kind == "set") {
        // Set boundaries are accepted for annotation fidelity; models ignore them.
        if (!current) throw ParseError("'set' outside a match");
      } else if (kind == "rally") {
        if (!current) throw ParseError("'rally' before any 'match'");
        if (tok.size() < 2) throw ParseError("expected 'rally <id> key=value...'");
        Rally rally;
        rally.rally_id = tok[1];
        std::map<std::string, std::string> fields;
        for (std::size_t i = 2; i < tok.size(); ++i) {
          auto eq = tok[i].find('=');
          if (eq == std::string::npos) throw ParseError("expected key=value, got '" + tok[i] + "'");
          std::string key = tok[i].substr(0, eq);
          if (!fields.emplace(key, tok[i].substr(eq + 1)).second) {
            throw ParseError("repeated field '" + key + "'");
          }
        }
        for (const char* key : {"server", "winner", "termination", "shots"}) {
          if (!fields.contains(key)) throw ParseError("rally missing field '" + std::string(key) + "'");
        }
        if (fields.size() != 4) throw ParseError("rally has unknown fields");
        rally.server = fields["server"];
        rally.outcome.winner = fields["winner"];
        rally.outcome.termination = ParseTermination(fields["termination"]);
        std::size_t index = 0;
        for (const std::string& item : Split(fields["shots"], ',')) {
          auto colon = item.find(':');
          if (colon == std::string::npos || colon == 0 || colon + 1 == item.size()) {
            throw ParseError("malformed shot token '" + item + "' (expected actor:shot)");
          }
          rally.shots.push_back(
              {item.substr(0, colon), taxonomy.Parse(item.substr(colon + 1)), index++});
        }
        for (const auto& existing : current->rallies) {
          if (existing.rally_id == rally.rally_id) {
            throw ValidationError("duplicate rally id '" + rally.rally_id + "'");
          }
        }
        ValidateRally(rally, current->players, legality);
        if (warnings != nullptr) {
          for (auto& msg : SoftRuleWarnings(rally, legality)) {
            warnings->push_back({std::string(source), line_no, std::move(msg)});
          }
        }
        current->rallies.push_back(std::move(rally));
      } else {
        throw ParseError("unknown record type '" + kind + "'");
      }
    } catch (const ParseError& e) {
      if (e.line() != 0) throw;
      throw ParseError(std::string(source) + ": " + e.what(), line_no);
    } catch (const Error& e) {
      throw ParseError(std::string(source) + ": " + e.what(), line_no);
    }
  }
  flush(match_line);
  return d;
}

Dataset LoadDataset(const std::filesystem::path& path, const LoadOptions& options,
                    std::vector<Diagnostic>* warnings) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return ParseDataset(buf.str(), path.string(), options, warnings);
}

Dataset MergeDatasets(const Dataset& base, const Dataset& extra) {
  Dataset out = base;
  for (const auto& p : extra.players()) out = out.WithPlayer(p);
  for (const auto& m : extra.matches()) out = out.WithMatch(m);
  return out;
}

Dataset LoadDatasets(std::span<const std::filesystem::path> paths, const LoadOptions& options,
                     std::vector<Diagnostic>* warnings) {
  Dataset out(LegalityMatrix(options.taxonomy, options.soft_rules));
  for (const auto& p : paths) {
    Dataset one = LoadDataset(p, options, warnings);
    try {
      out = MergeDatasets(out, one);
    } catch (const ValidationError& e) {
      throw ValidationError(p.string() + ": " + e.what());
    }
  }
  return out;
}

std::string FormatRallyLine(const Rally& rally, const Taxonomy& taxonomy) {
  std::string line = "rally " + rally.rally_id + " server=" + rally.server +
                     " winner=" + rally.outcome.winner +
                     " termination=" + std::string(TerminationName(rally.outcome.termination)) +
                     " shots=";
  for (std::size_t i = 0; i < rally.shots.size(); ++i) {
    if (i > 0) line += ',';
    line += rally.shots[i].actor + ':' + taxonomy.Name(rally.shots[i].shot);
  }
  return line;
}

std::string WriteDataset(const Dataset& d) {
  std::string out = std::string(kFormatHeader) + "\n";
  for (const auto& p : d.players()) {
    out += "player " + p.id + " " + p.display_name + "\n";
  }
  for (const auto& m : d.matches()) {
    out += "match " + m.match_id + " " + m.date + " " + m.players[0] + " " + m.players[1] + "\n";
    for (const auto& r : m.rallies) out += FormatRallyLine(r, d.taxonomy()) + "\n";
  }
  return out;
}

Dataset AppendRally(const Dataset& d, const Rally& rally,
                    std::optional<std::string_view> match_id) {
  if (match_id) return d.WithRally(*match_id, rally);
  if (d.matches().empty()) {
    throw ValidationError("dataset has no match to append to; pass a match id");
  }
  return d.WithRally(d.matches().back().match_id, rally);
}

std::vector<std::size_t> ShotFrequencies(const Dataset& d, std::string_view player) {
  CheckPlayer(d, player);
  std::vector<std::size_t> counts(d.taxonomy().size(), 0);
  for (const auto& m : d.matches()) {
    for (const auto& r : m.rallies) {
      for (const auto& e : r.shots) {
        if (e.actor == player) ++counts[e.shot.index];
      }
    }
  }
  return counts;
}

Dataset Replicate(const Dataset& d, std::size_t times) {
  Dataset out(d.legality());
  for (const auto& p : d.players()) out = out.WithPlayer(p);
  for (std::size_t k = 0; k < times; ++k) {
    for (Match m : d.matches()) {
      if (k > 0) m.match_id += "#" + std::to_string(k + 1);
      out = out.WithMatch(std::move(m));
    }
  }
  return out;
}

}  // namespace rallycoach
