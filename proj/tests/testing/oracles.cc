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

#include "testing/oracles.h"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace rallycoach::testing {

std::filesystem::path SourceDir() {
  if (const char* env = std::getenv("RALLYCOACH_SOURCE_DIR")) return env;
  return RALLYCOACH_DEFAULT_SOURCE_DIR;
}

std::string ReadFile(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Dataset LoadFixture() { return LoadDataset(SourceDir() / "data" / "fixture" / "fixture.rally"); }

Rally RandomRally(std::mt19937_64& rng, const LegalityMatrix& legality, const std::string& a,
                  const std::string& b, std::size_t max_length, const std::string& rally_id) {
  const Taxonomy& t = legality.taxonomy();
  std::uniform_int_distribution<std::size_t> len_dist(1, max_length);
  const std::size_t length = len_dist(rng);
  Rally rally;
  rally.rally_id = rally_id;
  rally.server = rng() % 2 == 0 ? a : b;
  const auto serves = t.Serves();
  rally.shots.push_back({rally.server, serves[rng() % serves.size()], 0});
  while (rally.shots.size() < length) {
    const ShotEvent& prev = rally.shots.back();
    const auto options = legality.HardLegalResponses(prev.shot);
    // Favour the first few options so some pairs repeat.
    const std::size_t pick = rng() % 3 == 0 ? rng() % options.size()
                                            : rng() % std::min<std::size_t>(3, options.size());
    rally.shots.push_back({prev.actor == a ? b : a, options[pick], rally.shots.size()});
  }
  const std::string& last = rally.shots.back().actor;
  const std::string& other = last == a ? b : a;
  switch (rng() % 3) {
    case 0:
      rally.outcome = {last, Termination::kWinnerShot};
      break;
    case 1:
      rally.outcome = {other, Termination::kForcedError};
      break;
    default:
      rally.outcome = {other, Termination::kUnforcedError};
      break;
  }
  return rally;
}

Dataset RandomDataset(std::uint64_t seed, std::size_t matches, std::size_t rallies_per_match,
                      std::size_t max_length, const std::string& a, const std::string& b) {
  std::mt19937_64 rng(seed);
  Dataset d(LegalityMatrix(Taxonomy::Default()));
  d = d.WithPlayer({a, a}).WithPlayer({b, b});
  for (std::size_t m = 0; m < matches; ++m) {
    Match match;
    match.match_id = "m" + std::to_string(m + 1);
    match.players = {a, b};
    match.date = "2020-01-0" + std::to_string(1 + m % 9);
    for (std::size_t r = 0; r < rallies_per_match; ++r) {
      match.rallies.push_back(
          RandomRally(rng, d.legality(), a, b, max_length, "r" + std::to_string(r + 1)));
    }
    d = d.WithMatch(std::move(match));
  }
  return d;
}

std::vector<std::pair<std::size_t, RewardTier>> BruteTiers(const Rally& rally,
                                                           const std::string& focal) {
  const std::size_t n = rally.shots.size();
  const bool won = rally.outcome.winner == focal;
  const bool clean_winner = rally.outcome.termination == Termination::kWinnerShot;
  std::vector<std::pair<std::size_t, RewardTier>> out;
  for (std::size_t t = 0; t < n; ++t) {
    if (rally.shots[t].actor != focal) continue;
    const std::size_t from_end = n - 1 - t;
    RewardTier tier = RewardTier::kNeutral;
    if (from_end == 0) {
      // Focal hit the last shot: a clean winner, or the point was lost on it.
      if (won && clean_winner) tier = RewardTier::kHp;
      if (!won) tier = RewardTier::kLn;
    } else if (from_end == 1) {
      // The opponent's very next shot ended it in the opponent's favour.
      if (!won && clean_winner) tier = RewardTier::kMn;
    } else if (from_end == 2) {
      // Focal's next shot was the winner.
      if (won && clean_winner) tier = RewardTier::kMp;
    }
    out.emplace_back(t, tier);
  }
  return out;
}

double BruteTierValue(RewardTier tier) {
  switch (tier) {
    case RewardTier::kHp:
      return 5;
    case RewardTier::kMp:
      return 2;
    case RewardTier::kMn:
      return -2;
    case RewardTier::kLn:
      return -5;
    case RewardTier::kNeutral:
      return 0;
  }
  return 0;
}

OracleChoice BruteArgmax(const ConditionalModel& m, ShotId stimulus,
                         const LegalityMatrix& matrix) {
  const Taxonomy& t = m.taxonomy();
  // Denominator over every response the hard rules allow.
  double total = 0;
  double hard_legal = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const ShotId r{i};
    if (t.IsServe(r)) continue;
    const Category sc = t.CategoryOf(stimulus);
    const Category rc = t.CategoryOf(r);
    if ((sc == Category::kSmash && rc == Category::kSmash) ||
        (sc == Category::kBlock && rc == Category::kBlock)) {
      continue;
    }
    hard_legal += 1;
    total += static_cast<double>(m.Stats(r, stimulus).n_played);
  }
  std::optional<OracleChoice> best;
  for (std::size_t i = 0; i < t.size(); ++i) {
    const ShotId r{i};
    if (!matrix.IsLegalResponse(r, stimulus)) continue;
    const PairStats& s = m.Stats(r, stimulus);
    const double denom = total + m.alpha() * hard_legal;
    const double p = denom > 0 ? (static_cast<double>(s.n_played) + m.alpha()) / denom : 0.0;
    const double ps =
        s.n_played > 0 ? static_cast<double>(s.hp + s.mp) / static_cast<double>(s.n_played) : 0.0;
    const OracleChoice c{r, p * ps, s.n_played};
    if (!best || c.utility > best->utility ||
        (c.utility == best->utility && c.support > best->support)) {
      best = c;
    }
  }
  if (!best) throw std::logic_error("no legal response");
  return *best;
}

namespace {

struct Path {
  std::vector<const GameNode*> nodes;  // root first
  std::vector<std::size_t> choices;    // child index taken below each node
};

void Collect(const GameNode& node, Path& current, std::vector<Path>& out) {
  current.nodes.push_back(&node);
  if (node.children.empty()) {
    out.push_back(current);
  } else {
    for (std::size_t i = 0; i < node.children.size(); ++i) {
      current.choices.push_back(i);
      Collect(node.children[i], current, out);
      current.choices.pop_back();
    }
  }
  current.nodes.pop_back();
}

// Utility from level `from` down to the leaf, summed leaf first.
NodeValue Suffix(const Path& p, std::size_t from, const std::string& focal) {
  NodeValue v;
  for (std::size_t i = p.nodes.size() - 1; i > from; --i) {
    const GameNode& parent = *p.nodes[i - 1];
    (parent.agent == focal ? v.u_p : v.u_o) += p.nodes[i]->edge_utility;
  }
  return v;
}

}  // namespace

PathSolution EnumeratePaths(const GameTree& tree) {
  std::vector<Path> paths;
  Path scratch;
  Collect(tree.root, scratch, paths);
  if (tree.root.children.empty()) return {};

  std::size_t max_len = 0;
  for (const auto& p : paths) max_len = std::max(max_len, p.nodes.size());
  // Resolve choice points from the deepest level up.
  for (std::size_t level = max_len - 1; level-- > 0;) {
    std::vector<Path> kept;
    std::vector<bool> done(paths.size(), false);
    for (std::size_t i = 0; i < paths.size(); ++i) {
      if (done[i]) continue;
      if (paths[i].nodes.size() <= level + 1) {
        kept.push_back(paths[i]);
        done[i] = true;
        continue;
      }
      const GameNode* at = paths[i].nodes[level];
      const bool focal_acts = at->agent == tree.focal;
      std::size_t best = i;
      for (std::size_t j = i; j < paths.size(); ++j) {
        if (done[j] || paths[j].nodes.size() <= level + 1 || paths[j].nodes[level] != at) {
          continue;
        }
        done[j] = true;
        if (j == i) continue;
        const NodeValue vj = Suffix(paths[j], level, tree.focal);
        const NodeValue vb = Suffix(paths[best], level, tree.focal);
        const double cj = focal_acts ? vj.u_p : vj.u_o;
        const double cb = focal_acts ? vb.u_p : vb.u_o;
        const std::size_t sj = paths[j].nodes[level + 1]->edge_support;
        const std::size_t sb = paths[best].nodes[level + 1]->edge_support;
        const std::size_t ij = paths[j].choices[level];
        const std::size_t ib = paths[best].choices[level];
        if (cj > cb || (cj == cb && (sj > sb || (sj == sb && ij < ib)))) best = j;
      }
      kept.push_back(paths[best]);
    }
    paths = std::move(kept);
  }
  if (paths.size() != 1) throw std::logic_error("path pruning left several paths");
  PathSolution s;
  s.best_shot = paths[0].nodes[1]->incoming_shot;
  s.values = Suffix(paths[0], 0, tree.focal);
  return s;
}

void LimitBranching(GameNode& node, std::size_t max) {
  if (node.children.size() > max) {
    std::vector<std::size_t> order(node.children.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return node.children[a].edge_support > node.children[b].edge_support;
    });
    order.resize(max);
    std::sort(order.begin(), order.end());
    std::vector<GameNode> kept;
    for (std::size_t i : order) kept.push_back(std::move(node.children[i]));
    node.children = std::move(kept);
  }
  for (GameNode& c : node.children) LimitBranching(c, max);
}

std::size_t MaxBranching(const GameNode& node) {
  std::size_t b = node.children.size();
  for (const auto& c : node.children) b = std::max(b, MaxBranching(c));
  return b;
}

std::size_t TreeDepth(const GameNode& node) {
  std::size_t d = 0;
  for (const auto& c : node.children) d = std::max(d, 1 + TreeDepth(c));
  return d;
}

}  // namespace rallycoach::testing
