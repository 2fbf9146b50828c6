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

#include "rallycoach/simulator.h"

#include <iomanip>
#include <sstream>

#include "rallycoach/json_io.h"
#include "rallycoach/recommender.h"

namespace rallycoach {
namespace {

struct Players {
  const ConditionalModel& focal_model;
  const ConditionalModel& opponent_model;
  LegalityMatrix matrix;

  const ConditionalModel& ModelOf(std::string_view agent) const {
    return agent == focal_model.responder() ? focal_model : opponent_model;
  }
  const std::string& Other(std::string_view agent) const {
    return agent == focal_model.responder() ? opponent_model.responder()
                                            : focal_model.responder();
  }
};

void CheckOrientation(const ConditionalModel& focal_model,
                      const ConditionalModel& opponent_model) {
  if (focal_model.responder() != opponent_model.stimulator() ||
      focal_model.stimulator() != opponent_model.responder()) {
    throw ConfigError("focal and opponent models must be built for the same pair, swapped");
  }
  if (!(focal_model.taxonomy() == opponent_model.taxonomy())) {
    throw ConfigError("focal and opponent models use different taxonomies");
  }
}

void Expand(GameNode& node, const Players& players, const SimConfig& cfg) {
  if (node.depth >= cfg.depth) {
    node.kind = NodeKind::kTerminal;
    return;
  }
  node.kind = NodeKind::kChoice;
  const ConditionalModel& model = players.ModelOf(node.agent);
  const ShotId stimulus = node.incoming_shot;
  std::vector<ShotId> options;
  const std::vector<ShotId> legal = players.matrix.LegalResponses(stimulus);
  for (ShotId r : legal) {
    if (model.Stats(r, stimulus).n_played > 0) options.push_back(r);
  }
  const bool supported = !options.empty();
  if (!supported) options = legal;
  node.children.reserve(options.size());
  for (ShotId r : options) {
    GameNode child;
    child.agent = players.Other(node.agent);
    child.incoming_shot = r;
    child.depth = node.depth + 1;
    child.edge_utility = supported ? EdgeUtility(model, r, stimulus, cfg.rewards) : 0.0;
    child.edge_support = model.Stats(r, stimulus).n_played;
    Expand(child, players, cfg);
    node.children.push_back(std::move(child));
  }
}

double& Component(NodeValue& v, bool focal) { return focal ? v.u_p : v.u_o; }

struct Solved {
  NodeValue value;
  const GameNode* chosen = nullptr;
};

Solved Solve(const GameNode& node, const std::string& focal) {
  if (node.kind == NodeKind::kTerminal || node.children.empty()) return {};
  const bool acting_focal = node.agent == focal;
  Solved best;
  for (const GameNode& child : node.children) {
    NodeValue v = Solve(child, focal).value;
    Component(v, acting_focal) += child.edge_utility;
    if (best.chosen == nullptr) {
      best = {v, &child};
      continue;
    }
    const double cand = Component(v, acting_focal);
    const double incumbent = Component(best.value, acting_focal);
    // Children arrive in taxonomy order, so a strict comparison keeps the
    // earlier shot on full ties.
    if (cand > incumbent ||
        (cand == incumbent && child.edge_support > best.chosen->edge_support)) {
      best = {v, &child};
    }
  }
  return best;
}

std::string ShotCell(const Taxonomy& taxonomy, std::optional<ShotId> s) {
  return s ? taxonomy.Name(*s) : std::string("-");
}

}  // namespace

std::size_t GameTree::NodeCount() const {
  std::size_t count = 0;
  std::vector<const GameNode*> stack = {&root};
  while (!stack.empty()) {
    const GameNode* n = stack.back();
    stack.pop_back();
    ++count;
    for (const auto& c : n->children) stack.push_back(&c);
  }
  return count;
}

std::string_view OpponentPolicyName(OpponentPolicy p) {
  return p == OpponentPolicy::kBestOwnUtility ? "best-own-utility" : "most-probable";
}

OpponentPolicy ParseOpponentPolicy(std::string_view name) {
  if (name == "best-own-utility") return OpponentPolicy::kBestOwnUtility;
  if (name == "most-probable") return OpponentPolicy::kMostProbable;
  throw ConfigError("unknown opponent policy '" + std::string(name) +
                    "' (expected best-own-utility or most-probable)");
}

void SimConfig::Validate() const {
  if (depth < 1) throw ConfigError("simulation depth must be >= 1");
  if (step_limit < 1) throw ConfigError("step limit must be >= 1");
}

double EdgeUtility(const ConditionalModel& m, ShotId shot, ShotId stimulus,
                   const RewardConfig& cfg) {
  return Prob(m, shot, stimulus) * SuccessRate(m, shot, stimulus) *
         TotalReward(m, shot, stimulus, cfg);
}

GameTree ExpandTree(const ConditionalModel& focal_model, const ConditionalModel& opponent_model,
                    ShotId root_stimulus, std::string_view root_agent, const SimConfig& cfg) {
  cfg.Validate();
  CheckOrientation(focal_model, opponent_model);
  if (root_agent != focal_model.responder() && root_agent != opponent_model.responder()) {
    throw UnknownPlayerError("unknown root agent '" + std::string(root_agent) + "'");
  }
  const Players players{focal_model, opponent_model,
                        focal_model.legality().WithSoftRules(cfg.soft_rules)};
  GameTree tree;
  tree.focal = focal_model.responder();
  tree.opponent = opponent_model.responder();
  tree.root.agent = std::string(root_agent);
  tree.root.incoming_shot = root_stimulus;
  Expand(tree.root, players, cfg);
  return tree;
}

InductionResult BackwardInduce(const GameTree& tree) {
  InductionResult result;
  const Solved root = Solve(tree.root, tree.focal);
  result.values = root.value;
  if (root.chosen == nullptr) return result;
  result.best_shot = root.chosen->incoming_shot;
  const GameNode* node = &tree.root;
  Solved at = root;
  while (at.chosen != nullptr) {
    result.line.push_back(
        {node->agent, at.chosen->incoming_shot, at.chosen->edge_utility, at.value});
    node = at.chosen;
    at = Solve(*node, tree.focal);
  }
  return result;
}

NodeValue ChoiceValue(const GameTree& tree, const GameNode& child) {
  NodeValue v = Solve(child, tree.focal).value;
  Component(v, tree.root.agent == tree.focal) += child.edge_utility;
  return v;
}

Rollout Simulate(const ConditionalModel& focal_model, const ConditionalModel& opponent_model,
                 std::span<const ShotEvent> seed_shots, const SimConfig& cfg) {
  cfg.Validate();
  CheckOrientation(focal_model, opponent_model);
  const std::string& focal = focal_model.responder();
  const std::string& opponent = opponent_model.responder();
  if (seed_shots.empty()) throw ValidationError("seed must contain at least the serve");
  ValidateShotPrefix(seed_shots, {focal, opponent}, focal_model.legality());

  Rollout rollout;
  rollout.focal = focal;
  rollout.opponent = opponent;
  rollout.seed_shots.assign(seed_shots.begin(), seed_shots.end());
  rollout.step_limit = cfg.step_limit;

  ConditionalModel mp = focal_model;
  ConditionalModel mo = opponent_model;
  LiveObservation working{"simulation", "rollout", rollout.seed_shots, seed_shots.size(), {}};
  const LegalityMatrix matrix = focal_model.legality().WithSoftRules(cfg.soft_rules);

  auto emit = [&](const std::string& agent, ShotId shot, NodeValue value) {
    rollout.entries.push_back({agent, shot, value});
    working.shots.push_back({agent, shot, working.shots.size()});
    if (cfg.live_update) {
      mp = UpdateLive(mp, working);
      mo = UpdateLive(mo, working);
      working.already_counted = working.shots.size();
    }
  };

  auto opponent_reply = [&]() {
    const ShotId stimulus = working.shots.back().shot;
    const GameTree tree = ExpandTree(mp, mo, stimulus, opponent, cfg);
    if (cfg.opponent_policy == OpponentPolicy::kBestOwnUtility) {
      const InductionResult r = BackwardInduce(tree);
      emit(opponent, *r.best_shot, r.values);
      return;
    }
    std::vector<UtilityBreakdown> candidates;
    for (ShotId r : matrix.LegalResponses(stimulus)) {
      const double p = Prob(mo, r, stimulus);
      candidates.push_back({r, p, 0.0, p, mo.Stats(r, stimulus).n_played});
    }
    std::sort(candidates.begin(), candidates.end(), RanksBefore);
    const ShotId choice = candidates.front().shot;
    NodeValue value;
    for (const GameNode& child : tree.root.children) {
      if (child.incoming_shot == choice) value = ChoiceValue(tree, child);
    }
    emit(opponent, choice, value);
  };

  if (working.shots.back().actor == focal) opponent_reply();
  for (std::size_t step = 0; step < cfg.step_limit; ++step) {
    const GameTree tree = ExpandTree(mp, mo, working.shots.back().shot, focal, cfg);
    const InductionResult r = BackwardInduce(tree);
    emit(focal, *r.best_shot, r.values);
    opponent_reply();
  }
  return rollout;
}

RolloutFormat ParseRolloutFormat(std::string_view name) {
  if (name == "table") return RolloutFormat::kTable;
  if (name == "json") return RolloutFormat::kJson;
  throw ConfigError("unknown format '" + std::string(name) + "' (expected table or json)");
}

std::string FormatRollout(const Rollout& rollout, const Taxonomy& taxonomy,
                          RolloutFormat format) {
  if (format == RolloutFormat::kJson) return ToJson(rollout, taxonomy).dump(2) + "\n";

  struct Row {
    bool seed = false;
    std::optional<ShotId> focal_shot;
    std::optional<ShotId> opponent_shot;
  };
  std::vector<Row> rows;
  auto place = [&](const std::string& agent, ShotId shot, bool seed) {
    if (agent == rollout.focal) {
      rows.push_back({seed, shot, std::nullopt});
    } else if (rows.empty() || rows.back().opponent_shot) {
      rows.push_back({seed, std::nullopt, shot});
    } else {
      rows.back().opponent_shot = shot;
    }
  };
  for (const auto& e : rollout.seed_shots) place(e.actor, e.shot, true);
  for (const auto& e : rollout.entries) place(e.agent, e.shot, false);

  std::ostringstream out;
  constexpr int kWidth = 26;
  out << std::left << std::setw(8) << "shot" << std::setw(kWidth) << (rollout.focal + " (X_p)")
      << rollout.opponent << " (X_o)\n";
  std::size_t number = 0;
  for (const Row& row : rows) {
    out << std::setw(8) << (row.seed ? std::string("seed") : std::to_string(++number))
        << std::setw(kWidth) << ShotCell(taxonomy, row.focal_shot)
        << ShotCell(taxonomy, row.opponent_shot) << "\n";
  }
  return out.str();
}

}  // namespace rallycoach
