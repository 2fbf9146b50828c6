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

// Rally simulation as a depth-limited, non-zero-sum extensive-form game.
//
// The infinite rally is truncated to `depth` alternating shots. Each edge is
// worth P * P_success * R_T to the player who hits it, read from that
// player's own model. The tree is solved by backward induction where every
// player maximises its own accumulated utility, then the rollout plays the
// chosen shot, lets the opponent reply and repeats.

#ifndef RALLYCOACH_SIMULATOR_H_
#define RALLYCOACH_SIMULATOR_H_

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rallycoach/estimation.h"

namespace rallycoach {

enum class NodeKind { kChoice, kTerminal };

struct GameNode {
  NodeKind kind = NodeKind::kTerminal;
  std::string agent;        // who acts at this node
  ShotId incoming_shot;     // shot that led here (the root's stimulus)
  std::size_t depth = 0;
  double edge_utility = 0;  // worth of incoming_shot to the player who hit it
  std::size_t edge_support = 0;
  std::vector<GameNode> children;  // taxonomy order
};

struct GameTree {
  std::string focal;
  std::string opponent;
  GameNode root;

  std::size_t NodeCount() const;
};

// Accumulated utilities below a node; not zero-sum.
struct NodeValue {
  double u_p = 0.0;
  double u_o = 0.0;

  bool operator==(const NodeValue&) const = default;
};

enum class OpponentPolicy { kBestOwnUtility, kMostProbable };

std::string_view OpponentPolicyName(OpponentPolicy p);
OpponentPolicy ParseOpponentPolicy(std::string_view name);

struct SimConfig {
  std::size_t depth = 3;
  std::size_t step_limit = 20;
  OpponentPolicy opponent_policy = OpponentPolicy::kBestOwnUtility;
  bool live_update = false;
  RewardConfig rewards;
  SoftRules soft_rules;

  // depth >= 1, step_limit >= 1. Rewards are not checked here.
  void Validate() const;
};

// P * P_success * R_T for `shot` answering `stimulus`, from the acting
// player's model.
double EdgeUtility(const ConditionalModel& m, ShotId shot, ShotId stimulus,
                   const RewardConfig& cfg);

// Children are the legal responses with positive support in the acting
// player's model, or every legal response (at zero utility) when none has
// support. `focal_model` has the focal player as responder and
// `opponent_model` the opponent.
GameTree ExpandTree(const ConditionalModel& focal_model, const ConditionalModel& opponent_model,
                    ShotId root_stimulus, std::string_view root_agent, const SimConfig& cfg);

struct LineStep {
  std::string agent;
  ShotId shot;
  double edge_utility = 0.0;
  NodeValue value;  // value of the node this shot was chosen at
};

struct InductionResult {
  std::optional<ShotId> best_shot;  // empty for a terminal root
  NodeValue values;
  std::vector<LineStep> line;  // principal variation from the root
};

// Leaves-to-root solve. Ties on the acting player's value go to the better
// supported edge, then to taxonomy order.
InductionResult BackwardInduce(const GameTree& tree);

// Value to both players of `shot` chosen at the root, including everything
// induced below it.
NodeValue ChoiceValue(const GameTree& tree, const GameNode& child);

struct RolloutEntry {
  std::string agent;
  ShotId shot;
  NodeValue value;

  bool operator==(const RolloutEntry&) const = default;
};

struct Rollout {
  std::string focal;
  std::string opponent;
  std::vector<ShotEvent> seed_shots;
  std::vector<RolloutEntry> entries;
  std::size_t step_limit = 0;

  bool operator==(const Rollout&) const = default;
};

// Predicts `cfg.step_limit` focal shots (each followed by the opponent's
// reply) after a seed prefix that starts with a serve. A seed that ends on
// a focal shot first gets the opponent's reply.
Rollout Simulate(const ConditionalModel& focal_model, const ConditionalModel& opponent_model,
                 std::span<const ShotEvent> seed_shots, const SimConfig& cfg);

enum class RolloutFormat { kTable, kJson };
RolloutFormat ParseRolloutFormat(std::string_view name);

// Table layout: one row per (focal shot, opponent reply) pair. Rows that
// hold seed shots are labelled "seed"; predicted rows are numbered from 1.
std::string FormatRollout(const Rollout& rollout, const Taxonomy& taxonomy,
                          RolloutFormat format);

}  // namespace rallycoach

#endif  // RALLYCOACH_SIMULATOR_H_
