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

#ifndef RALLYCOACH_CONFIG_H_
#define RALLYCOACH_CONFIG_H_

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "rallycoach/simulator.h"

namespace rallycoach {

// Everything a coaching session or CLI run can tune.
struct EngineConfig {
  RewardConfig rewards;
  double alpha = 0.0;
  std::size_t k = 2;
  SimConfig sim;  // sim.rewards mirrors rewards after Finalize()
  SoftRules soft_rules;

  // Copies shared settings into sim and validates everything.
  void Finalize();

  bool operator==(const EngineConfig& other) const;
};

// Flat "key = value" lines, '#' comments. Known keys:
//   rewards.hp rewards.mp rewards.mn rewards.ln rewards.neutral
//   model.alpha recommend.k
//   sim.depth sim.steps sim.opponent_policy sim.live_update
//   soft_rules.drop_to_smash
// Unknown keys are errors. Values not given keep their defaults.
EngineConfig ParseConfig(std::string_view text, EngineConfig base = {});
EngineConfig LoadConfig(const std::filesystem::path& path, EngineConfig base = {});

// Same keys, nested by their dotted prefix.
nlohmann::json ConfigToJson(const EngineConfig& cfg);
EngineConfig ConfigFromJson(const nlohmann::json& j, EngineConfig base = {});

}  // namespace rallycoach

#endif  // RALLYCOACH_CONFIG_H_
