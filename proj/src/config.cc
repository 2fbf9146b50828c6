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

#include "rallycoach/config.h"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rallycoach/json_io.h"

namespace rallycoach {
namespace {

std::string Trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

double ToDouble(const std::string& key, const std::string& v) {
  double out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size() || !std::isfinite(out)) {
    throw ConfigError(key + ": expected a number, got '" + v + "'");
  }
  return out;
}

std::size_t ToCount(const std::string& key, const std::string& v) {
  std::size_t out = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw ConfigError(key + ": expected a non-negative integer, got '" + v + "'");
  }
  return out;
}

bool ToBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "on") return true;
  if (v == "false" || v == "off") return false;
  throw ConfigError(key + ": expected true/false, got '" + v + "'");
}

void Apply(EngineConfig& cfg, const std::string& key, const std::string& v) {
  if (key == "rewards.hp") {
    cfg.rewards.hp = ToDouble(key, v);
  } else if (key == "rewards.mp") {
    cfg.rewards.mp = ToDouble(key, v);
  } else if (key == "rewards.mn") {
    cfg.rewards.mn = ToDouble(key, v);
  } else if (key == "rewards.ln") {
    cfg.rewards.ln = ToDouble(key, v);
  } else if (key == "rewards.neutral") {
    cfg.rewards.neutral = ToDouble(key, v);
  } else if (key == "model.alpha") {
    cfg.alpha = ToDouble(key, v);
  } else if (key == "recommend.k") {
    cfg.k = ToCount(key, v);
  } else if (key == "sim.depth") {
    cfg.sim.depth = ToCount(key, v);
  } else if (key == "sim.steps") {
    cfg.sim.step_limit = ToCount(key, v);
  } else if (key == "sim.opponent_policy") {
    cfg.sim.opponent_policy = ParseOpponentPolicy(v);
  } else if (key == "sim.live_update") {
    cfg.sim.live_update = ToBool(key, v);
  } else if (key == "soft_rules.drop_to_smash") {
    cfg.soft_rules.drop_to_smash = ToBool(key, v);
  } else {
    throw ConfigError("unknown config key '" + key + "'");
  }
}

}  // namespace

void EngineConfig::Finalize() {
  rewards.Validate();
  if (!(alpha >= 0.0)) throw ConfigError("model.alpha must be >= 0");
  if (k == 0) throw ConfigError("recommend.k must be >= 1");
  sim.rewards = rewards;
  sim.soft_rules = soft_rules;
  sim.Validate();
}

bool EngineConfig::operator==(const EngineConfig& other) const {
  return rewards == other.rewards && alpha == other.alpha && k == other.k &&
         sim.depth == other.sim.depth && sim.step_limit == other.sim.step_limit &&
         sim.opponent_policy == other.sim.opponent_policy &&
         sim.live_update == other.sim.live_update && sim.rewards == other.sim.rewards &&
         sim.soft_rules == other.sim.soft_rules && soft_rules == other.soft_rules;
}

EngineConfig ParseConfig(std::string_view text, EngineConfig base) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (Trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", line_no);
    try {
      Apply(base, Trim(line.substr(0, eq)), Trim(line.substr(eq + 1)));
    } catch (const ConfigError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  base.Finalize();
  return base;
}

EngineConfig LoadConfig(const std::filesystem::path& path, EngineConfig base) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return ParseConfig(buf.str(), base);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

nlohmann::json ConfigToJson(const EngineConfig& cfg) {
  return {
      {"rewards",
       {{"hp", cfg.rewards.hp},
        {"mp", cfg.rewards.mp},
        {"mn", cfg.rewards.mn},
        {"ln", cfg.rewards.ln},
        {"neutral", cfg.rewards.neutral}}},
      {"model", {{"alpha", cfg.alpha}}},
      {"recommend", {{"k", cfg.k}}},
      {"sim",
       {{"depth", cfg.sim.depth},
        {"steps", cfg.sim.step_limit},
        {"opponent_policy", std::string(OpponentPolicyName(cfg.sim.opponent_policy))},
        {"live_update", cfg.sim.live_update}}},
      {"soft_rules", {{"drop_to_smash", cfg.soft_rules.drop_to_smash}}},
  };
}

EngineConfig ConfigFromJson(const nlohmann::json& j, EngineConfig base) {
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  for (const auto& [section, values] : j.items()) {
    if (!values.is_object()) throw ConfigError("config section '" + section + "' must be an object");
    for (const auto& [name, value] : values.items()) {
      std::string text;
      if (value.is_string()) {
        text = value.get<std::string>();
      } else if (value.is_boolean()) {
        text = value.get<bool>() ? "true" : "false";
      } else if (value.is_number_unsigned() || value.is_number_integer()) {
        text = value.dump();
      } else if (value.is_number()) {
        text = FormatNumber(value.get<double>());
      } else {
        throw ConfigError("config value '" + section + "." + name + "' has an unsupported type");
      }
      Apply(base, section + "." + name, text);
    }
  }
  base.Finalize();
  return base;
}

}  // namespace rallycoach
