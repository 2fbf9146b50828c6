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

// JSON encodings shared by the CLI and the coach service. Schemas are
// documented in docs/json_schemas.md.

#ifndef RALLYCOACH_JSON_IO_H_
#define RALLYCOACH_JSON_IO_H_

#include <filesystem>
#include <string>

#include "json.hpp"
#include "rallycoach/estimation.h"

namespace rallycoach {

struct Recommendation;
struct Rollout;
struct NodeValue;
struct InductionResult;

inline constexpr const char* kModelFormat = "rallycoach.model/1";

// Shortest decimal text that round-trips the double.
std::string FormatNumber(double v);

nlohmann::json ToJson(const Recommendation& rec, const Taxonomy& taxonomy);
nlohmann::json ToJson(const Rollout& rollout, const Taxonomy& taxonomy);
nlohmann::json ToJson(const NodeValue& value);
nlohmann::json ToJson(const InductionResult& result, const Taxonomy& taxonomy);

// Versioned, self-contained model table: taxonomy, soft rules, alpha and one
// row per observed (response, stimulus) pair with its tier counts.
nlohmann::json ModelToJson(const ConditionalModel& m);
ConditionalModel ModelFromJson(const nlohmann::json& j);

void SaveModel(const ConditionalModel& m, const std::filesystem::path& path);
ConditionalModel LoadModel(const std::filesystem::path& path);

}  // namespace rallycoach

#endif  // RALLYCOACH_JSON_IO_H_
