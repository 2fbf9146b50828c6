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

#include "rallycoach/shots.h"

#include <array>
#include <sstream>
#include <unordered_set>

#include "rallycoach/taxonomy_data.h"

namespace rallycoach {
namespace {

constexpr std::array<std::pair<Category, std::string_view>, 8> kCategoryNames = {{
    {Category::kServe, "serve"},
    {Category::kDrop, "drop"},
    {Category::kKill, "kill"},
    {Category::kSmash, "smash"},
    {Category::kClear, "clear"},
    {Category::kDrive, "drive"},
    {Category::kLift, "lift"},
    {Category::kBlock, "block"},
}};

constexpr std::array<std::pair<Side, std::string_view>, 3> kSideNames = {{
    {Side::kForehand, "forehand"},
    {Side::kBackhand, "backhand"},
    {Side::kNeutral, "neutral"},
}};

}  // namespace

std::string_view CategoryName(Category c) {
  for (const auto& [cat, name] : kCategoryNames) {
    if (cat == c) return name;
  }
  return "?";
}

std::string_view SideName(Side s) {
  for (const auto& [side, name] : kSideNames) {
    if (side == s) return name;
  }
  return "?";
}

Category ParseCategory(std::string_view name) {
  for (const auto& [cat, n] : kCategoryNames) {
    if (n == name) return cat;
  }
  throw ParseError("unknown shot category '" + std::string(name) + "'");
}

Side ParseSide(std::string_view name) {
  for (const auto& [side, n] : kSideNames) {
    if (n == name) return side;
  }
  throw ParseError("unknown shot side '" + std::string(name) + "'");
}

Taxonomy Taxonomy::FromText(std::string_view text) {
  Taxonomy taxonomy;
  std::unordered_set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::string id, category, side, extra;
    if (!(fields >> id)) continue;
    if (!(fields >> category >> side) || (fields >> extra)) {
      throw ParseError("expected 'id category side'", line_no);
    }
    if (!seen.insert(id).second) {
      throw ParseError("duplicate shot id '" + id + "'", line_no);
    }
    try {
      taxonomy.shots_.push_back({id, ParseCategory(category), ParseSide(side)});
    } catch (const ParseError& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (taxonomy.Serves().empty()) {
    throw ParseError("taxonomy has no serve-category shot");
  }
  return taxonomy;
}

std::shared_ptr<const Taxonomy> Taxonomy::Default() {
  static const std::shared_ptr<const Taxonomy> kDefault =
      std::make_shared<const Taxonomy>(FromText(internal::kDefaultTaxonomyText));
  return kDefault;
}

ShotId Taxonomy::Parse(std::string_view name) const {
  for (std::size_t i = 0; i < shots_.size(); ++i) {
    if (shots_[i].id == name) return ShotId{i};
  }
  std::string msg = "unknown shot '" + std::string(name) + "'; valid shots:";
  for (const auto& s : shots_) msg += " " + s.id;
  throw UnknownShotError(msg);
}

bool Taxonomy::Contains(std::string_view name) const {
  for (const auto& s : shots_) {
    if (s.id == name) return true;
  }
  return false;
}

std::vector<ShotId> Taxonomy::All() const {
  std::vector<ShotId> out;
  out.reserve(shots_.size());
  for (std::size_t i = 0; i < shots_.size(); ++i) out.push_back(ShotId{i});
  return out;
}

std::vector<ShotId> Taxonomy::Serves() const {
  std::vector<ShotId> out;
  for (std::size_t i = 0; i < shots_.size(); ++i) {
    if (shots_[i].category == Category::kServe) out.push_back(ShotId{i});
  }
  return out;
}

const std::set<std::pair<Category, Category>>& LegalityMatrix::HardForbiddenPairs() {
  static const std::set<std::pair<Category, Category>> kPairs = {
      {Category::kSmash, Category::kSmash},
      {Category::kBlock, Category::kBlock},
  };
  return kPairs;
}

LegalityMatrix::LegalityMatrix(std::shared_ptr<const Taxonomy> taxonomy, SoftRules soft)
    : taxonomy_(std::move(taxonomy)), soft_(soft) {
  if (!taxonomy_) throw Error("LegalityMatrix requires a taxonomy");
  for (ShotId stimulus : taxonomy_->All()) {
    if (LegalResponses(stimulus).empty()) {
      throw ConfigError("no legal response to '" + taxonomy_->Name(stimulus) + "'");
    }
  }
}

LegalityMatrix LegalityMatrix::WithSoftRules(SoftRules soft) const {
  return LegalityMatrix(taxonomy_, soft);
}

bool LegalityMatrix::IsHardLegal(ShotId response, ShotId stimulus) const {
  const Category r = taxonomy_->CategoryOf(response);
  const Category s = taxonomy_->CategoryOf(stimulus);
  if (r == Category::kServe) return false;
  return !HardForbiddenPairs().contains({s, r});
}

bool LegalityMatrix::IsLegalResponse(ShotId response, ShotId stimulus) const {
  if (!IsHardLegal(response, stimulus)) return false;
  if (soft_.drop_to_smash && taxonomy_->CategoryOf(stimulus) == Category::kDrop &&
      taxonomy_->CategoryOf(response) == Category::kSmash) {
    return false;
  }
  return true;
}

std::vector<ShotId> LegalityMatrix::LegalResponses(ShotId stimulus) const {
  std::vector<ShotId> out;
  for (ShotId r : taxonomy_->All()) {
    if (IsLegalResponse(r, stimulus)) out.push_back(r);
  }
  return out;
}

std::vector<ShotId> LegalityMatrix::HardLegalResponses(ShotId stimulus) const {
  std::vector<ShotId> out;
  for (ShotId r : taxonomy_->All()) {
    if (IsHardLegal(r, stimulus)) out.push_back(r);
  }
  return out;
}

ShotType ParseShot(std::string_view name) {
  const auto& taxonomy = *Taxonomy::Default();
  return taxonomy.at(taxonomy.Parse(name));
}

}  // namespace rallycoach
