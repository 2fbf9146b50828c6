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

#ifndef RALLYCOACH_SHOTS_H_
#define RALLYCOACH_SHOTS_H_

#include <compare>
#include <cstddef>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "rallycoach/errors.h"

namespace rallycoach {

enum class Category { kServe, kDrop, kKill, kSmash, kClear, kDrive, kLift, kBlock };
enum class Side { kForehand, kBackhand, kNeutral };

std::string_view CategoryName(Category c);
std::string_view SideName(Side s);
Category ParseCategory(std::string_view name);
Side ParseSide(std::string_view name);

// Position of a shot in its taxonomy. Ordering follows taxonomy order, which
// is the canonical order for every deterministic output.
struct ShotId {
  std::size_t index = 0;
  auto operator<=>(const ShotId&) const = default;
};

struct ShotType {
  std::string id;
  Category category = Category::kServe;
  Side side = Side::kNeutral;

  bool operator==(const ShotType&) const = default;
};

// Closed, ordered set of shot types. The default instance is built from the
// bundled data/taxonomy.tsv.
class Taxonomy {
 public:
  // Tab or whitespace separated "id category side" lines; '#' starts a
  // comment. Ids must be unique and at least one serve must exist.
  static Taxonomy FromText(std::string_view text);
  static std::shared_ptr<const Taxonomy> Default();

  std::size_t size() const { return shots_.size(); }
  const ShotType& at(ShotId id) const { return shots_.at(id.index); }
  const std::string& Name(ShotId id) const { return at(id).id; }
  Category CategoryOf(ShotId id) const { return at(id).category; }
  bool IsServe(ShotId id) const { return CategoryOf(id) == Category::kServe; }

  // Throws UnknownShotError listing the valid ids.
  ShotId Parse(std::string_view name) const;
  bool Contains(std::string_view name) const;

  std::vector<ShotId> All() const;
  std::vector<ShotId> Serves() const;

  bool operator==(const Taxonomy& other) const { return shots_ == other.shots_; }

 private:
  std::vector<ShotType> shots_;
};

struct SoftRules {
  bool drop_to_smash = true;  // a drop may not be answered by a smash

  bool operator==(const SoftRules&) const = default;
};

// Stimulus -> response legality. Hard rules model the laws of play and are
// always on; soft rules encode tendencies and can be switched off.
class LegalityMatrix {
 public:
  explicit LegalityMatrix(std::shared_ptr<const Taxonomy> taxonomy,
                          SoftRules soft = {});

  const Taxonomy& taxonomy() const { return *taxonomy_; }
  const std::shared_ptr<const Taxonomy>& shared_taxonomy() const { return taxonomy_; }
  const SoftRules& soft_rules() const { return soft_; }
  LegalityMatrix WithSoftRules(SoftRules soft) const;

  bool IsHardLegal(ShotId response, ShotId stimulus) const;
  bool IsLegalResponse(ShotId response, ShotId stimulus) const;

  // Taxonomy-ordered; never empty.
  std::vector<ShotId> LegalResponses(ShotId stimulus) const;
  std::vector<ShotId> HardLegalResponses(ShotId stimulus) const;

  // Forbidden (stimulus, response) category pairs beyond the serve ban.
  static const std::set<std::pair<Category, Category>>& HardForbiddenPairs();

 private:
  std::shared_ptr<const Taxonomy> taxonomy_;
  SoftRules soft_;
};

// Convenience over the default taxonomy.
ShotType ParseShot(std::string_view name);

}  // namespace rallycoach

#endif  // RALLYCOACH_SHOTS_H_
