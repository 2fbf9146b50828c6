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

#include <gtest/gtest.h>

#include "rallycoach/fixture.h"
#include "testing/oracles.h"

namespace rallycoach {
namespace {

using testing::SourceDir;

constexpr const char* kHeader =
    "format rallylog 1\nplayer a Player A\nplayer b Player B\nmatch m1 2021-01-01 a b\n";

std::string ErrorOf(const std::string& text) {
  try {
    ParseDataset(text);
  } catch (const Error& e) {
    return e.what();
  }
  return "";
}

TEST(FixtureTest, BundledFixtureLoadsClean) {
  std::vector<Diagnostic> warnings;
  const Dataset d = LoadDataset(SourceDir() / "data/fixture/fixture.rally", {}, &warnings);
  EXPECT_EQ(d.matches().size(), 3u);
  EXPECT_GE(d.RallyCount(), 300u);
  // Soft-rule violations are warnings, never errors.
  for (const auto& w : warnings) EXPECT_NE(w.message.find("soft rule"), std::string::npos);
}

TEST(FixtureTest, GeneratorReproducesCommittedFile) {
  EXPECT_EQ(WriteDataset(GenerateFixture()),
            testing::ReadFile(SourceDir() / "data/fixture/fixture.rally"));
}

TEST(FixtureTest, GeneratorIsDeterministicPerSeed) {
  FixtureOptions o;
  o.seed = 7;
  o.rallies_per_match = 20;
  EXPECT_EQ(WriteDataset(GenerateFixture(o)), WriteDataset(GenerateFixture(o)));
  FixtureOptions other = o;
  other.seed = 8;
  EXPECT_NE(WriteDataset(GenerateFixture(o)), WriteDataset(GenerateFixture(other)));
}

TEST(ParseTest, AlternationViolationNamesIndex) {
  const std::string err = ErrorOf(testing::ReadFile(SourceDir() / "tests/data/bad_alternation.rally"));
  EXPECT_NE(err.find("alternation violated at index 2"), std::string::npos) << err;
  EXPECT_NE(err.find("line 5"), std::string::npos) << err;
}

TEST(ParseTest, RallyMustOpenWithServe) {
  const std::string err = ErrorOf(std::string(kHeader) +
                                  "rally r1 server=a winner=a termination=winner_shot "
                                  "shots=a:forehand_drop\n");
  EXPECT_NE(err.find("rally must open with a serve"), std::string::npos) << err;
}

TEST(ParseTest, ServeMidRallyRejected) {
  const std::string err = ErrorOf(std::string(kHeader) +
                                  "rally r1 server=a winner=b termination=winner_shot "
                                  "shots=a:backhand_short_serve,b:backhand_long_serve\n");
  EXPECT_NE(err.find("serve mid-rally at index 1"), std::string::npos) << err;
}

TEST(ParseTest, HardIllegalPairRejected) {
  const std::string err = ErrorOf(std::string(kHeader) +
                                  "rally r1 server=a winner=a termination=winner_shot "
                                  "shots=a:backhand_short_serve,b:normal_smash,a:jump_smash\n");
  EXPECT_NE(err.find("illegal response at index 2"), std::string::npos) << err;
}

TEST(ParseTest, UnknownShotRejected) {
  const std::string err = ErrorOf(std::string(kHeader) +
                                  "rally r1 server=a winner=a termination=winner_shot "
                                  "shots=a:backhand_short_serve,b:tweener\n");
  EXPECT_NE(err.find("tweener"), std::string::npos) << err;
}

TEST(ParseTest, InconsistentOutcomeRejected) {
  const std::string err = ErrorOf(std::string(kHeader) +
                                  "rally r1 server=a winner=b termination=winner_shot "
                                  "shots=a:backhand_short_serve\n");
  EXPECT_NE(err.find("outcome inconsistent"), std::string::npos) << err;
}

TEST(ParseTest, SoftViolationIsWarning) {
  std::vector<Diagnostic> warnings;
  const Dataset d =
      LoadDataset(SourceDir() / "tests/data/soft_violation.rally", {}, &warnings);
  EXPECT_EQ(d.RallyCount(), 1u);
  ASSERT_EQ(warnings.size(), 1u);
  EXPECT_EQ(warnings[0].line, 5u);
}

TEST(ParseTest, RoundTrip) {
  const Dataset d = testing::LoadFixture();
  EXPECT_EQ(ParseDataset(WriteDataset(d)), d);
}

TEST(ParseTest, UnknownPlayerInMatch) {
  const std::string err =
      ErrorOf("format rallylog 1\nplayer a A\nmatch m1 2021-01-01 a zed\n");
  EXPECT_NE(err.find("zed"), std::string::npos) << err;
}

TEST(DatasetTest, LoadDatasetsMergesAndRejectsDuplicateMatches) {
  const std::vector<std::filesystem::path> two = {SourceDir() / "tests/data/smash_replies.rally",
                                                  SourceDir() / "tests/data/serves_and_drops.rally"};
  const Dataset d = LoadDatasets(two);
  EXPECT_EQ(d.players().size(), 4u);
  EXPECT_EQ(d.matches().size(), 2u);
  const std::vector<std::filesystem::path> dup = {two[0], two[0]};
  EXPECT_THROW(LoadDatasets(dup), Error);
}

TEST(DatasetTest, AppendRallyIsValueSemantic) {
  const Dataset d = ParseDataset(std::string(kHeader));
  Rally r{"r1", "a", {{"a", Taxonomy::Default()->Parse("backhand_short_serve"), 0}}, {"a", Termination::kWinnerShot}};
  const Dataset e = AppendRally(d, r);
  EXPECT_EQ(d.RallyCount(), 0u);
  EXPECT_EQ(e.RallyCount(), 1u);
  Rally bad = r;
  bad.rally_id = "r2";
  bad.outcome.winner = "b";
  EXPECT_THROW(AppendRally(e, bad), ValidationError);
}

TEST(DatasetTest, ShotFrequenciesHandCount) {
  const Dataset d = LoadDataset(SourceDir() / "tests/data/serves_and_drops.rally");
  const auto counts = ShotFrequencies(d, "x");
  const Taxonomy& t = d.taxonomy();
  std::size_t total = 0;
  for (std::size_t c : counts) total += c;
  EXPECT_EQ(total, 15u);
  EXPECT_EQ(counts[t.Parse("backhand_short_serve").index], 10u);
  EXPECT_EQ(counts[t.Parse("forehand_drop").index], 5u);
  EXPECT_THROW(ShotFrequencies(d, "nobody"), UnknownPlayerError);
}

TEST(DatasetTest, ReplicateRenamesMatches) {
  const Dataset d = testing::LoadFixture();
  const Dataset x3 = Replicate(d, 3);
  EXPECT_EQ(x3.RallyCount(), 3 * d.RallyCount());
  EXPECT_NE(x3.FindMatch("m1#3"), nullptr);
}

}  // namespace
}  // namespace rallycoach
