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

#include "rallycoach/estimation.h"

#include <gtest/gtest.h>

#include <random>

#include "rallycoach/json_io.h"
#include "testing/oracles.h"

namespace rallycoach {
namespace {

using testing::SourceDir;

class HandCountTest : public ::testing::Test {
 protected:
  HandCountTest()
      : d_(LoadDataset(SourceDir() / "tests/data/smash_replies.rally")),
        m_(BuildModel(d_, "p", "o")),
        smash_(d_.taxonomy().Parse("normal_smash")),
        block_(d_.taxonomy().Parse("block")),
        lift_(d_.taxonomy().Parse("forehand_lift")) {}

  Dataset d_;
  ConditionalModel m_;
  ShotId smash_, block_, lift_;
};

TEST_F(HandCountTest, Counts) {
  EXPECT_EQ(m_.Stats(block_, smash_).n_played, 6u);
  EXPECT_EQ(m_.Stats(lift_, smash_).n_played, 4u);
  EXPECT_EQ(m_.StimulusTotal(smash_), 10u);
  const PairStats& b = m_.Stats(block_, smash_);
  EXPECT_EQ(b.hp, 2u);
  EXPECT_EQ(b.mn, 1u);
  EXPECT_EQ(b.n_neutral(), 3u);
  EXPECT_EQ(b.instances.size(), 6u);
}

TEST_F(HandCountTest, ProbSuccessReward) {
  EXPECT_DOUBLE_EQ(Prob(m_, block_, smash_), 0.6);
  EXPECT_DOUBLE_EQ(Prob(m_, lift_, smash_), 0.4);
  EXPECT_DOUBLE_EQ(SuccessRate(m_, block_, smash_), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(SuccessRate(m_, lift_, smash_), 0.25);
  // {hp, hp, n, n, n, mn} -> (5 + 5 - 2) / 6
  EXPECT_DOUBLE_EQ(TotalReward(m_, block_, smash_, RewardConfig{}), 4.0 / 3.0);
}

TEST_F(HandCountTest, UnseenAndIllegal) {
  const ShotId kill = d_.taxonomy().Parse("forehand_kill");
  EXPECT_EQ(Prob(m_, block_, kill), 0.0);
  EXPECT_EQ(SuccessRate(m_, block_, kill), 0.0);
  EXPECT_EQ(TotalReward(m_, block_, kill, RewardConfig{}), 0.0);
  EXPECT_EQ(Prob(m_, d_.taxonomy().Parse("jump_smash"), smash_), 0.0);
  EXPECT_EQ(Prob(m_, d_.taxonomy().Parse("backhand_short_serve"), smash_), 0.0);
}

TEST(EstimationTest, AlphaOneWithEighteenLegal) {
  const Dataset d = ParseDataset(
      "format rallylog 1\nplayer a A\nplayer b B\nmatch m 2020-01-01 a b\n"
      "rally r1 server=a winner=b termination=winner_shot "
      "shots=a:backhand_short_serve,b:normal_smash,a:block,b:forehand_lift\n");
  const ConditionalModel m = BuildModel(d, "b", "a", 1.0);
  const Taxonomy& t = d.taxonomy();
  const ShotId block = t.Parse("block");
  EXPECT_DOUBLE_EQ(Prob(m, t.Parse("forehand_lift"), block), 2.0 / 19.0);
  double sum = 0;
  for (ShotId r : t.All()) sum += Prob(m, r, block);
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(EstimationTest, SingleObservation) {
  const Dataset d = ParseDataset(
      "format rallylog 1\nplayer a A\nplayer b B\nmatch m 2020-01-01 a b\n"
      "rally r1 server=a winner=b termination=winner_shot "
      "shots=a:backhand_short_serve,b:forehand_drop\n");
  const ConditionalModel m = BuildModel(d, "b", "a");
  const Taxonomy& t = d.taxonomy();
  EXPECT_DOUBLE_EQ(Prob(m, t.Parse("forehand_drop"), t.Parse("backhand_short_serve")), 1.0);
  EXPECT_DOUBLE_EQ(SuccessRate(m, t.Parse("forehand_drop"), t.Parse("backhand_short_serve")), 1.0);
}

TEST(EstimationTest, EmptyDatasetGivesZeroSupport) {
  const Dataset d = ParseDataset("format rallylog 1\nplayer a A\nplayer b B\n");
  const ConditionalModel m = BuildModel(d, "a", "b");
  EXPECT_TRUE(m.Entries().empty());
  EXPECT_THROW(BuildModel(d, "a", "nobody"), UnknownPlayerError);
}

TEST(RewardTest, TierValues) {
  const Taxonomy& t = *Taxonomy::Default();
  auto shot = [&](const char* actor, const char* name, std::size_t i) {
    return ShotEvent{actor, t.Parse(name), i};
  };
  // Focal jump smash is the final winner: hp.
  Rally direct{"r", "p", {shot("p", "backhand_short_serve", 0), shot("o", "forehand_lift", 1),
                          shot("p", "jump_smash", 2)},
               {"p", Termination::kWinnerShot}};
  auto labels = LabelRewards(direct, "p", RewardConfig{});
  ASSERT_EQ(labels.size(), 2u);
  EXPECT_EQ(labels[1].tier, RewardTier::kHp);
  EXPECT_EQ(labels[1].value, 5.0);
  // Lift, weak clear, kill: the lift is mp.
  Rally setup{"r", "o", {shot("o", "backhand_short_serve", 0), shot("p", "forehand_lift", 1),
                         shot("o", "forehand_short_clear", 2), shot("p", "forehand_kill", 3)},
              {"p", Termination::kWinnerShot}};
  labels = LabelRewards(setup, "p", RewardConfig{});
  EXPECT_EQ(labels[0].tier, RewardTier::kMp);
  EXPECT_EQ(labels[0].value, 2.0);
  // The opponent punishes at once: mn; and the opponent's last shot is hp.
  labels = LabelRewards(setup, "o", RewardConfig{});
  EXPECT_EQ(labels[1].tier, RewardTier::kMn);
  EXPECT_EQ(labels[1].value, -2.0);
  // Focal error on the last shot: ln.
  Rally error{"r", "p", {shot("p", "backhand_short_serve", 0), shot("o", "forehand_lift", 1),
                         shot("p", "normal_smash", 2)},
              {"o", Termination::kUnforcedError}};
  labels = LabelRewards(error, "p", RewardConfig{});
  EXPECT_EQ(labels[1].tier, RewardTier::kLn);
  EXPECT_EQ(labels[1].value, -5.0);
}

TEST(RewardTest, LongRallyMidShotsNeutral) {
  std::mt19937_64 rng(3);
  const LegalityMatrix legality(Taxonomy::Default());
  for (int i = 0; i < 200; ++i) {
    const Rally r = testing::RandomRally(rng, legality, "p", "o", 30, "r");
    for (const auto& l : LabelRewards(r, "p", RewardConfig{})) {
      if (l.index + 3 <= r.shots.size() - 1) {
        EXPECT_EQ(l.tier, RewardTier::kNeutral);
      }
    }
  }
}

TEST(RewardTest, ConfigOrdering) {
  RewardConfig ok;
  EXPECT_NO_THROW(ok.Validate());
  RewardConfig bad;
  bad.mp = 6;
  EXPECT_THROW(bad.Validate(), ConfigError);
  bad = RewardConfig{};
  bad.mn = 0.5;
  EXPECT_THROW(bad.Validate(), ConfigError);
}

TEST(EstimationTest, RangesOnFixture) {
  const Dataset d = testing::LoadFixture();
  const ConditionalModel m = BuildModel(d, testing::kFocal, testing::kOpponent);
  const RewardConfig cfg;
  for (ShotId s : d.taxonomy().All()) {
    for (ShotId r : d.taxonomy().All()) {
      const double ps = SuccessRate(m, r, s);
      EXPECT_GE(ps, 0.0);
      EXPECT_LE(ps, 1.0);
      const double rt = TotalReward(m, r, s, cfg);
      EXPECT_GE(rt, cfg.ln);
      EXPECT_LE(rt, cfg.hp);
      if (d.taxonomy().IsServe(r)) {
        EXPECT_EQ(Prob(m, r, s), 0.0);
      }
    }
  }
}

TEST(EstimationTest, ScaleInvariance) {
  const Dataset d = testing::LoadFixture();
  const Dataset x3 = Replicate(d, 3);
  const ConditionalModel a = BuildModel(d, testing::kFocal, testing::kOpponent);
  const ConditionalModel b = BuildModel(x3, testing::kFocal, testing::kOpponent);
  const RewardConfig cfg;
  for (ShotId s : d.taxonomy().All()) {
    for (ShotId r : d.taxonomy().All()) {
      EXPECT_EQ(Prob(a, r, s), Prob(b, r, s));
      EXPECT_EQ(SuccessRate(a, r, s), SuccessRate(b, r, s));
      EXPECT_EQ(TotalReward(a, r, s, cfg), TotalReward(b, r, s, cfg));
    }
  }
}

TEST(EstimationTest, ModelJsonRoundTrip) {
  const Dataset d = testing::LoadFixture();
  const ConditionalModel m = BuildModel(d, testing::kFocal, testing::kOpponent, 0.5);
  const ConditionalModel back = ModelFromJson(ModelToJson(m));
  EXPECT_EQ(back, m);
  EXPECT_EQ(ModelToJson(back).dump(), ModelToJson(m).dump());
}

TEST(EstimationTest, ModelJsonRejectsBadInput) {
  auto j = ModelToJson(BuildModel(testing::LoadFixture(), testing::kFocal, testing::kOpponent));
  auto wrong = j;
  wrong["format"] = "something/9";
  EXPECT_THROW(ModelFromJson(wrong), ParseError);
  auto inconsistent = j;
  inconsistent["rows"][0]["hp"] = 100000;
  EXPECT_THROW(ModelFromJson(inconsistent), Error);
}

TEST(LiveUpdateTest, PartialThenFinalEqualsBatch) {
  const Dataset base = testing::RandomDataset(11, 1, 30);
  std::mt19937_64 rng(12);
  const Rally live = testing::RandomRally(rng, base.legality(), "pa", "pb", 9, "live1");
  ConditionalModel m = BuildModel(base, "pa", "pb");
  LiveObservation obs{"m1", "live1", {}, 0, std::nullopt};
  for (const ShotEvent& e : live.shots) {
    obs.shots.push_back(e);
    m = UpdateLive(m, obs);
    obs.already_counted = obs.shots.size();
  }
  obs.outcome = live.outcome;
  m = UpdateLive(m, obs);
  const Dataset after = AppendRally(base, live, "m1");
  EXPECT_EQ(m, BuildModel(after, "pa", "pb"));
}

TEST(LiveUpdateTest, RejectsInvalidSequence) {
  const Dataset base = testing::RandomDataset(1, 1, 5);
  const ConditionalModel m = BuildModel(base, "pa", "pb");
  const Taxonomy& t = base.taxonomy();
  LiveObservation obs{"m1", "x", {{"pa", t.Parse("forehand_drop"), 0}}, 0, std::nullopt};
  EXPECT_THROW(UpdateLive(m, obs), ValidationError);
}

}  // namespace
}  // namespace rallycoach
