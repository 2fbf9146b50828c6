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

#include "rallycoach/coach/session.h"

#include <gtest/gtest.h>

#include "testing/oracles.h"

namespace rallycoach::coach {
namespace {

using testing::kFocal;
using testing::kOpponent;

class SessionTest : public ::testing::Test {
 protected:
  SessionTest()
      : base_(std::make_shared<const Dataset>(testing::LoadFixture())),
        s_(Session::Create("t1", "fixture", base_, kFocal, kOpponent, EngineConfig{},
                           "2026-01-01")) {}

  ShotId Shot(const char* name) const { return base_->taxonomy().Parse(name); }

  void ExpectBatchEqual(const Session& s) const {
    const Dataset live = s.LiveDataset();
    EXPECT_EQ(s.focal_model(), BuildModel(live, kFocal, kOpponent));
    EXPECT_EQ(s.opponent_model(), BuildModel(live, kOpponent, kFocal));
  }

  std::shared_ptr<const Dataset> base_;
  Session s_;
};

TEST_F(SessionTest, CreateChecksPlayers) {
  EXPECT_THROW(Session::Create("x", "", base_, kFocal, "nobody", {}, "2026-01-01"),
               UnknownPlayerError);
  EXPECT_THROW(Session::Create("x", "", base_, kFocal, kFocal, {}, "2026-01-01"),
               ValidationError);
  EXPECT_EQ(s_.NextActor(), kFocal);
  EXPECT_EQ(s_.Score(kFocal), 0u);
}

TEST_F(SessionTest, AlternationViolationRejected) {
  const Session a = s_.RecordShot(kFocal, Shot("backhand_short_serve"));
  EXPECT_THROW(a.RecordShot(kFocal, Shot("forehand_drop")), ValidationError);
  EXPECT_THROW(a.RecordShot(kOpponent, Shot("backhand_long_serve")), ValidationError);
  EXPECT_THROW(s_.RecordShot(kFocal, Shot("forehand_drop")), ValidationError);
  EXPECT_THROW(s_.RecordShot("nobody", Shot("backhand_short_serve")), ValidationError);
  EXPECT_THROW(s_.EndRally(kFocal, Termination::kWinnerShot), ValidationError);
}

TEST_F(SessionTest, ModelsEqualBatchAfterEveryMutation) {
  Session s = s_;
  const char* shots[] = {"backhand_short_serve", "forehand_lift", "normal_smash", "block"};
  for (int rally = 0; rally < 3; ++rally) {
    for (int i = 0; i < 4; ++i) {
      s = s.RecordShot(s.NextActor(), Shot(shots[i]));
      ExpectBatchEqual(s);
    }
    const std::string last = s.rally_buffer().back().actor;
    s = s.EndRally(last, Termination::kWinnerShot);
    ExpectBatchEqual(s);
  }
  EXPECT_EQ(s.live_rallies().size(), 3u);
  // The winner serves next, so the four-shot rallies alternate winners.
  EXPECT_EQ(s.Score(kOpponent), 2u);
  EXPECT_EQ(s.Score(kFocal), 1u);
  EXPECT_EQ(s.NextActor(), kOpponent);
  s = s.Undo();
  ExpectBatchEqual(s);
  EXPECT_EQ(s.live_rallies().size(), 2u);
  EXPECT_EQ(s.rally_buffer().size(), 4u);
}

TEST_F(SessionTest, UndoRevertsLastEvent) {
  EXPECT_THROW(s_.Undo(), ValidationError);
  const Session a = s_.RecordShot(kFocal, Shot("backhand_short_serve"));
  const Session b = a.RecordShot(kOpponent, Shot("forehand_lift"));
  const Session back = b.Undo();
  EXPECT_EQ(back.rally_buffer(), a.rally_buffer());
  EXPECT_EQ(back.StateJson(), a.StateJson());
}

TEST_F(SessionTest, AdviseIsIdempotent) {
  const Session a = s_.RecordShot(kFocal, Shot("backhand_short_serve"))
                        .RecordShot(kOpponent, Shot("forehand_long_clear"));
  const auto t = base_->taxonomy();
  EXPECT_EQ(ToJson(a.Advise(), t).dump(), ToJson(a.Advise(), t).dump());
  const AdviceResponse advice = a.Advise();
  EXPECT_EQ(advice.for_player, kFocal);
  EXPECT_EQ(advice.recommendation.ranked.size(), 2u);
  EXPECT_EQ(advice.recommendation,
            BestResponse(a.focal_model(), Shot("forehand_long_clear"), 2));
}

TEST_F(SessionTest, EmptyBufferAdvisesServes) {
  const AdviceResponse advice = s_.Advise();
  EXPECT_FALSE(advice.stimulus.has_value());
  ASSERT_FALSE(advice.recommendation.ranked.empty());
  for (const auto& u : advice.recommendation.ranked) EXPECT_TRUE(base_->taxonomy().IsServe(u.shot));
  EXPECT_EQ(advice.lookahead.line.front().shot, advice.recommendation.ranked.front().shot);
}

TEST_F(SessionTest, WhatIfNeverBeatsAdvice) {
  const Session a = s_.RecordShot(kFocal, Shot("backhand_short_serve"))
                        .RecordShot(kOpponent, Shot("forehand_long_clear"));
  const AdviceResponse advice = a.Advise();
  const GameTree tree = ExpandTree(a.focal_model(), a.opponent_model(),
                                   Shot("forehand_long_clear"), kFocal, a.config().sim);
  ASSERT_FALSE(tree.root.children.empty());
  for (const GameNode& c : tree.root.children) {
    const WhatIfResult w = a.WhatIf(c.incoming_shot);
    EXPECT_LE(w.value.u_p, advice.lookahead.values.u_p);
    EXPECT_EQ(w.value, ChoiceValue(tree, c));
    EXPECT_EQ(w.rollout.seed_shots.size(), 3u);
  }
  EXPECT_EQ(a.WhatIf(*advice.lookahead.best_shot).value, advice.lookahead.values);
}

TEST_F(SessionTest, WhatIfRejectsIllegalAndOffTurn) {
  const Session a = s_.RecordShot(kFocal, Shot("backhand_short_serve"))
                        .RecordShot(kOpponent, Shot("forehand_long_clear"));
  EXPECT_THROW(a.WhatIf(Shot("backhand_long_serve")), ValidationError);
  const Session b = a.RecordShot(kFocal, Shot("normal_smash"));
  EXPECT_THROW(b.WhatIf(Shot("block")), ValidationError);
}

TEST_F(SessionTest, ExportRoundTrips) {
  const ExportBundle empty = s_.Export();
  EXPECT_EQ(ParseDataset(empty.rally_log).RallyCount(), 0u);

  Session s = s_.RecordShot(kFocal, Shot("backhand_short_serve"))
                  .RecordShot(kOpponent, Shot("forehand_lift"));
  s = s.EndRally(kFocal, Termination::kUnforcedError);
  const ExportBundle b = s.Export();
  const Dataset back = ParseDataset(b.rally_log);
  ASSERT_EQ(back.RallyCount(), 1u);
  EXPECT_EQ(back.matches()[0].rallies[0], s.live_rallies()[0]);
  EXPECT_EQ(b.focal_table_csv.substr(0, 13), "opponent_shot");
  const auto j = ToJson(b);
  EXPECT_EQ(j["rally_log"], b.rally_log);
}

TEST_F(SessionTest, EventsRoundTripThroughJson) {
  Session s = s_.RecordShot(kFocal, Shot("backhand_short_serve"));
  s = s.RecordShot(kOpponent, Shot("forehand_lift"));
  s = s.EndRally(kFocal, Termination::kForcedError);
  Session replay = Session::Create("t1", "fixture", base_, kFocal, kOpponent, {}, "2026-01-01");
  for (const SessionEvent& e : s.history()) {
    replay = replay.Apply(SessionEvent::FromJson(e.ToJson()));
  }
  EXPECT_EQ(replay.StateJson(), s.StateJson());
  EXPECT_EQ(replay.focal_model(), s.focal_model());
  EXPECT_THROW(SessionEvent::FromJson({{"event", "teleport"}}), ParseError);
  EXPECT_THROW(replay.Apply(s.CreatedEvent()), ValidationError);
}

}  // namespace
}  // namespace rallycoach::coach
