# Copyright 2026 The Rallycoach Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import os
import pathlib

import pytest

import rallycoach as rc

SOURCE = pathlib.Path(os.environ.get("RALLYCOACH_SOURCE_DIR",
                                     pathlib.Path(__file__).resolve().parents[2]))
FIXTURE = SOURCE / "data" / "fixture" / "fixture.rally"
P, O = "lin_dan", "lee_chong_wei"


@pytest.fixture(scope="module")
def dataset():
    return rc.load_dataset(str(FIXTURE))


@pytest.fixture(scope="module")
def models(dataset):
    return rc.build_model(dataset, P, O), rc.build_model(dataset, O, P)


def test_taxonomy_has_21_shots():
    names = rc.shots()
    assert len(names) == 21
    assert names[0] == "backhand_short_serve"
    assert names[-1] == "block"


def test_fixture_loads(dataset):
    assert dataset.rally_count >= 300
    assert len(dataset.match_ids) == 3
    assert set(dataset.players) == {P, O}


def test_fixture_generator_matches_committed_file(dataset):
    assert rc.generate_fixture().to_text() == FIXTURE.read_text()


def test_prob_sums_to_one(models):
    m, _ = models
    for stimulus in rc.shots():
        total = sum(m.prob(r, stimulus) for r in rc.shots())
        assert total == pytest.approx(1.0, abs=1e-9) or total == 0.0


def test_best_response_is_ranked(models):
    m, _ = models
    rec = rc.best_response(m, "normal_smash", k=3)
    utilities = [r["utility"] for r in rec["ranked"]]
    assert utilities == sorted(utilities, reverse=True)
    assert all(r["shot"] != "normal_smash" for r in rec["ranked"])


def test_serve_choice_ranks_serves(models):
    m, _ = models
    rec = rc.serve_choice(m)
    assert rec["stimulus"] is None
    assert all(r["shot"].endswith("_serve") for r in rec["ranked"])


def test_table_matches_golden(models):
    m, o = models
    golden = SOURCE / "tests" / "golden"
    assert rc.recommendation_table(m) == (golden / "table_lin_dan.csv").read_text()
    assert rc.recommendation_table(o) == (golden / "table_lee_chong_wei.csv").read_text()


def test_rollout_matches_golden(models):
    m, o = models
    text = rc.simulate(m, o, [("lin_dan", "backhand_short_serve")], steps=10, format="table")
    assert text == (SOURCE / "tests" / "golden" / "rollout_lin_dan.txt").read_text()


def test_model_json_round_trip(models):
    m, _ = models
    assert rc.model_from_json(m.to_json()) == m


def test_label_rewards_tiers():
    rally = [(P, "backhand_short_serve"), (O, "forehand_lift"), (P, "normal_smash")]
    assert rc.label_rewards(rally, P, "winner_shot", P) == [(0, "mp", 2.0), (2, "hp", 5.0)]
    assert rc.label_rewards(rally, P, "winner_shot", O) == [(1, "mn", -2.0)]


def test_errors_are_python_exceptions(models):
    m, _ = models
    with pytest.raises(rc.UnknownShotError):
        rc.best_response(m, "tweener")
    with pytest.raises(rc.ParseError, match="serve"):
        rc.parse_dataset("format rallylog 1\nplayer a A\nplayer b B\nmatch m 2020-01-01 a b\n"
                         "rally r server=a winner=a termination=winner_shot "
                         "shots=a:forehand_drop\n")
