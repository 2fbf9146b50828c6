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

"""Python bindings for the rallycoach core."""

import json as _json

from rallycoach import _core
from rallycoach._core import (
    ConfigError,
    Dataset,
    Error,
    Model,
    ParseError,
    UnknownPlayerError,
    UnknownShotError,
    ValidationError,
    build_model,
    generate_fixture,
    label_rewards,
    load_dataset,
    model_from_json,
    parse_dataset,
    recommendation_table,
    shots,
)

__all__ = [
    "ConfigError", "Dataset", "Error", "Model", "ParseError", "UnknownPlayerError",
    "UnknownShotError", "ValidationError", "best_response", "build_model",
    "generate_fixture", "label_rewards", "load_dataset", "model_from_json",
    "parse_dataset", "recommendation_table", "serve_choice", "shots", "simulate",
]


def best_response(model, stimulus, k=2, drop_to_smash=True):
    return _json.loads(_core.best_response(model, stimulus, k, drop_to_smash))


def serve_choice(model, k=2):
    return _json.loads(_core.serve_choice(model, k))


def simulate(focal_model, opponent_model, seed, steps=10, depth=3, live_update=False,
             opponent_policy="best-own-utility", format="json"):
    text = _core.simulate(focal_model, opponent_model, list(seed), steps, depth, live_update,
                          opponent_policy, format)
    return _json.loads(text) if format == "json" else text
