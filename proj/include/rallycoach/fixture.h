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

// Deterministic synthetic match logs. The bundled fixture under
// data/fixture/ was produced by GenerateFixture with default options.

#ifndef RALLYCOACH_FIXTURE_H_
#define RALLYCOACH_FIXTURE_H_

#include <cstdint>
#include <memory>
#include <random>

#include "rallycoach/match_data.h"

namespace rallycoach {

struct FixtureOptions {
  std::uint64_t seed = 20110814;
  std::size_t matches = 3;
  std::size_t rallies_per_match = 110;
  std::size_t max_rally_length = 40;
  // Chance a drop is answered by a smash anyway (soft-rule violations).
  double soft_violation_rate = 0.02;
  Player focal{"lin_dan", "Lin Dan"};
  Player opponent{"lee_chong_wei", "Lee Chong Wei"};
};

// Every rally satisfies the hard invariants, so the result always loads.
Dataset GenerateFixture(const FixtureOptions& options = {},
                        std::shared_ptr<const Taxonomy> taxonomy = Taxonomy::Default());

// Uniform helpers over a 64-bit engine with a fixed, library-independent
// mapping so generated data does not depend on the standard library.
double Uniform01(std::mt19937_64& rng);
std::size_t UniformIndex(std::mt19937_64& rng, std::size_t n);

}  // namespace rallycoach

#endif  // RALLYCOACH_FIXTURE_H_
