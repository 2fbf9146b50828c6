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

#include "rallycoach/fixture.h"

#include <map>
#include <string>

namespace rallycoach {
namespace {

// Category-level response tendencies shared by both synthetic players.
double Affinity(Category stimulus, Category response, bool long_serve) {
  using C = Category;
  static const std::map<C, std::map<C, double>> kTable = {
      {C::kServe, {{C::kDrop, 3}, {C::kLift, 3}, {C::kDrive, 1}, {C::kKill, 1}, {C::kClear, 1}}},
      {C::kDrop, {{C::kDrop, 3}, {C::kLift, 3}, {C::kKill, 1}, {C::kDrive, 1}, {C::kClear, 0.5}}},
      {C::kKill, {{C::kLift, 2}, {C::kBlock, 3}, {C::kDrive, 1}, {C::kDrop, 1}}},
      {C::kSmash, {{C::kBlock, 4}, {C::kLift, 3}, {C::kDrive, 1}, {C::kDrop, 1}}},
      {C::kClear, {{C::kSmash, 3}, {C::kDrop, 3}, {C::kClear, 2}, {C::kDrive, 0.5}}},
      {C::kDrive, {{C::kDrive, 3}, {C::kBlock, 1}, {C::kDrop, 1}, {C::kLift, 1}, {C::kKill, 1}}},
      {C::kLift, {{C::kSmash, 4}, {C::kDrop, 3}, {C::kClear, 2}, {C::kKill, 0.5}}},
      {C::kBlock, {{C::kLift, 3}, {C::kDrop, 2}, {C::kDrive, 1}, {C::kKill, 1}, {C::kClear, 0.5}}},
  };
  if (stimulus == C::kServe && long_serve && (response == C::kSmash || response == C::kClear)) {
    return 2.0;
  }
  const auto& row = kTable.at(stimulus);
  auto it = row.find(response);
  return it == row.end() ? 0.0 : it->second;
}

double WinRate(Category c) {
  switch (c) {
    case Category::kSmash:
      return 0.22;
    case Category::kKill:
      return 0.30;
    case Category::kDrop:
    case Category::kDrive:
      return 0.06;
    case Category::kBlock:
      return 0.05;
    case Category::kClear:
      return 0.03;
    case Category::kLift:
      return 0.02;
    case Category::kServe:
      return 0.01;
  }
  return 0.0;
}

double ErrorRate(Category c) {
  switch (c) {
    case Category::kSmash:
    case Category::kDrive:
      return 0.08;
    case Category::kDrop:
    case Category::kBlock:
      return 0.07;
    case Category::kKill:
      return 0.06;
    case Category::kClear:
      return 0.05;
    case Category::kLift:
      return 0.04;
    case Category::kServe:
      return 0.03;
  }
  return 0.0;
}

bool IsAttack(Category c) { return c == Category::kSmash || c == Category::kKill; }

struct Profile {
  std::vector<std::vector<double>> weights;  // [stimulus][response]
  std::vector<double> win;
  std::vector<double> error;
  double short_serve = 0.7;
};

Profile MakeProfile(const LegalityMatrix& legality, double soft_violation_rate,
                    std::mt19937_64& rng) {
  const Taxonomy& t = legality.taxonomy();
  const std::size_t n = t.size();
  Profile p;
  p.weights.assign(n, std::vector<double>(n, 0.0));
  std::vector<double> taste(n);
  for (auto& v : taste) v = 0.2 + Uniform01(rng);
  for (ShotId s : t.All()) {
    const bool long_serve = t.IsServe(s) && t.Name(s).find("long") != std::string::npos;
    double kept = 0;
    for (ShotId r : legality.HardLegalResponses(s)) {
      double w = Affinity(t.CategoryOf(s), t.CategoryOf(r), long_serve) * taste[r.index];
      if (!legality.IsLegalResponse(r, s)) w = soft_violation_rate;
      // Sparse habits: each player uses only some of the plausible shots.
      // Blocking a smash is kept by everyone.
      const bool habit =
          t.CategoryOf(s) == Category::kSmash && t.CategoryOf(r) == Category::kBlock;
      if (w > 0 && Uniform01(rng) < 0.45 && !habit) w = 0;
      p.weights[s.index][r.index] = w;
      kept += w;
    }
    if (kept == 0) {
      // Fall back to the strongest plausible response.
      ShotId best = legality.LegalResponses(s).front();
      double best_w = -1;
      for (ShotId r : legality.LegalResponses(s)) {
        const double w = Affinity(t.CategoryOf(s), t.CategoryOf(r), long_serve) * taste[r.index];
        if (w > best_w) best_w = w, best = r;
      }
      p.weights[s.index][best.index] = 1.0;
    }
  }
  p.win.resize(n);
  p.error.resize(n);
  for (ShotId s : t.All()) {
    p.win[s.index] = WinRate(t.CategoryOf(s)) * (0.7 + 0.6 * Uniform01(rng));
    p.error[s.index] = ErrorRate(t.CategoryOf(s)) * (0.7 + 0.6 * Uniform01(rng));
  }
  p.short_serve = 0.55 + 0.35 * Uniform01(rng);
  return p;
}

ShotId Draw(const std::vector<double>& weights, std::mt19937_64& rng) {
  double total = 0;
  for (double w : weights) total += w;
  double x = Uniform01(rng) * total;
  std::size_t last = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0) continue;
    last = i;
    if (x < weights[i]) return ShotId{i};
    x -= weights[i];
  }
  return ShotId{last};
}

}  // namespace

double Uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t UniformIndex(std::mt19937_64& rng, std::size_t n) {
  return static_cast<std::size_t>(Uniform01(rng) * static_cast<double>(n)) % n;
}

Dataset GenerateFixture(const FixtureOptions& options, std::shared_ptr<const Taxonomy> taxonomy) {
  const LegalityMatrix legality(std::move(taxonomy));
  const Taxonomy& t = legality.taxonomy();
  std::mt19937_64 rng(options.seed);
  const std::array<std::string, 2> ids = {options.focal.id, options.opponent.id};
  const std::array<Profile, 2> profiles = {
      MakeProfile(legality, options.soft_violation_rate, rng),
      MakeProfile(legality, options.soft_violation_rate, rng)};
  const std::vector<ShotId> serves = t.Serves();

  Dataset d(legality);
  d = d.WithPlayer(options.focal).WithPlayer(options.opponent);
  for (std::size_t mi = 0; mi < options.matches; ++mi) {
    Match match;
    match.match_id = "m" + std::to_string(mi + 1);
    match.players = ids;
    match.date = std::to_string(2011 + 3 * mi) + "-0" + std::to_string(3 + mi) + "-1" +
                 std::to_string(mi);
    std::size_t server = mi % 2;
    for (std::size_t ri = 0; ri < options.rallies_per_match; ++ri) {
      Rally rally;
      rally.rally_id = "r" + std::to_string(ri + 1);
      rally.server = ids[server];
      std::size_t actor = server;
      const Profile& sp = profiles[server];
      ShotId shot = serves.size() == 1 || Uniform01(rng) < sp.short_serve
                        ? serves.front()
                        : serves[1 + UniformIndex(rng, serves.size() - 1)];
      while (true) {
        rally.shots.push_back({ids[actor], shot, rally.shots.size()});
        const Profile& p = profiles[actor];
        const double u = Uniform01(rng);
        const bool forced_end = rally.shots.size() >= options.max_rally_length;
        if (u < p.win[shot.index]) {
          rally.outcome = {ids[actor], Termination::kWinnerShot};
          break;
        }
        if (u < p.win[shot.index] + p.error[shot.index] || forced_end) {
          const bool pressured =
              rally.shots.size() >= 2 && IsAttack(t.CategoryOf(rally.shots[rally.shots.size() - 2].shot));
          rally.outcome = {ids[1 - actor],
                           pressured ? Termination::kForcedError : Termination::kUnforcedError};
          break;
        }
        actor = 1 - actor;
        shot = Draw(profiles[actor].weights[shot.index], rng);
      }
      server = rally.outcome.winner == ids[0] ? 0 : 1;
      match.rallies.push_back(std::move(rally));
    }
    d = d.WithMatch(std::move(match));
  }
  return d;
}

}  // namespace rallycoach
