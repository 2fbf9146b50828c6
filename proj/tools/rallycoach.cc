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

// rallycoach command line: ingest, model build, recommend, simulate,
// frequencies, fixture and serve.

#include <csignal>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "rallycoach/coach/server.h"
#include "rallycoach/coach/session_store.h"
#include "rallycoach/config.h"
#include "rallycoach/estimation.h"
#include "rallycoach/fixture.h"
#include "rallycoach/json_io.h"
#include "rallycoach/match_data.h"
#include "rallycoach/recommender.h"
#include "rallycoach/simulator.h"

namespace rc = rallycoach;
using nlohmann::json;

namespace {

constexpr const char* kDataDirEnv = "RALLYCOACH_DATA_DIR";

rc::coach::CoachServer* g_server = nullptr;

void OnSignal(int) {
  if (g_server != nullptr) g_server->Stop();
}

std::vector<std::string> SplitComma(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

rc::RewardConfig ParseRewards(const std::string& text, rc::RewardConfig base) {
  const auto parts = SplitComma(text);
  if (parts.size() != 4) throw rc::ConfigError("--rewards expects hp,mp,mn,ln");
  double v[4];
  for (int i = 0; i < 4; ++i) {
    try {
      std::size_t used = 0;
      v[i] = std::stod(parts[i], &used);
      if (used != parts[i].size()) throw std::invalid_argument(parts[i]);
    } catch (const std::exception&) {
      throw rc::ConfigError("--rewards: '" + parts[i] + "' is not a number");
    }
  }
  base.hp = v[0];
  base.mp = v[1];
  base.mn = v[2];
  base.ln = v[3];
  base.Validate();
  return base;
}

json RewardsJson(const rc::RewardConfig& r) {
  return {{"hp", r.hp}, {"mp", r.mp}, {"mn", r.mn}, {"ln", r.ln}, {"neutral", r.neutral}};
}

struct ModelFile {
  rc::ConditionalModel model;
  std::optional<rc::RewardConfig> rewards;
};

ModelFile ReadModelFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw rc::Error("cannot read '" + path + "'");
  json j = json::parse(in, nullptr, false);
  if (j.is_discarded()) throw rc::ParseError(path + ": not valid JSON");
  ModelFile f{rc::ModelFromJson(j), std::nullopt};
  if (j.contains("rewards")) {
    const json& r = j.at("rewards");
    rc::RewardConfig cfg;
    cfg.hp = r.at("hp").get<double>();
    cfg.mp = r.at("mp").get<double>();
    cfg.mn = r.at("mn").get<double>();
    cfg.ln = r.at("ln").get<double>();
    cfg.neutral = r.value("neutral", 0.0);
    f.rewards = cfg;
  }
  return f;
}

void WriteText(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw rc::Error("cannot write '" + path + "'");
}

void PrintWarnings(const std::vector<rc::Diagnostic>& warnings) {
  for (const auto& w : warnings) {
    std::cerr << "warning: " << w.source << ":" << w.line << ": " << w.message << "\n";
  }
}

rc::Dataset ReadDatasets(const std::vector<std::string>& files, const rc::EngineConfig& cfg,
                         bool quiet = false) {
  std::vector<std::filesystem::path> paths(files.begin(), files.end());
  rc::LoadOptions options;
  options.soft_rules = cfg.soft_rules;
  std::vector<rc::Diagnostic> warnings;
  rc::Dataset d = rc::LoadDatasets(paths, options, &warnings);
  if (!quiet) PrintWarnings(warnings);
  return d;
}

std::vector<rc::ShotEvent> ParseSeed(const std::string& text, const std::string& focal,
                                     const std::string& opponent, const rc::Taxonomy& taxonomy) {
  std::vector<rc::ShotEvent> seed;
  for (const std::string& item : SplitComma(text)) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) {
      throw rc::ValidationError("seed shot '" + item + "' must look like actor:shot");
    }
    std::string actor = item.substr(0, colon);
    if (actor == "p") actor = focal;
    if (actor == "o") actor = opponent;
    if (actor != focal && actor != opponent) {
      throw rc::UnknownPlayerError("seed actor '" + actor + "' is neither " + focal + " nor " +
                                   opponent);
    }
    seed.push_back({actor, taxonomy.Parse(item.substr(colon + 1)), seed.size()});
  }
  if (seed.empty()) throw rc::ValidationError("--seed needs at least one shot");
  return seed;
}

bool ParseOnOff(const std::string& v) {
  if (v == "on" || v == "true") return true;
  if (v == "off" || v == "false") return false;
  throw rc::ConfigError("expected on|off, got '" + v + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"rallycoach: shot recommendation and rally simulation from match logs"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "Config file (key = value lines)")
      ->check(CLI::ExistingFile);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "Validate and merge rally-log files");
  std::vector<std::string> ingest_files;
  std::string ingest_out;
  bool validate_only = false;
  ingest->add_option("files", ingest_files, "Rally-log files")->required();
  auto* out_opt = ingest->add_option("--out", ingest_out, "Write the merged canonical log here");
  ingest->add_flag("--validate-only", validate_only, "Only validate")->excludes(out_opt);

  // model build
  auto* model = app.add_subcommand("model", "Model operations");
  model->require_subcommand(1);
  auto* build = model->add_subcommand("build", "Estimate a conditional model");
  std::vector<std::string> build_datasets;
  std::string responder, stimulator, build_out, build_rewards;
  std::optional<double> build_alpha;
  build->add_option("--dataset", build_datasets, "Rally-log files")->required();
  build->add_option("--responder", responder, "Player whose responses are counted")->required();
  build->add_option("--stimulator", stimulator, "Player whose shots are answered")->required();
  build->add_option("--alpha", build_alpha, "Additive smoothing")->check(CLI::NonNegativeNumber);
  build->add_option("--rewards", build_rewards, "Reward values hp,mp,mn,ln");
  build->add_option("--out", build_out, "Model JSON output")->required();

  // recommend
  auto* recommend = app.add_subcommand("recommend", "Best responses from a model");
  std::string rec_model, rec_stimulus, rec_format = "text";
  bool rec_table = false, rec_serve = false;
  std::optional<std::size_t> rec_k;
  recommend->add_option("--model", rec_model, "Model JSON")->required();
  auto* stim_opt = recommend->add_option("--stimulus", rec_stimulus, "Opponent shot to answer");
  auto* table_opt = recommend->add_flag("--table", rec_table, "Every observed stimulus");
  recommend->add_flag("--serve", rec_serve, "Rank serves")->excludes(stim_opt)->excludes(table_opt);
  stim_opt->excludes(table_opt);
  recommend->add_option("--k", rec_k, "Suggestions per stimulus")->check(CLI::PositiveNumber);
  recommend->add_option("--format", rec_format, "text|csv|json");

  // simulate
  auto* simulate = app.add_subcommand("simulate", "Roll out a rally by backward induction");
  std::string sim_model_p, sim_model_o, sim_seed, sim_format = "table", sim_live, sim_policy,
      sim_rewards;
  std::optional<std::size_t> sim_steps, sim_depth;
  simulate->add_option("--model-p", sim_model_p, "Focal player's model")->required();
  simulate->add_option("--model-o", sim_model_o, "Opponent's model")->required();
  simulate->add_option("--seed", sim_seed, "Seed shots, e.g. p:backhand_short_serve")
      ->required();
  simulate->add_option("--steps", sim_steps, "Focal shots to predict")
      ->check(CLI::PositiveNumber);
  simulate->add_option("--depth", sim_depth, "Lookahead depth")->check(CLI::PositiveNumber);
  simulate->add_option("--live-update", sim_live, "on|off");
  simulate->add_option("--opponent-policy", sim_policy, "best-own-utility|most-probable");
  simulate->add_option("--rewards", sim_rewards, "Reward values hp,mp,mn,ln");
  simulate->add_option("--format", sim_format, "table|json");

  // frequencies
  auto* freq = app.add_subcommand("frequencies", "Shot frequency report for two players");
  std::vector<std::string> freq_datasets;
  std::string freq_a, freq_b, freq_format = "csv";
  freq->add_option("--dataset", freq_datasets, "Rally-log files")->required();
  freq->add_option("--player-a", freq_a, "First player")->required();
  freq->add_option("--player-b", freq_b, "Second player")->required();
  freq->add_option("--format", freq_format, "text|csv|json");

  // fixture
  auto* fixture = app.add_subcommand("fixture", "Generate the synthetic fixture dataset");
  rc::FixtureOptions fx;
  std::string fixture_out;
  fixture->add_option("--seed", fx.seed, "RNG seed");
  fixture->add_option("--matches", fx.matches, "Matches")->check(CLI::PositiveNumber);
  fixture->add_option("--rallies", fx.rallies_per_match, "Rallies per match")
      ->check(CLI::PositiveNumber);
  fixture->add_option("--out", fixture_out, "Output file (default stdout)");

  // serve
  auto* serve = app.add_subcommand("serve", "Run the coaching HTTP service");
  int port = 8080;
  std::string host = "127.0.0.1", serve_dataset, data_dir;
  serve->add_option("--port", port, "TCP port (0 picks a free one)");
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--dataset", serve_dataset, "Default dataset for new sessions");
  serve->add_option("--data-dir", data_dir,
                    std::string("Session log directory (default: $") + kDataDirEnv + ")");

  CLI11_PARSE(app, argc, argv);

  try {
    rc::EngineConfig cfg;
    if (!config_path.empty()) cfg = rc::LoadConfig(config_path);
    cfg.Finalize();

    if (*ingest) {
      std::vector<rc::Diagnostic> warnings;
      std::vector<std::filesystem::path> paths(ingest_files.begin(), ingest_files.end());
      rc::LoadOptions options;
      options.soft_rules = cfg.soft_rules;
      rc::Dataset d = rc::LoadDatasets(paths, options, &warnings);
      PrintWarnings(warnings);
      std::cerr << d.players().size() << " players, " << d.matches().size() << " matches, "
                << d.RallyCount() << " rallies, " << d.ShotCount() << " shots\n";
      if (!validate_only && !ingest_out.empty()) WriteText(ingest_out, rc::WriteDataset(d));
      return 0;
    }

    if (*model) {
      rc::Dataset d = ReadDatasets(build_datasets, cfg);
      const double alpha = build_alpha.value_or(cfg.alpha);
      const rc::RewardConfig rewards =
          build_rewards.empty() ? cfg.rewards : ParseRewards(build_rewards, cfg.rewards);
      json j = rc::ModelToJson(rc::BuildModel(d, responder, stimulator, alpha));
      j["rewards"] = RewardsJson(rewards);
      WriteText(build_out, j.dump(2) + "\n");
      return 0;
    }

    if (*recommend) {
      ModelFile f = ReadModelFile(rec_model);
      const rc::ConditionalModel& m = f.model;
      const std::size_t k = rec_k.value_or(cfg.k);
      const rc::ReportFormat format = rc::ParseReportFormat(rec_format);
      const rc::LegalityMatrix matrix = m.legality().WithSoftRules(cfg.soft_rules);
      if (rec_table) {
        std::cout << rc::FormatRecommendationTable(rc::RecommendationTable(m, k, matrix),
                                                   m.taxonomy(), k, format);
      } else if (rec_serve) {
        std::cout << rc::FormatRecommendation(rc::ServeChoice(m, k), m.taxonomy(), format);
      } else if (!rec_stimulus.empty()) {
        const rc::ShotId s = m.taxonomy().Parse(rec_stimulus);
        std::cout << rc::FormatRecommendation(rc::BestResponse(m, s, k, matrix), m.taxonomy(),
                                              format);
      } else {
        throw rc::ConfigError("recommend needs --stimulus, --table or --serve");
      }
      return 0;
    }

    if (*simulate) {
      ModelFile p = ReadModelFile(sim_model_p);
      ModelFile o = ReadModelFile(sim_model_o);
      rc::SimConfig sim = cfg.sim;
      sim.rewards = p.rewards.value_or(cfg.rewards);
      if (!sim_rewards.empty()) sim.rewards = ParseRewards(sim_rewards, sim.rewards);
      if (sim_steps) sim.step_limit = *sim_steps;
      if (sim_depth) sim.depth = *sim_depth;
      if (!sim_live.empty()) sim.live_update = ParseOnOff(sim_live);
      if (!sim_policy.empty()) sim.opponent_policy = rc::ParseOpponentPolicy(sim_policy);
      sim.Validate();
      const auto seed = ParseSeed(sim_seed, p.model.responder(), p.model.stimulator(),
                                  p.model.taxonomy());
      const rc::Rollout r = rc::Simulate(p.model, o.model, seed, sim);
      std::cout << rc::FormatRollout(r, p.model.taxonomy(), rc::ParseRolloutFormat(sim_format));
      return 0;
    }

    if (*freq) {
      rc::Dataset d = ReadDatasets(freq_datasets, cfg);
      std::cout << rc::FormatShotFrequencies(d.taxonomy(), freq_a, rc::ShotFrequencies(d, freq_a),
                                             freq_b, rc::ShotFrequencies(d, freq_b),
                                             rc::ParseReportFormat(freq_format));
      return 0;
    }

    if (*fixture) {
      WriteText(fixture_out, rc::WriteDataset(rc::GenerateFixture(fx)));
      return 0;
    }

    if (*serve) {
      if (data_dir.empty()) {
        const char* env = std::getenv(kDataDirEnv);
        data_dir = env != nullptr ? env : "rallycoach-data";
      }
      rc::coach::StoreOptions options;
      options.data_dir = data_dir;
      options.defaults = cfg;
      options.load.soft_rules = cfg.soft_rules;
      if (!serve_dataset.empty()) options.default_dataset = serve_dataset;
      rc::coach::SessionStore store(options);
      const std::size_t restored = store.LoadAll();
      rc::coach::CoachServer server(store);
      g_server = &server;
      std::signal(SIGINT, OnSignal);
      std::signal(SIGTERM, OnSignal);
      const int bound = port == 0 ? server.BindToAnyPort(host) : port;
      std::cerr << "rallycoach serving on http://" << host << ":" << bound << " (data dir "
                << data_dir << ", " << restored << " sessions restored)\n";
      const bool ok = port == 0 ? server.ListenAfterBind() : server.Listen(host, port);
      g_server = nullptr;
      if (!ok && port != 0) {
        std::cerr << "error: cannot listen on " << host << ":" << port << "\n";
        return 1;
      }
      return 0;
    }
  } catch (const rc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
