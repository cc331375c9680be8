// Copyright 2026 The osnsim Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "json.hpp"
#include "osnsim/error.hpp"
#include "osnsim/pipeline.hpp"

using namespace osnsim;
using namespace osnsim::pipeline;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string bad_config_path(const json& doc) {
  try {
    parse_config(doc);
  } catch (const Error& e) {
    if (e.code() == Errc::BadConfig) return e.path();
    return "wrong code";
  }
  return "accepted";
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("osnsim-" + tag + "-" + std::to_string(::getpid()))) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

// A small scenario with a training/test cut 48 ticks before the end.
RunConfig small_run(const fs::path& dir) {
  json doc = {{"seed", 5}, {"paths", {{"data_dir", dir.string()}}}, {"simulate", {{"ticks", 48}}}};
  doc["synth"] = {{"users", 40}, {"ticks", 1500}};
  auto cfg = parse_config(doc);
  cfg.synth.planted_edges.clear();
  for (std::size_t k = 0; k < 4; ++k) {
    cfg.synth.planted_edges.push_back({synth::user_id(2 * k), synth::user_id(2 * k + 1), 0.9, 1});
  }
  for (auto& s : cfg.synth.shock_schedule) s.tick %= 1400;
  const std::int64_t cut = cfg.synth.t0 + (1500 - 48) * cfg.tick_len;
  cfg.window.train_to = cut;
  cfg.window.test_from = cut;
  return cfg;
}

}  // namespace

TEST_CASE("config: defaults echo and round trip") {
  const auto cfg = parse_config(json::object());
  CHECK(cfg.seed == 1);
  CHECK(cfg.tick_len == 3600);
  CHECK(cfg.influence.nte_threshold == 0.2);
  CHECK(cfg.mix.full_model_shd_fraction == 0.10);
  CHECK(cfg.mix.ifn_shd_fraction == 0.90);
  CHECK(cfg.simulate.model == Model::Mbm);
  CHECK(cfg.synth.planted_edges.size() == 10);
  const auto echoed = to_json(cfg);
  for (const char* key : {"seed", "tick_len", "paths", "window", "influence", "shocks", "simulate", "mbm", "macm",
                          "mix", "evaluate", "synth"}) {
    CHECK(echoed.contains(key));
  }
  CHECK(echoed["mbm"]["node_add_rate"].is_null());
  const auto again = to_json(parse_config(json::parse(echoed.dump())));
  CHECK(again.dump() == echoed.dump());
  CHECK(config_hash(cfg) == config_hash(parse_config(json::parse(echoed.dump()))));
  auto other = cfg;
  other.seed = 2;
  CHECK(config_hash(other) != config_hash(cfg));
}

TEST_CASE("config: diagnostics name the JSON pointer") {
  CHECK(bad_config_path({{"bogus", 1}}) == "/bogus");
  CHECK(bad_config_path({{"simulate", {{"tick", 3}}}}) == "/simulate/tick");
  CHECK(bad_config_path({{"seed", "one"}}) == "/seed");
  CHECK(bad_config_path({{"seed", -1}}) == "/seed");
  CHECK(bad_config_path({{"simulate", {{"model", "abm"}}}}) == "/simulate/model");
  CHECK(bad_config_path({{"simulate", {{"model", "shd"}, {"mix_shd", true}}}}) == "/simulate/mix_shd");
  CHECK(bad_config_path({{"mix", {{"ifn_shd_fraction", 1.5}}}}) == "/mix/ifn_shd_fraction");
  CHECK(bad_config_path({{"paths", 3}}) == "/paths");
  CHECK(bad_config_path({{"evaluate", {{"rows", {"user/Nope"}}}}}) == "/evaluate/rows/0");
  CHECK(bad_config_path({{"synth", {{"planted_edges", {{{"source", "a"}, {"oops", 1}}}}}}}) ==
        "/synth/planted_edges/0/oops");
  CHECK(bad_config_path({{"window", {{"train_from", 10}, {"train_to", 5}}}}) == "/window/train_to");
  CHECK(bad_config_path({{"mbm", {{"age_rule", "sometimes"}}}}) == "/mbm/age_rule");
  CHECK(bad_config_path({{"a/b", 1}}) == "/a~1b");
  CHECK(bad_config_path({{"mbm", {{"removal_age", nullptr}}}}) == "accepted");
}

TEST_CASE("config: file and environment resolution") {
  TempDir tmp("config");
  {
    std::ofstream f(tmp.path / "run.json");
    f << R"({"paths": {"data_dir": "data"}, "seed": 9})";
  }
  auto doc = read_config_file(tmp.path / "run.json");
  CHECK(fs::path(doc["paths"]["data_dir"].get<std::string>()) == (tmp.path / "data").lexically_normal());
  {
    std::ofstream f(tmp.path / "plain.json");
    f << R"({"seed": 9})";
  }
  auto plain = read_config_file(tmp.path / "plain.json");
  CHECK(fs::path(plain["paths"]["data_dir"].get<std::string>()) == tmp.path);
  ::setenv(kDataDirEnv, "/srv/osnsim", 1);
  apply_environment(doc);
  ::unsetenv(kDataDirEnv);
  const auto cfg = parse_config(doc);
  CHECK(cfg.paths.data_dir == "/srv/osnsim");
  CHECK(resolve(cfg, "events.jsonl") == "/srv/osnsim/events.jsonl");
  CHECK(resolve(cfg, "/abs/x.csv") == "/abs/x.csv");
  {
    std::ofstream f(tmp.path / "broken.json");
    f << "{";
  }
  CHECK_THROWS_AS(read_config_file(tmp.path / "broken.json"), Error);
}

TEST_CASE("git blob hashes match git hash-object") {
  CHECK(git_blob_hash("") == "e69de29bb2d1d6434b8b29ae775ad8c2e48c5391");
  CHECK(git_blob_hash("hello\n") == "ce013625030ba8dba906f756967f9e9ca394464a");
  CHECK(git_blob_hash("what is up, doc?") == "bd9dbf5aae1a3862dd1526723246b20206e5fc37");
}

TEST_CASE("stages: synth through report with manifests") {
  TempDir tmp("stages");
  auto cfg = small_run(tmp.path);
  for (const auto& stage : {run_synth(cfg), run_influence(cfg), run_shocks(cfg)}) {
    for (const auto& out : stage.outputs) CHECK(fs::exists(out));
  }
  const auto training = load_training(cfg);
  const auto frame = training_frame(training, cfg);
  CHECK(frame.end_ts() == *cfg.window.train_to);
  for (const auto& e : training) CHECK(e.ts < *cfg.window.train_to);

  cfg.simulate.mix_shd = true;
  cfg.paths.sim = "mbm_mix.jsonl";
  const auto sim = run_simulate(cfg);
  const auto manifest_path = write_manifest(cfg, "simulate", sim);
  CHECK(manifest_path == tmp.path / "mbm_mix.jsonl.manifest.json");
  const auto manifest = json::parse(slurp(manifest_path));
  CHECK(manifest["seed"] == 5);
  CHECK(manifest["config_hash"] == config_hash(cfg));
  CHECK(manifest["config"]["mix"]["full_model_shd_fraction"] == 0.10);
  CHECK(manifest["config"]["mix"]["ifn_shd_fraction"] == 0.90);
  CHECK(manifest["extra"]["mix"]["applied_fraction"] == 0.10);
  const auto model_stream = manifest["extra"]["mix"]["model_stream"].get<std::set<std::string>>();
  const auto shd_stream = manifest["extra"]["mix"]["shd_stream"].get<std::set<std::string>>();
  CHECK_FALSE(shd_stream.empty());
  for (const auto& u : shd_stream) CHECK(model_stream.count(u) == 0);
  const auto sim_file = tmp.path / "mbm_mix.jsonl";
  CHECK(manifest["outputs"][sim_file.string()] == git_blob_hash(slurp(sim_file)));
  CHECK(manifest["inputs"][(tmp.path / "events.jsonl").string()] == git_blob_hash(slurp(tmp.path / "events.jsonl")));

  // Same config and seed: byte-identical primary artifact.
  const auto first = slurp(sim_file);
  run_simulate(cfg);
  CHECK(slurp(sim_file) == first);

  const auto forecast_start = *cfg.window.train_to;
  const auto forecast_end = forecast_start + cfg.simulate.ticks * cfg.tick_len;
  const auto events = load_events(sim_file).log;
  CHECK_FALSE(events.empty());
  for (const auto& e : events) {
    CHECK(e.ts >= forecast_start);
    CHECK(e.ts < forecast_end);
  }

  cfg.simulate.mix_shd = false;
  cfg.simulate.model = Model::Macm;
  cfg.paths.sim = "macm.jsonl";
  run_simulate(cfg);
  cfg.simulate.model = Model::Shd;
  cfg.paths.sim = "shd.jsonl";
  run_simulate(cfg);

  const auto eval = run_evaluate(cfg, {{"mbm", "mbm_mix.jsonl"}, {"macm", "macm.jsonl"}, {"shd", "shd.jsonl"}});
  CHECK(eval.outputs.size() == 2);
  std::ifstream report_in(resolve(cfg, cfg.paths.report));
  const auto report = metrics::read_report_csv(report_in);
  CHECK(report.models == std::vector<std::string>{"mbm", "macm", "shd"});
  CHECK(report.normalization == "across-models");
  const auto rendered = run_report(cfg);
  CHECK(slurp(rendered.outputs[0]).rfind("<svg", 0) == 0);
}

TEST_CASE("simulate: conservation, IFN restriction and SHD count") {
  TempDir tmp("simulate");
  auto cfg = small_run(tmp.path);
  run_synth(cfg);
  run_influence(cfg);
  const auto training = load_training(cfg);
  const auto frame = training_frame(training, cfg);
  std::ifstream net_in(resolve(cfg, cfg.paths.influence));
  const auto endogenous = read_network_csv(net_in);
  REQUIRE_FALSE(endogenous.edges.empty());

  cfg.simulate.mix_shd = true;
  auto mixed = simulate(training, frame, endogenous, {}, {}, cfg);
  REQUIRE(mixed.split);
  std::size_t model_kept = 0, shd_kept = 0;
  for (const auto& e : mixed.events) {
    const bool from_shd = e.id.rfind("shd-", 0) == 0;
    CHECK(mixed.split->less_active.count(e.actor) == (from_shd ? 1u : 0u));
    (from_shd ? shd_kept : model_kept)++;
  }
  CHECK(model_kept == mixed.model_events);
  CHECK(shd_kept == mixed.shd_events);
  CHECK(mixed.events.size() == mixed.model_events + mixed.shd_events);

  cfg.simulate.mix_shd = false;
  cfg.simulate.ifn = true;
  const auto ifn = simulate(training, frame, endogenous, {}, {}, cfg);
  REQUIRE(ifn.ifn);
  CHECK(*ifn.ifn == ifn_users(endogenous, cfg.simulate));
  std::set<std::string> training_users;
  for (const auto& e : training) training_users.insert(e.actor);
  for (const auto& e : ifn.events) {
    if (training_users.count(e.actor)) CHECK(ifn.ifn->count(e.actor) == 1);
  }

  cfg.simulate.ifn = false;
  cfg.simulate.model = Model::Shd;
  const auto shd = simulate(training, frame, endogenous, {}, {}, cfg);
  const auto window = shd::window_from_log(training, frame, cfg.simulate.shd_weeks);
  const auto horizon = cfg.simulate.ticks * cfg.tick_len;
  std::size_t expected = 0;
  for (const auto& e : window.events) {
    const auto offset = e.ts - window.start;
    const auto length = window.end - window.start;
    for (std::int64_t c = 0; c * length + offset < horizon; ++c) ++expected;
  }
  CHECK(shd.events.size() == expected);

  InfluenceNetwork empty;
  cfg.simulate.model = Model::Mbm;
  cfg.simulate.ifn = true;
  CHECK_THROWS_AS(simulate(training, frame, empty, {}, {}, cfg), Error);
}

TEST_CASE("evaluate: identical logs give an all-zero error column") {
  TempDir tmp("identity");
  auto cfg = small_run(tmp.path);
  cfg.window = {};
  run_synth(cfg);
  cfg.paths.truth = "events.jsonl";
  run_evaluate(cfg, {{"truth", "events.jsonl"}});
  std::ifstream in(resolve(cfg, cfg.paths.report));
  const auto report = metrics::read_report_csv(in);
  std::size_t scored = 0;
  for (const auto& e : report.entries) {
    if (!e.error) {
      CHECK_FALSE(e.note.empty());
      continue;
    }
    ++scored;
    INFO(e.metric);
    CHECK(*e.error == 0.0);
    CHECK(*e.normalized == 0.0);
  }
  CHECK(scored > 30);
}
