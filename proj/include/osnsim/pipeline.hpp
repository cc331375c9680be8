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

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "osnsim/exogenous.hpp"
#include "osnsim/influence.hpp"
#include "osnsim/ingest.hpp"
#include "osnsim/macm.hpp"
#include "osnsim/mbm.hpp"
#include "osnsim/metrics.hpp"
#include "osnsim/shd.hpp"
#include "osnsim/synth.hpp"

namespace osnsim::pipeline {

inline constexpr const char* kDataDirEnv = "OSNSIM_DATA_DIR";
inline constexpr const char* kVersion = "0.1.0";

enum class Model : std::uint8_t { Mbm, Macm, Shd };

std::string_view to_string(Model model);

/// Relative paths resolve against `data_dir`.
struct Paths {
  std::filesystem::path data_dir = ".";
  std::filesystem::path events = "events.jsonl";
  std::filesystem::path exogenous_dir = "exogenous";
  std::filesystem::path rejects = "rejects.jsonl";
  std::filesystem::path influence = "influence.csv";
  std::filesystem::path exogenous_influence = "exogenous_influence.csv";
  std::filesystem::path masks = "masks.jsonl";
  std::filesystem::path sim = "simulated.jsonl";
  std::filesystem::path truth = "events.jsonl";
  std::filesystem::path report = "report.csv";
  std::filesystem::path synth_dir = ".";
};

/// Half-open UTC second bounds selecting training and test events.
struct Window {
  std::optional<std::int64_t> train_from;
  std::optional<std::int64_t> train_to;
  std::optional<std::int64_t> test_from;
  std::optional<std::int64_t> test_to;
};

struct SimulateOptions {
  Model model = Model::Mbm;
  std::int64_t ticks = 168;
  bool ifn = false;
  bool mix_shd = false;
  std::size_t ifn_seeds = 10;
  std::size_t ifn_waves = 2;
  int shd_weeks = 4;
};

/// Every knob of a run. Defaults are echoed verbatim by `to_json`.
struct RunConfig {
  std::uint64_t seed = 1;
  std::int64_t tick_len = 3600;
  Paths paths;
  Window window;
  std::optional<Platform> platform;
  bool strict = false;
  InfluenceConfig influence;
  ShockConfig shocks;
  SimulateOptions simulate;
  mbm::Config mbm;
  macm::Config macm;
  shd::MixConfig mix;
  metrics::MetricSuite evaluate;
  synth::ScenarioConfig synth;
};

/// Parses a run config. Unknown keys and type mismatches throw BadConfig
/// naming the offending JSON pointer. Missing keys keep their defaults; a
/// "standard" synth preset fills absent edge and shock lists from
/// synth::standard_scenario(seed).
RunConfig parse_config(const nlohmann::json& doc);

/// Reads a config file. A relative /paths/data_dir, or its absence, resolves
/// against the file's directory.
nlohmann::json read_config_file(const std::filesystem::path& path);

/// Sets /paths/data_dir from the data-directory environment variable, if set.
void apply_environment(nlohmann::json& doc);

/// Fully resolved config, every field present.
nlohmann::ordered_json to_json(const RunConfig& config);

std::filesystem::path resolve(const RunConfig& config, const std::filesystem::path& path);

/// Hex SHA-1 over "blob <size>\0<bytes>", matching `git hash-object`.
std::string git_blob_hash(std::string_view bytes);
std::string git_blob_hash_file(const std::filesystem::path& path);

/// SHA-1 of the compact dump of the resolved config.
std::string config_hash(const RunConfig& config);

struct StageResult {
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  nlohmann::ordered_json extra = nlohmann::ordered_json::object();
};

/// Writes `<first output>.manifest.json`: tool version, subcommand, seed,
/// resolved config and its hash, input and output blob hashes, extra stage
/// data, and a creation timestamp. Returns the manifest path.
std::filesystem::path write_manifest(const RunConfig& config, const std::string& subcommand,
                                     const StageResult& result);

/// Frame over the training events, stretched to `window.train_to` when set.
TickFrame training_frame(const EventLog& training, const RunConfig& config);

/// Training frame extended by the forecast horizon; shock masks live here.
TickFrame forecast_frame(const TickFrame& training, const RunConfig& config);

EventLog load_training(const RunConfig& config);
EventLog load_truth(const RunConfig& config);

/// Users kept by IFN initialization: the top `ifn_seeds` sources by outgoing
/// nte, snowball-sampled for `ifn_waves` waves.
std::set<ActorId> ifn_users(const InfluenceNetwork& endogenous, const SimulateOptions& options);

struct SimulationResult {
  EventLog events;
  std::size_t model_events = 0;
  std::size_t shd_events = 0;
  std::optional<UserSplit> split;  // set when mixing
  std::optional<std::set<ActorId>> ifn;
};

/// Runs the configured model on `training`, forecasting `simulate.ticks`
/// ticks from the end of `frame`, then mixes in SHD replay when asked.
SimulationResult simulate(const EventLog& training, const TickFrame& frame,
                          const InfluenceNetwork& endogenous, const InfluenceNetwork& exogenous,
                          std::span<const BinarySeries> masks, const RunConfig& config);

/// File-level stages. Each reads and writes the configured paths.
StageResult run_synth(const RunConfig& config);
StageResult run_ingest(const RunConfig& config, const std::filesystem::path& input);
StageResult run_influence(const RunConfig& config);
StageResult run_shocks(const RunConfig& config);
StageResult run_simulate(const RunConfig& config);
StageResult run_evaluate(const RunConfig& config,
                         const std::vector<std::pair<std::string, std::filesystem::path>>& sims);
StageResult run_report(const RunConfig& config);

}  // namespace osnsim::pipeline
