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

// osnsim: command-line driver for the simulation pipeline.
//
//   osnsim synth     [--out DIR]
//   osnsim ingest    --input FILE [--out FILE]
//   osnsim influence [--events FILE] [--out FILE]
//   osnsim shocks    [--events FILE] [--exogenous-dir DIR] [--out FILE]
//   osnsim simulate  --model {mbm,macm,shd} [--ifn] [--mix-shd] [--ticks N] [--out FILE]
//   osnsim evaluate  [--sim [NAME=]FILE]... [--truth FILE] [--out FILE]
//   osnsim report    [--in FILE]
//
// Every subcommand also takes --config FILE, --data-dir DIR and --seed N, and
// writes <primary output>.manifest.json. Failures print one JSON object on
// stderr and exit 2 for usage or config errors, 1 otherwise.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "osnsim/error.hpp"
#include "osnsim/pipeline.hpp"

namespace {

namespace pl = osnsim::pipeline;
using nlohmann::json;

struct Common {
  std::string config;
  std::string data_dir;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> tick_len;
  std::string platform;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config, "Run config JSON file")->check(CLI::ExistingFile);
  cmd->add_option("--data-dir", common.data_dir, "Base directory for relative paths");
  cmd->add_option("--seed", common.seed, "RNG seed");
  cmd->add_option("--tick-len", common.tick_len, "Tick length in seconds");
  cmd->add_option("--platform", common.platform, "Restrict to one platform (github, twitter, reddit)");
}

void set_path(json& doc, const char* section, const char* key, const std::string& value) {
  if (value.empty()) return;
  doc[section][key] = value;
}

json error_json(const std::string& code, const std::string& message, const std::string& path = {},
                std::size_t line = 0) {
  json e = {{"code", code}, {"message", message}};
  if (!path.empty()) e["path"] = path;
  if (line > 0) e["line"] = line;
  return {{"error", e}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Agent-based simulation of online social-network activity"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(pl::kVersion));

  Common common;
  json overrides = json::object();

  auto* synth = app.add_subcommand("synth", "Generate a synthetic scenario with planted structure");
  std::string synth_out;
  std::optional<std::size_t> synth_users;
  std::optional<std::size_t> synth_ticks;
  synth->add_option("--out", synth_out, "Output directory");
  synth->add_option("--users", synth_users, "Number of users");
  synth->add_option("--ticks", synth_ticks, "Number of ticks");

  auto* ingest = app.add_subcommand("ingest", "Validate, filter and sort an event log");
  std::string ingest_input;
  std::string ingest_out;
  bool strict = false;
  ingest->add_option("--input", ingest_input, "Raw event JSON-lines file")->required()->check(CLI::ExistingFile);
  ingest->add_option("--out", ingest_out, "Cleaned event log");
  ingest->add_flag("--strict", strict, "Fail on the first invalid line");

  auto* influence = app.add_subcommand("influence", "Build the endogenous influence network");
  std::string events_path;
  std::string influence_out;
  std::optional<double> nte_threshold;
  influence->add_option("--events", events_path, "Training event log");
  influence->add_option("--out", influence_out, "Edge-list CSV");
  influence->add_option("--nte-threshold", nte_threshold, "Minimum normalized transfer entropy");

  auto* shocks = app.add_subcommand("shocks", "Detect exogenous shocks and link them to users");
  std::string exogenous_dir;
  std::string shocks_out;
  shocks->add_option("--events", events_path, "Training event log");
  shocks->add_option("--exogenous-dir", exogenous_dir, "Directory of <source>.csv series");
  shocks->add_option("--out", shocks_out, "Anomaly mask JSON-lines");

  auto* simulate = app.add_subcommand("simulate", "Run a model past the end of the training log");
  std::string model;
  bool ifn = false;
  bool mix_shd = false;
  std::optional<std::int64_t> sim_ticks;
  std::string sim_out;
  simulate->add_option("--model", model, "mbm, macm or shd")->check(CLI::IsMember({"mbm", "macm", "shd"}));
  simulate->add_flag("--ifn", ifn, "Initialize from the influential users only");
  simulate->add_flag("--mix-shd", mix_shd, "Hand less-active users to the SHD replay");
  simulate->add_option("--ticks", sim_ticks, "Forecast horizon in ticks");
  simulate->add_option("--events", events_path, "Training event log");
  simulate->add_option("--out", sim_out, "Simulated event log");

  auto* evaluate = app.add_subcommand("evaluate", "Score simulated logs against ground truth");
  std::vector<std::string> sims;
  std::string truth;
  std::string report_out;
  evaluate->add_option("--sim", sims, "Simulated log, optionally NAME=FILE; repeatable");
  evaluate->add_option("--truth", truth, "Ground-truth event log");
  evaluate->add_option("--out", report_out, "Report CSV; a JSON twin is written beside it");

  auto* report = app.add_subcommand("report", "Render a report CSV as JSON and SVG");
  std::string report_in;
  report->add_option("--in", report_in, "Report CSV");

  for (auto* cmd : {synth, ingest, influence, shocks, simulate, evaluate, report}) add_common(cmd, common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << error_json("Usage", e.what()).dump() << '\n';
    return 2;
  }

  auto* cmd = app.get_subcommands().front();
  const std::string name = cmd->get_name();
  try {
    json doc = common.config.empty() ? json::object() : pl::read_config_file(common.config);
    pl::apply_environment(doc);
    if (common.seed) doc["seed"] = *common.seed;
    if (common.tick_len) doc["tick_len"] = *common.tick_len;
    if (!common.platform.empty()) doc["platform"] = common.platform;
    set_path(doc, "paths", "data_dir", common.data_dir);
    set_path(doc, "paths", "events", events_path);

    if (name == "synth") {
      set_path(doc, "paths", "synth_dir", synth_out);
      if (synth_users) doc["synth"]["users"] = *synth_users;
      if (synth_ticks) doc["synth"]["ticks"] = *synth_ticks;
    } else if (name == "ingest") {
      set_path(doc, "paths", "events", ingest_out);
      if (strict) doc["strict"] = true;
    } else if (name == "influence") {
      set_path(doc, "paths", "influence", influence_out);
      if (nte_threshold) doc["influence"]["nte_threshold"] = *nte_threshold;
    } else if (name == "shocks") {
      set_path(doc, "paths", "exogenous_dir", exogenous_dir);
      set_path(doc, "paths", "masks", shocks_out);
    } else if (name == "simulate") {
      if (!model.empty()) doc["simulate"]["model"] = model;
      if (ifn) doc["simulate"]["ifn"] = true;
      if (mix_shd) doc["simulate"]["mix_shd"] = true;
      if (sim_ticks) doc["simulate"]["ticks"] = *sim_ticks;
      set_path(doc, "paths", "sim", sim_out);
    } else if (name == "evaluate") {
      set_path(doc, "paths", "truth", truth);
      set_path(doc, "paths", "report", report_out);
    } else if (name == "report") {
      set_path(doc, "paths", "report", report_in);
    }

    const auto config = pl::parse_config(doc);
    pl::StageResult result;
    if (name == "synth") {
      result = pl::run_synth(config);
    } else if (name == "ingest") {
      result = pl::run_ingest(config, ingest_input);
    } else if (name == "influence") {
      result = pl::run_influence(config);
    } else if (name == "shocks") {
      result = pl::run_shocks(config);
    } else if (name == "simulate") {
      result = pl::run_simulate(config);
    } else if (name == "evaluate") {
      std::vector<std::pair<std::string, std::filesystem::path>> named;
      for (const auto& s : sims) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) {
          named.emplace_back(std::filesystem::path(s).stem().string(), s);
        } else {
          named.emplace_back(s.substr(0, eq), s.substr(eq + 1));
        }
      }
      result = pl::run_evaluate(config, named);
    } else {
      result = pl::run_report(config);
    }
    const auto manifest = pl::write_manifest(config, name, result);
    json summary = {{"subcommand", name}, {"manifest", manifest.string()}};
    for (const auto& out : result.outputs) summary["outputs"].push_back(out.string());
    std::cout << summary.dump() << '\n';
    return 0;
  } catch (const osnsim::Error& e) {
    std::cerr << error_json(std::string(osnsim::to_string(e.code())), e.what(), e.path(), e.line()).dump()
              << '\n';
    return e.code() == osnsim::Errc::BadConfig ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << error_json("Internal", e.what()).dump() << '\n';
    return 1;
  }
}
