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

#include "osnsim/pipeline.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iterator>
#include <sstream>

#include "osnsim/error.hpp"

namespace osnsim::pipeline {
namespace {

using nlohmann::json;
using nlohmann::ordered_json;
namespace fs = std::filesystem;

[[noreturn]] void bad(const std::string& pointer, const std::string& what) {
  throw Error(Errc::BadConfig, (pointer.empty() ? "/" : pointer) + ": " + what, 0,
              pointer.empty() ? "/" : pointer);
}

std::string escape_key(const std::string& key) {
  std::string out;
  for (char c : key) {
    if (c == '~') {
      out += "~0";
    } else if (c == '/') {
      out += "~1";
    } else {
      out += c;
    }
  }
  return out;
}

void read_value(const json& v, const std::string& ptr, bool& out) {
  if (!v.is_boolean()) bad(ptr, "expected boolean");
  out = v.get<bool>();
}

void read_value(const json& v, const std::string& ptr, double& out) {
  if (!v.is_number()) bad(ptr, "expected number");
  out = v.get<double>();
}

void read_value(const json& v, const std::string& ptr, std::uint64_t& out) {
  if (!v.is_number_integer() || (!v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
    bad(ptr, "expected non-negative integer");
  }
  out = v.get<std::uint64_t>();
}

void read_value(const json& v, const std::string& ptr, std::uint32_t& out) {
  std::uint64_t wide = 0;
  read_value(v, ptr, wide);
  if (wide > UINT32_MAX) bad(ptr, "integer out of range");
  out = static_cast<std::uint32_t>(wide);
}

void read_value(const json& v, const std::string& ptr, std::int64_t& out) {
  if (!v.is_number_integer()) bad(ptr, "expected integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(INT64_MAX)) {
    bad(ptr, "integer out of range");
  }
  out = v.get<std::int64_t>();
}

void read_value(const json& v, const std::string& ptr, int& out) {
  std::int64_t wide = 0;
  read_value(v, ptr, wide);
  if (wide < INT32_MIN || wide > INT32_MAX) bad(ptr, "integer out of range");
  out = static_cast<int>(wide);
}

void read_value(const json& v, const std::string& ptr, std::string& out) {
  if (!v.is_string()) bad(ptr, "expected string");
  out = v.get<std::string>();
}

void read_value(const json& v, const std::string& ptr, fs::path& out) {
  std::string text;
  read_value(v, ptr, text);
  if (text.empty()) bad(ptr, "path must not be empty");
  out = text;
}

void read_value(const json& v, const std::string& ptr, Platform& out) {
  std::string text;
  read_value(v, ptr, text);
  auto p = parse_platform(text);
  if (!p) bad(ptr, "unknown platform '" + text + "' (github, twitter, reddit)");
  out = *p;
}

void read_value(const json& v, const std::string& ptr, Model& out) {
  std::string text;
  read_value(v, ptr, text);
  for (Model m : {Model::Mbm, Model::Macm, Model::Shd}) {
    if (to_string(m) == text) {
      out = m;
      return;
    }
  }
  bad(ptr, "unknown model '" + text + "' (mbm, macm, shd)");
}

constexpr std::pair<mbm::AgeRule, const char*> kAgeRules[] = {
    {mbm::AgeRule::ActivitySplit, "activity_split"},
    {mbm::AgeRule::ActivityOnly, "activity_only"},
    {mbm::AgeRule::BulkOnly, "bulk_only"},
};

std::string age_rule_name(mbm::AgeRule rule) {
  for (const auto& [r, name] : kAgeRules) {
    if (r == rule) return name;
  }
  return "activity_split";
}

void read_value(const json& v, const std::string& ptr, mbm::AgeRule& out) {
  std::string text;
  read_value(v, ptr, text);
  for (const auto& [r, name] : kAgeRules) {
    if (text == name) {
      out = r;
      return;
    }
  }
  bad(ptr, "unknown age_rule '" + text + "' (activity_split, activity_only, bulk_only)");
}

template <class T>
void read_value(const json& v, const std::string& ptr, std::optional<T>& out) {
  if (v.is_null()) {
    out.reset();
    return;
  }
  T value{};
  read_value(v, ptr, value);
  out = value;
}

// One JSON object being consumed; leftover keys are reported by finish().
class Section {
 public:
  Section(const json& node, std::string pointer) : node_(&node), pointer_(std::move(pointer)) {
    if (!node.is_object()) bad(pointer_, "expected object");
  }

  bool has(const std::string& key) const { return node_->contains(key); }
  std::string pointer(const std::string& key) const { return pointer_ + "/" + escape_key(key); }

  template <class T>
  void get(const std::string& key, T& out) {
    seen_.insert(key);
    auto it = node_->find(key);
    if (it == node_->end()) return;
    read_value(*it, pointer(key), out);
  }

  const json* raw(const std::string& key) {
    seen_.insert(key);
    auto it = node_->find(key);
    return it == node_->end() ? nullptr : &*it;
  }

  Section child(const std::string& key) {
    static const json kEmpty = json::object();
    seen_.insert(key);
    auto it = node_->find(key);
    return it == node_->end() ? Section(kEmpty, pointer(key)) : Section(*it, pointer(key));
  }

  void finish() const {
    for (const auto& [key, value] : node_->items()) {
      if (!seen_.count(key)) bad(pointer(key), "unknown key");
    }
  }

 private:
  const json* node_;
  std::string pointer_;
  std::set<std::string> seen_;
};

template <class T>
ordered_json optional_json(const std::optional<T>& v) {
  return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + path.string(), 0, path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::ofstream open_out(const fs::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string(), 0, path.string());
  return out;
}

fs::path with_extension(fs::path path, const char* ext) {
  path.replace_extension(ext);
  return path;
}

InfluenceNetwork read_network_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot read " + path.string(), 0, path.string());
  return read_network_csv(in);
}

std::vector<BinarySeries> binary_users(const EventLog& log, const TickFrame& frame,
                                       std::uint32_t threshold) {
  std::vector<BinarySeries> out;
  for (const auto& [actor, series] : bin_activity(log, frame)) {
    out.push_back(binarize(series, threshold));
  }
  return out;
}

EventLog keep_actors(const EventLog& log, const std::set<ActorId>& actors) {
  EventLog out;
  for (const auto& e : log) {
    if (actors.count(e.actor)) out.push_back(e);
  }
  return out;
}

std::vector<fs::path> exogenous_files(const fs::path& dir) {
  std::vector<fs::path> out;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".csv") out.push_back(entry.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string_view to_string(Model model) {
  switch (model) {
    case Model::Mbm: return "mbm";
    case Model::Macm: return "macm";
    case Model::Shd: return "shd";
  }
  return "mbm";
}

RunConfig parse_config(const json& doc) {
  RunConfig c;
  Section root(doc, "");
  root.get("seed", c.seed);
  root.get("tick_len", c.tick_len);
  if (c.tick_len < 1) bad("/tick_len", "must be >= 1");
  root.get("platform", c.platform);
  root.get("strict", c.strict);

  {
    auto s = root.child("paths");
    s.get("data_dir", c.paths.data_dir);
    s.get("events", c.paths.events);
    s.get("exogenous_dir", c.paths.exogenous_dir);
    s.get("rejects", c.paths.rejects);
    s.get("influence", c.paths.influence);
    s.get("exogenous_influence", c.paths.exogenous_influence);
    s.get("masks", c.paths.masks);
    s.get("sim", c.paths.sim);
    s.get("truth", c.paths.truth);
    s.get("report", c.paths.report);
    s.get("synth_dir", c.paths.synth_dir);
    s.finish();
  }
  {
    auto s = root.child("window");
    s.get("train_from", c.window.train_from);
    s.get("train_to", c.window.train_to);
    s.get("test_from", c.window.test_from);
    s.get("test_to", c.window.test_to);
    s.finish();
    auto ordered = [](const auto& lo, const auto& hi) { return !lo || !hi || *lo < *hi; };
    if (!ordered(c.window.train_from, c.window.train_to)) bad("/window/train_to", "must exceed train_from");
    if (!ordered(c.window.test_from, c.window.test_to)) bad("/window/test_to", "must exceed test_from");
  }
  {
    auto s = root.child("influence");
    s.get("lag", c.influence.lag);
    s.get("nte_threshold", c.influence.nte_threshold);
    s.get("binarize_threshold", c.influence.binarize_threshold);
    s.get("threads", c.influence.threads);
    s.finish();
    if (c.influence.lag < 1) bad("/influence/lag", "must be >= 1");
    c.influence.tick_len = c.tick_len;
  }
  {
    auto s = root.child("shocks");
    s.get("order", c.shocks.order);
    s.get("cutoff_frac", c.shocks.cutoff_frac);
    s.get("window", c.shocks.window);
    s.get("z_threshold", c.shocks.z_threshold);
    s.get("magnitude_floor", c.shocks.magnitude_floor);
    s.finish();
    if (c.shocks.order < 1) bad("/shocks/order", "must be >= 1");
    if (!(c.shocks.cutoff_frac > 0.0 && c.shocks.cutoff_frac < 0.5)) {
      bad("/shocks/cutoff_frac", "must be in (0, 0.5)");
    }
    if (c.shocks.window < 2) bad("/shocks/window", "must be >= 2");
  }
  {
    auto s = root.child("simulate");
    s.get("model", c.simulate.model);
    s.get("ticks", c.simulate.ticks);
    s.get("ifn", c.simulate.ifn);
    s.get("mix_shd", c.simulate.mix_shd);
    s.get("ifn_seeds", c.simulate.ifn_seeds);
    s.get("ifn_waves", c.simulate.ifn_waves);
    s.get("shd_weeks", c.simulate.shd_weeks);
    s.finish();
    if (c.simulate.ticks < 1) bad("/simulate/ticks", "must be >= 1");
    if (c.simulate.shd_weeks < 1) bad("/simulate/shd_weeks", "must be >= 1");
    if (c.simulate.mix_shd && c.simulate.model == Model::Shd) {
      bad("/simulate/mix_shd", "mixing needs model mbm or macm");
    }
  }
  {
    auto s = root.child("mbm");
    s.get("node_add_rate", c.mbm.node_add_rate);
    s.get("activity_rate", c.mbm.activity_rate);
    s.get("removal_age", c.mbm.removal_age);
    s.get("age_rule", c.mbm.age_rule);
    s.finish();
  }
  {
    auto s = root.child("macm");
    s.get("inbox_capacity", c.macm.inbox_capacity);
    s.get("noise_sigma", c.macm.noise_sigma);
    s.get("update_q_every_tick", c.macm.update_q_every_tick);
    s.get("spontaneous", c.macm.spontaneous);
    s.finish();
    if (c.macm.noise_sigma < 0.0) bad("/macm/noise_sigma", "must be >= 0");
  }
  {
    auto s = root.child("mix");
    s.get("full_model_shd_fraction", c.mix.full_model_shd_fraction);
    s.get("ifn_shd_fraction", c.mix.ifn_shd_fraction);
    s.finish();
    auto unit = [](double f) { return f >= 0.0 && f <= 1.0; };
    if (!unit(c.mix.full_model_shd_fraction)) bad("/mix/full_model_shd_fraction", "must be in [0, 1]");
    if (!unit(c.mix.ifn_shd_fraction)) bad("/mix/ifn_shd_fraction", "must be in [0, 1]");
  }
  {
    auto s = root.child("evaluate");
    if (const auto* rows = s.raw("rows")) {
      if (!rows->is_array()) bad(s.pointer("rows"), "expected array");
      const auto known = metrics::all_rows();
      for (std::size_t i = 0; i < rows->size(); ++i) {
        const auto ptr = s.pointer("rows") + "/" + std::to_string(i);
        std::string row;
        read_value((*rows)[i], ptr, row);
        if (std::find(known.begin(), known.end(), row) == known.end()) bad(ptr, "unknown row '" + row + "'");
        c.evaluate.rows.insert(row);
      }
    }
    s.get("top_k", c.evaluate.top_k);
    s.get("rbo_persistence", c.evaluate.rbo_persistence);
    s.get("max_communities", c.evaluate.max_communities);
    s.finish();
    if (c.evaluate.top_k < 1) bad("/evaluate/top_k", "must be >= 1");
    if (!(c.evaluate.rbo_persistence > 0.0 && c.evaluate.rbo_persistence < 1.0)) {
      bad("/evaluate/rbo_persistence", "must be in (0, 1)");
    }
    c.evaluate.tick_len = c.tick_len;
  }
  {
    auto s = root.child("synth");
    std::string preset = "standard";
    s.get("preset", preset);
    if (preset == "standard") {
      c.synth = synth::standard_scenario(c.seed);
    } else if (preset == "custom") {
      c.synth = synth::ScenarioConfig{};
    } else {
      bad(s.pointer("preset"), "unknown preset '" + preset + "' (standard, custom)");
    }
    c.synth.seed = c.seed;
    c.synth.tick_len = c.tick_len;
    s.get("users", c.synth.users);
    s.get("ticks", c.synth.ticks);
    s.get("t0", c.synth.t0);
    s.get("platform", c.synth.platform);
    s.get("weekly_seasonality", c.synth.weekly_seasonality);
    s.get("activity_exponent", c.synth.activity_exponent);
    s.get("base_rate", c.synth.base_rate);
    s.get("max_rate", c.synth.max_rate);
    s.get("contents", c.synth.contents);
    s.get("shock_responders", c.synth.shock_responders);
    s.get("shock_response", c.synth.shock_response);
    s.get("reactive_targets", c.synth.reactive_targets);
    if (const auto* edges = s.raw("planted_edges")) {
      if (!edges->is_array()) bad(s.pointer("planted_edges"), "expected array");
      c.synth.planted_edges.clear();
      for (std::size_t i = 0; i < edges->size(); ++i) {
        Section e((*edges)[i], s.pointer("planted_edges") + "/" + std::to_string(i));
        synth::PlantedEdge edge;
        e.get("source", edge.source);
        e.get("target", edge.target);
        e.get("copy_prob", edge.copy_prob);
        e.get("lag", edge.lag);
        e.finish();
        c.synth.planted_edges.push_back(edge);
      }
    }
    if (const auto* shocks = s.raw("shock_schedule")) {
      if (!shocks->is_array()) bad(s.pointer("shock_schedule"), "expected array");
      c.synth.shock_schedule.clear();
      for (std::size_t i = 0; i < shocks->size(); ++i) {
        Section e((*shocks)[i], s.pointer("shock_schedule") + "/" + std::to_string(i));
        synth::PlantedShock shock;
        e.get("source", shock.source);
        e.get("tick", shock.tick);
        e.get("magnitude", shock.magnitude);
        e.finish();
        c.synth.shock_schedule.push_back(shock);
      }
    }
    s.finish();
  }
  root.finish();
  return c;
}

json read_config_file(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw Error(Errc::BadConfig, path.string() + ": " + e.what(), 0, "/");
  }
  if (!doc.is_object()) bad("", "expected object");
  const auto base = path.has_parent_path() ? path.parent_path() : fs::path(".");
  auto& paths = doc["paths"];
  if (paths.is_null()) paths = json::object();
  if (!paths.is_object()) bad("/paths", "expected object");
  auto it = paths.find("data_dir");
  if (it == paths.end()) {
    paths["data_dir"] = base.string();
  } else if (it->is_string() && fs::path(it->get<std::string>()).is_relative()) {
    *it = (base / it->get<std::string>()).lexically_normal().string();
  }
  return doc;
}

void apply_environment(json& doc) {
  const char* dir = std::getenv(kDataDirEnv);
  if (dir == nullptr || *dir == '\0') return;
  if (!doc.is_object()) doc = json::object();
  if (!doc["paths"].is_object()) doc["paths"] = json::object();
  doc["paths"]["data_dir"] = dir;
}

ordered_json to_json(const RunConfig& c) {
  ordered_json j;
  j["seed"] = c.seed;
  j["tick_len"] = c.tick_len;
  j["platform"] = c.platform ? ordered_json(std::string(to_string(*c.platform))) : ordered_json(nullptr);
  j["strict"] = c.strict;
  j["paths"] = {
      {"data_dir", c.paths.data_dir.string()},
      {"events", c.paths.events.string()},
      {"exogenous_dir", c.paths.exogenous_dir.string()},
      {"rejects", c.paths.rejects.string()},
      {"influence", c.paths.influence.string()},
      {"exogenous_influence", c.paths.exogenous_influence.string()},
      {"masks", c.paths.masks.string()},
      {"sim", c.paths.sim.string()},
      {"truth", c.paths.truth.string()},
      {"report", c.paths.report.string()},
      {"synth_dir", c.paths.synth_dir.string()},
  };
  j["window"] = {
      {"train_from", optional_json(c.window.train_from)},
      {"train_to", optional_json(c.window.train_to)},
      {"test_from", optional_json(c.window.test_from)},
      {"test_to", optional_json(c.window.test_to)},
  };
  j["influence"] = {
      {"lag", c.influence.lag},
      {"nte_threshold", c.influence.nte_threshold},
      {"binarize_threshold", c.influence.binarize_threshold},
      {"threads", c.influence.threads},
  };
  j["shocks"] = {
      {"order", c.shocks.order},
      {"cutoff_frac", c.shocks.cutoff_frac},
      {"window", c.shocks.window},
      {"z_threshold", c.shocks.z_threshold},
      {"magnitude_floor", c.shocks.magnitude_floor},
  };
  j["simulate"] = {
      {"model", std::string(to_string(c.simulate.model))},
      {"ticks", c.simulate.ticks},
      {"ifn", c.simulate.ifn},
      {"mix_shd", c.simulate.mix_shd},
      {"ifn_seeds", c.simulate.ifn_seeds},
      {"ifn_waves", c.simulate.ifn_waves},
      {"shd_weeks", c.simulate.shd_weeks},
  };
  j["mbm"] = {
      {"node_add_rate", optional_json(c.mbm.node_add_rate)},
      {"activity_rate", optional_json(c.mbm.activity_rate)},
      {"removal_age", optional_json(c.mbm.removal_age)},
      {"age_rule", age_rule_name(c.mbm.age_rule)},
  };
  j["macm"] = {
      {"inbox_capacity", c.macm.inbox_capacity},
      {"noise_sigma", c.macm.noise_sigma},
      {"update_q_every_tick", c.macm.update_q_every_tick},
      {"spontaneous", c.macm.spontaneous},
  };
  j["mix"] = {
      {"full_model_shd_fraction", c.mix.full_model_shd_fraction},
      {"ifn_shd_fraction", c.mix.ifn_shd_fraction},
  };
  j["evaluate"] = {
      {"rows", c.evaluate.rows},
      {"top_k", c.evaluate.top_k},
      {"rbo_persistence", c.evaluate.rbo_persistence},
      {"max_communities", c.evaluate.max_communities},
  };
  ordered_json edges = ordered_json::array();
  for (const auto& e : c.synth.planted_edges) {
    edges.push_back({{"source", e.source}, {"target", e.target}, {"copy_prob", e.copy_prob}, {"lag", e.lag}});
  }
  ordered_json shocks = ordered_json::array();
  for (const auto& s : c.synth.shock_schedule) {
    shocks.push_back({{"source", s.source}, {"tick", s.tick}, {"magnitude", s.magnitude}});
  }
  j["synth"] = {
      {"preset", "custom"},
      {"users", c.synth.users},
      {"ticks", c.synth.ticks},
      {"t0", c.synth.t0},
      {"platform", std::string(to_string(c.synth.platform))},
      {"weekly_seasonality", c.synth.weekly_seasonality},
      {"activity_exponent", c.synth.activity_exponent},
      {"base_rate", c.synth.base_rate},
      {"max_rate", c.synth.max_rate},
      {"contents", c.synth.contents},
      {"shock_responders", c.synth.shock_responders},
      {"shock_response", c.synth.shock_response},
      {"reactive_targets", c.synth.reactive_targets},
      {"planted_edges", edges},
      {"shock_schedule", shocks},
  };
  return j;
}

fs::path resolve(const RunConfig& config, const fs::path& path) {
  return (path.is_absolute() ? path : config.paths.data_dir / path).lexically_normal();
}

std::string git_blob_hash(std::string_view bytes) {
  const std::string header = "blob " + std::to_string(bytes.size()) + '\0';
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (ctx == nullptr) throw Error(Errc::Io, "cannot allocate digest context");
  const bool ok = EVP_DigestInit_ex(ctx, EVP_sha1(), nullptr) == 1 &&
                  EVP_DigestUpdate(ctx, header.data(), header.size()) == 1 &&
                  EVP_DigestUpdate(ctx, bytes.data(), bytes.size()) == 1 &&
                  EVP_DigestFinal_ex(ctx, digest, &length) == 1;
  EVP_MD_CTX_free(ctx);
  if (!ok) throw Error(Errc::Io, "SHA-1 digest failed");
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

std::string git_blob_hash_file(const fs::path& path) { return git_blob_hash(read_file(path)); }

std::string config_hash(const RunConfig& config) {
  const auto text = to_json(config).dump();
  // Same digest without the blob header.
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(text.data(), text.size(), digest, &length, EVP_sha1(), nullptr) != 1) {
    throw Error(Errc::Io, "SHA-1 digest failed");
  }
  std::string hex;
  char buf[3];
  for (unsigned int i = 0; i < length; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    hex += buf;
  }
  return hex;
}

fs::path write_manifest(const RunConfig& config, const std::string& subcommand,
                        const StageResult& result) {
  if (result.outputs.empty()) throw Error(Errc::BadConfig, subcommand + " produced no outputs");
  ordered_json m;
  m["tool"] = "osnsim";
  m["version"] = kVersion;
  m["subcommand"] = subcommand;
  m["seed"] = config.seed;
  m["config_hash"] = config_hash(config);
  m["config"] = to_json(config);
  auto hashes = [](const std::vector<fs::path>& files) {
    ordered_json out = ordered_json::object();
    for (const auto& f : files) out[f.string()] = git_blob_hash_file(f);
    return out;
  };
  m["inputs"] = hashes(result.inputs);
  m["outputs"] = hashes(result.outputs);
  m["extra"] = result.extra;
  const std::time_t now = std::time(nullptr);
  std::tm utc{};
  gmtime_r(&now, &utc);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", &utc);
  m["created_utc"] = stamp;
  auto path = result.outputs.front();
  path += ".manifest.json";
  auto out = open_out(path);
  out << m.dump(2) << '\n';
  return path;
}

TickFrame training_frame(const EventLog& training, const RunConfig& config) {
  auto frame = frame_for(training, config.tick_len);
  if (config.window.train_to && *config.window.train_to > frame.end_ts()) {
    const auto span = *config.window.train_to - frame.t0;
    frame.ticks = static_cast<std::size_t>((span + frame.tick_len - 1) / frame.tick_len);
  }
  return frame;
}

TickFrame forecast_frame(const TickFrame& training, const RunConfig& config) {
  auto frame = training;
  frame.ticks += static_cast<std::size_t>(config.simulate.ticks);
  return frame;
}

EventLog load_training(const RunConfig& config) {
  const auto path = resolve(config, config.paths.events);
  auto log = load_events(path, LoadFilter{config.platform, config.window.train_from, config.window.train_to},
                         config.strict)
                 .log;
  if (log.empty()) throw Error(Errc::EmptyLog, "no training events in " + path.string(), 0, path.string());
  return log;
}

EventLog load_truth(const RunConfig& config) {
  const auto path = resolve(config, config.paths.truth);
  auto log = load_events(path, LoadFilter{config.platform, config.window.test_from, config.window.test_to},
                         config.strict)
                 .log;
  if (log.empty()) throw Error(Errc::EmptyLog, "no truth events in " + path.string(), 0, path.string());
  return log;
}

std::set<ActorId> ifn_users(const InfluenceNetwork& endogenous, const SimulateOptions& options) {
  return influential_users(endogenous, options.ifn_seeds, options.ifn_waves);
}

SimulationResult simulate(const EventLog& training, const TickFrame& frame,
                          const InfluenceNetwork& endogenous, const InfluenceNetwork& exogenous,
                          std::span<const BinarySeries> masks, const RunConfig& config) {
  const auto& opt = config.simulate;
  SimulationResult result;
  EventLog log = training;
  if (opt.ifn) {
    result.ifn = ifn_users(endogenous, opt);
    log = keep_actors(training, *result.ifn);
    if (log.empty()) {
      throw Error(Errc::BadConfig, "IFN selection has no training events; the influence network has no usable edges",
                  0, "/simulate/ifn");
    }
  }
  const std::int64_t horizon = opt.ticks * config.tick_len;
  auto replay_of = [&](const EventLog& source) {
    return shd::replay(shd::window_from_log(source, frame, opt.shd_weeks), frame.end_ts(), horizon);
  };

  std::vector<Event> events;
  switch (opt.model) {
    case Model::Mbm: {
      auto c = config.mbm;
      c.seed = config.seed;
      c.ticks = opt.ticks;
      c.tick_len = config.tick_len;
      events = mbm::simulate(log, c, frame);
      break;
    }
    case Model::Macm: {
      auto c = config.macm;
      c.seed = config.seed;
      c.ticks = opt.ticks;
      c.tick_len = config.tick_len;
      events = macm::simulate(log, endogenous, exogenous, masks, c, frame);
      break;
    }
    case Model::Shd:
      events = replay_of(log);
      break;
  }

  if (!opt.mix_shd) {
    result.model_events = events.size();
    result.events = std::move(events);
    return result;
  }
  result.split = shd::mix_split(training, config.mix, opt.ifn);
  const auto shd_events = replay_of(training);
  result.events = shd::mix(events, shd_events, *result.split);
  for (const auto& e : result.events) {
    if (e.id.rfind("shd-", 0) == 0) {
      ++result.shd_events;
    } else {
      ++result.model_events;
    }
  }
  return result;
}

StageResult run_synth(const RunConfig& config) {
  const auto scenario = synth::generate(config.synth);
  const auto dir = resolve(config, config.paths.synth_dir);
  synth::save_scenario(dir, scenario);
  StageResult r;
  r.outputs.push_back(dir / "events.jsonl");
  r.outputs.push_back(dir / "annotations.json");
  for (const auto& series : scenario.exogenous) r.outputs.push_back(dir / "exogenous" / (series.source + ".csv"));
  std::set<ActorId> users;
  for (const auto& e : scenario.log) users.insert(e.actor);
  r.extra["events"] = scenario.log.size();
  r.extra["users"] = users.size();
  r.extra["planted_edges"] = scenario.annotations.planted_edges.size();
  r.extra["shocks"] = scenario.annotations.shocks.size();
  return r;
}

StageResult run_ingest(const RunConfig& config, const fs::path& input) {
  auto loaded = load_events(input, LoadFilter{config.platform, std::nullopt, std::nullopt}, config.strict);
  sort_events(loaded.log);
  StageResult r;
  r.inputs.push_back(input);
  const auto events = resolve(config, config.paths.events);
  const auto rejects = resolve(config, config.paths.rejects);
  save_events(events, loaded.log);
  {
    auto out = open_out(rejects);
    write_rejects(out, loaded.rejects);
  }
  r.outputs = {events, rejects};
  r.extra["accepted"] = loaded.log.size();
  r.extra["rejected"] = loaded.rejects.size();
  return r;
}

StageResult run_influence(const RunConfig& config) {
  const auto training = load_training(config);
  const auto frame = training_frame(training, config);
  const auto users = binary_users(training, frame, config.influence.binarize_threshold);
  const auto network = build_network_from_series(users, users, config.influence.lag,
                                                 config.influence.nte_threshold, config.influence.threads);
  StageResult r;
  r.inputs.push_back(resolve(config, config.paths.events));
  const auto out_path = resolve(config, config.paths.influence);
  {
    auto out = open_out(out_path);
    write_network_csv(out, network);
  }
  r.outputs.push_back(out_path);
  r.extra["users"] = users.size();
  r.extra["edges"] = network.edges.size();
  r.extra["frame"] = {{"t0", frame.t0}, {"tick_len", frame.tick_len}, {"ticks", frame.ticks}};
  return r;
}

StageResult run_shocks(const RunConfig& config) {
  const auto training = load_training(config);
  const auto frame = training_frame(training, config);
  const auto extended = forecast_frame(frame, config);
  StageResult r;
  r.inputs.push_back(resolve(config, config.paths.events));
  std::vector<BinarySeries> masks;
  ordered_json counts = ordered_json::object();
  for (const auto& file : exogenous_files(resolve(config, config.paths.exogenous_dir))) {
    r.inputs.push_back(file);
    auto mask = detect_shocks(load_shock_csv(file, extended), config.shocks);
    counts[mask.owner] = std::count(mask.bits.begin(), mask.bits.end(), std::uint8_t{1});
    masks.push_back(std::move(mask));
  }
  // Shock-to-user influence is learned on the training ticks only.
  std::vector<BinarySeries> training_masks = masks;
  for (auto& m : training_masks) m.bits.resize(frame.ticks);
  const auto users = binary_users(training, frame, config.influence.binarize_threshold);
  const auto network = training_masks.empty()
                           ? InfluenceNetwork{}
                           : build_exogenous_network(training_masks, users, config.influence.lag,
                                                     config.influence.nte_threshold);
  const auto masks_path = resolve(config, config.paths.masks);
  const auto network_path = resolve(config, config.paths.exogenous_influence);
  {
    auto out = open_out(masks_path);
    write_masks(out, masks);
  }
  {
    auto out = open_out(network_path);
    write_network_csv(out, network);
  }
  r.outputs = {masks_path, network_path};
  r.extra["shock_ticks"] = counts;
  r.extra["edges"] = network.edges.size();
  r.extra["frame"] = {{"t0", extended.t0}, {"tick_len", extended.tick_len}, {"ticks", extended.ticks}};
  return r;
}

StageResult run_simulate(const RunConfig& config) {
  const auto& opt = config.simulate;
  const auto training = load_training(config);
  const auto frame = training_frame(training, config);
  StageResult r;
  r.inputs.push_back(resolve(config, config.paths.events));

  InfluenceNetwork endogenous;
  InfluenceNetwork exogenous;
  std::vector<BinarySeries> masks;
  if (opt.model == Model::Macm || opt.ifn) {
    const auto path = resolve(config, config.paths.influence);
    endogenous = read_network_file(path);
    r.inputs.push_back(path);
  }
  if (opt.model == Model::Macm) {
    const auto network_path = resolve(config, config.paths.exogenous_influence);
    const auto masks_path = resolve(config, config.paths.masks);
    std::error_code ec;
    if (fs::exists(network_path, ec) && fs::exists(masks_path, ec)) {
      exogenous = read_network_file(network_path);
      std::ifstream in(masks_path);
      masks = read_masks(in, forecast_frame(frame, config));
      r.inputs.push_back(network_path);
      r.inputs.push_back(masks_path);
    }
  }

  const auto sim = simulate(training, frame, endogenous, exogenous, masks, config);
  const auto out_path = resolve(config, config.paths.sim);
  save_events(out_path, sim.events);
  r.outputs.push_back(out_path);
  r.extra["model"] = std::string(to_string(opt.model));
  r.extra["ifn"] = opt.ifn;
  r.extra["forecast"] = {{"start", frame.end_ts()}, {"ticks", opt.ticks}, {"tick_len", config.tick_len}};
  r.extra["events"] = sim.events.size();
  if (sim.ifn) r.extra["ifn_users"] = *sim.ifn;
  if (sim.split) {
    r.extra["mix"] = {
        {"full_model_shd_fraction", config.mix.full_model_shd_fraction},
        {"ifn_shd_fraction", config.mix.ifn_shd_fraction},
        {"applied_fraction", opt.ifn ? config.mix.ifn_shd_fraction : config.mix.full_model_shd_fraction},
        {"model_events", sim.model_events},
        {"shd_events", sim.shd_events},
        {"model_stream", sim.split->active},
        {"shd_stream", sim.split->less_active},
    };
  }
  return r;
}

StageResult run_evaluate(const RunConfig& config,
                         const std::vector<std::pair<std::string, fs::path>>& sims) {
  StageResult r;
  const auto truth = load_truth(config);
  r.inputs.push_back(resolve(config, config.paths.truth));
  std::vector<std::pair<std::string, fs::path>> named = sims;
  if (named.empty()) named.emplace_back(std::string(to_string(config.simulate.model)), config.paths.sim);
  std::vector<std::pair<std::string, EventLog>> logs;
  for (const auto& [name, path] : named) {
    const auto full = resolve(config, path);
    auto log = load_events(full, LoadFilter{config.platform, std::nullopt, std::nullopt}, config.strict).log;
    logs.emplace_back(name, std::move(log));
    r.inputs.push_back(full);
  }
  const auto report = metrics::evaluate_models(logs, truth, config.evaluate);
  const auto csv_path = resolve(config, config.paths.report);
  const auto json_path = with_extension(csv_path, ".json");
  {
    auto out = open_out(csv_path);
    metrics::write_report_csv(out, report);
  }
  {
    auto out = open_out(json_path);
    metrics::write_report_json(out, report);
  }
  r.outputs = {csv_path, json_path};
  std::size_t scored = 0;
  std::size_t skipped = 0;
  for (const auto& e : report.entries) (e.error ? scored : skipped)++;
  r.extra["models"] = report.models;
  r.extra["normalization"] = report.normalization;
  r.extra["scored"] = scored;
  r.extra["skipped"] = skipped;
  return r;
}

StageResult run_report(const RunConfig& config) {
  const auto csv_path = resolve(config, config.paths.report);
  std::ifstream in(csv_path);
  if (!in) throw Error(Errc::Io, "cannot read " + csv_path.string(), 0, csv_path.string());
  const auto report = metrics::read_report_csv(in);
  const auto json_path = with_extension(csv_path, ".json");
  const auto svg_path = with_extension(csv_path, ".svg");
  {
    auto out = open_out(svg_path);
    metrics::write_report_svg(out, report);
  }
  {
    auto out = open_out(json_path);
    metrics::write_report_json(out, report);
  }
  StageResult r;
  r.inputs.push_back(csv_path);
  r.outputs = {svg_path, json_path};
  r.extra["entries"] = report.entries.size();
  return r;
}

}  // namespace osnsim::pipeline
