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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "osnsim/error.hpp"
#include "osnsim/influence.hpp"
#include "osnsim/synth.hpp"
#include "synth_fixtures.hpp"

using namespace osnsim;
using namespace osnsim::synth;

namespace {

std::string dump(const EventLog& log) {
  std::ostringstream out;
  write_events(out, log);
  return out.str();
}

using fixtures::recovery;

}  // namespace

TEST_CASE("generate: deterministic per seed and valid") {
  auto cfg = standard_scenario(3);
  cfg.ticks = 800;
  for (auto& s : cfg.shock_schedule) s.tick %= 700;
  auto a = generate(cfg);
  auto b = generate(cfg);
  CHECK(dump(a.log) == dump(b.log));
  std::ostringstream ja, jb;
  write_annotations(ja, a.annotations);
  write_annotations(jb, b.annotations);
  CHECK(ja.str() == jb.str());
  cfg.seed = 4;
  CHECK(dump(generate(cfg).log) != dump(a.log));

  std::set<std::string> ids;
  std::map<std::string, std::int64_t> ts_of;
  for (const auto& e : a.log) ts_of[e.id] = e.ts;
  for (const auto& e : a.log) {
    std::optional<std::int64_t> parent_ts;
    if (e.parent) parent_ts = ts_of.at(*e.parent);
    CHECK(validate_event(e, parent_ts).ok());
    CHECK(e.ts >= cfg.t0);
    CHECK(e.ts < cfg.t0 + static_cast<std::int64_t>(cfg.ticks) * cfg.tick_len);
    ids.insert(e.id);
  }
  CHECK(ids.size() == a.log.size());
  CHECK(std::is_sorted(a.log.begin(), a.log.end(),
                       [](const Event& x, const Event& y) { return x.ts < y.ts; }));
  REQUIRE(a.exogenous.size() == 2);
  CHECK(a.exogenous[0].values.size() == cfg.ticks);
}

TEST_CASE("generate: a copy_prob 1 edge is recovered at nte 0.5") {
  ScenarioConfig cfg;
  cfg.users = 12;
  cfg.ticks = 3000;
  cfg.shock_schedule.clear();
  cfg.planted_edges = {{user_id(2), user_id(7), 1.0, 1}};
  cfg.seed = 9;
  auto s = generate(cfg);
  InfluenceConfig ic;
  ic.nte_threshold = 0.5;
  auto net = build_influence_network(s.log, ic);
  CHECK(net.has_edge(user_id(2), user_id(7)));
  CHECK_FALSE(net.has_edge(user_id(7), user_id(2)));
  CHECK(net.edges.size() == 1);
}

TEST_CASE("generate: weekly seasonality shows in the day-of-week histogram") {
  ScenarioConfig cfg;
  cfg.users = 50;
  cfg.ticks = 24 * 7 * 8;
  cfg.weekly_seasonality = 0.5;
  cfg.seed = 2;
  auto s = generate(cfg);
  std::array<double, 7> counts{};
  for (const auto& e : s.log) {
    const auto day = (e.ts - cfg.t0) / 86400;
    counts[static_cast<std::size_t>(day % 7)] += 1.0;
  }
  const double expected = static_cast<double>(s.log.size()) / 7.0;
  double chi2 = 0.0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  // chi-square critical value, 6 degrees of freedom, p = 0.01
  CHECK(chi2 > 16.812);
  CHECK(counts[0] > counts[3]);

  cfg.weekly_seasonality = 0.0;
  auto flat = generate(cfg);
  std::array<double, 7> flat_counts{};
  for (const auto& e : flat.log) flat_counts[static_cast<std::size_t>((e.ts - cfg.t0) / 86400 % 7)] += 1.0;
  const double fe = static_cast<double>(flat.log.size()) / 7.0;
  double flat_chi2 = 0.0;
  for (double c : flat_counts) flat_chi2 += (c - fe) * (c - fe) / fe;
  CHECK(flat_chi2 < chi2);
}

TEST_CASE("generate: shocks are planted in the series and answered") {
  auto cfg = standard_scenario(5);
  cfg.ticks = 1500;
  cfg.shock_schedule = {{"price", 300, 12.0}, {"price", 900, 12.0}};
  auto s = generate(cfg);
  REQUIRE(s.exogenous.size() == 1);
  const auto mask = detect_shocks(s.exogenous[0]);
  CHECK(mask.bits[300] == 1);
  CHECK(mask.bits[900] == 1);
  const auto& responders = s.annotations.shock_responders.at("price");
  CHECK(responders.size() == cfg.shock_responders);
  std::size_t answers = 0;
  for (const auto& e : s.log) {
    const auto tick = (e.ts - cfg.t0) / cfg.tick_len;
    if ((tick == 301 || tick == 901) &&
        std::find(responders.begin(), responders.end(), e.actor) != responders.end()) {
      ++answers;
    }
  }
  CHECK(answers >= 5);
}

TEST_CASE("generate: config validation") {
  auto bad = [](auto mutate) {
    auto cfg = standard_scenario(1);
    cfg.ticks = 100;
    cfg.shock_schedule.clear();
    mutate(cfg);
    try {
      generate(cfg);
    } catch (const Error& e) {
      return e.code() == Errc::BadConfig;
    }
    return false;
  };
  CHECK(bad([](ScenarioConfig& c) { c.users = 0; }));
  CHECK(bad([](ScenarioConfig& c) { c.ticks = 0; }));
  CHECK(bad([](ScenarioConfig& c) { c.planted_edges[0].copy_prob = 1.5; }));
  CHECK(bad([](ScenarioConfig& c) { c.planted_edges[0].lag = 0; }));
  CHECK(bad([](ScenarioConfig& c) { c.planted_edges[0].source = "nobody"; }));
  CHECK(bad([](ScenarioConfig& c) { c.shock_schedule = {{"x", 100, 5.0}}; }));
  CHECK(bad([](ScenarioConfig& c) { c.weekly_seasonality = 1.0; }));
  CHECK(bad([](ScenarioConfig& c) { c.activity_exponent = 0.0; }));
  CHECK(bad([](ScenarioConfig& c) { c.contents = 0; }));
  CHECK(bad([](ScenarioConfig& c) { c.shock_responders = 1000; }));
}

TEST_CASE("annotations round trip and scenario files") {
  auto cfg = standard_scenario(6);
  cfg.ticks = 400;
  cfg.shock_schedule = {{"price", 100, 8.0}};
  auto s = generate(cfg);
  std::stringstream buf;
  write_annotations(buf, s.annotations);
  auto back = read_annotations(buf);
  CHECK(back.planted_edges == s.annotations.planted_edges);
  CHECK(back.shocks == s.annotations.shocks);
  CHECK(back.shock_responders == s.annotations.shock_responders);
  CHECK(back.seed == 6);

  const auto dir = std::filesystem::temp_directory_path() / "osnsim_synth_test";
  std::filesystem::remove_all(dir);
  save_scenario(dir, s);
  CHECK(std::filesystem::exists(dir / "events.jsonl"));
  CHECK(std::filesystem::exists(dir / "annotations.json"));
  CHECK(std::filesystem::exists(dir / "exogenous" / "price.csv"));
  auto loaded = load_events(dir / "events.jsonl");
  CHECK(loaded.rejects.empty());
  CHECK(loaded.log == s.log);
  std::filesystem::remove_all(dir);
}

TEST_CASE("standard scenario: planted edges recovered at default thresholds") {
  for (std::uint64_t seed : {1, 2, 3}) {
    auto s = generate(standard_scenario(seed));
    CHECK(s.annotations.planted_edges.size() == 10);
    const auto r = recovery(s, InfluenceConfig{}.nte_threshold);
    MESSAGE("seed=" << seed << " precision=" << r.precision << " recall=" << r.recall
                    << " events=" << s.log.size());
    CHECK(r.precision >= 0.9);
    CHECK(r.recall >= 0.9);
  }
}

TEST_CASE("reactive targets act organically at the base rate") {
  const auto cfg = standard_scenario(2);
  const auto s = generate(cfg);
  std::set<std::string> targets;
  for (const auto& e : cfg.planted_edges) targets.insert(e.target);
  CHECK(targets.size() == 10);
  for (const auto& [user, rate] : s.annotations.user_rates) {
    if (targets.count(user)) {
      CHECK(rate == cfg.base_rate);
    } else {
      CHECK(rate >= cfg.base_rate);
      CHECK(rate <= cfg.max_rate);
    }
  }
}
