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

#include <cmath>

#include <random>

#include "mbm_fixtures.hpp"
#include "osnsim/error.hpp"
#include "osnsim/mbm.hpp"

using namespace osnsim;
using namespace osnsim::mbm;

namespace {

NodeState node(std::uint64_t actions, double age, std::int64_t last, double fitness) {
  NodeState n;
  n.id = "n";
  n.action_count = actions;
  n.age = age;
  n.last_active = last;
  n.fitness = fitness;
  return n;
}

Event event(const std::string& id, std::int64_t tick, const std::string& actor,
            const std::string& content, PlatformAction action = PlatformAction::Push) {
  return Event{id, tick * 3600, actor, action, content, std::nullopt, Platform::GitHub,
               std::nullopt};
}

}  // namespace

TEST_CASE("update_node examples") {
  auto acted = update_node(node(1, 3.0, 5, 1.0), 5, true);
  CHECK(acted.age == 4.0);
  CHECK(acted.action_count == 2);
  CHECK(acted.fitness == 2.0 / 4.0);

  auto idle = update_node(node(1, 3.0, 5, 1.0), 5, false);
  CHECK(idle.age == 4.0);
  CHECK(idle.action_count == 1);

  auto fit = update_node(node(4, 1.0, 0, 1.0), 0, false);
  CHECK(fit.age == 2.0);
  CHECK(fit.fitness == 2.0);

  try {
    update_node(node(1, 1.0, 9, 1.0), 8, false);
    FAIL("expected ClockSkew");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::ClockSkew);
  }
}

TEST_CASE("update_node: age floor and variants") {
  // idle for 3 ticks at t_c = 10: a = 2 + 1 - 3 * 11 < 0 -> floor
  auto idle = update_node(node(5, 2.0, 7, 1.0), 10, false);
  CHECK(idle.age == kAgeFloor);
  CHECK(idle.fitness == 5.0 / kAgeFloor);

  // activity equation for idle nodes under ActivityOnly
  auto only = update_node(node(5, 2.0, 9, 0.5), 10, false, AgeRule::ActivityOnly);
  CHECK(only.age == 2.0 + 1.0 - 1.0 * 0.5);
  // bulk equation for acting nodes under BulkOnly
  auto bulk = update_node(node(5, 30.0, 9, 0.5), 10, true, AgeRule::BulkOnly);
  CHECK(bulk.age == 30.0 + 1.0 - 1.0 * 11.0);
  CHECK(bulk.action_count == 6);
}

TEST_CASE("property: fitness is non-negative and tracks recency") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> age(0.0, 50.0);
  for (int i = 0; i < 2000; ++i) {
    const auto actions = rng() % 20;
    const auto last = static_cast<std::int64_t>(rng() % 100);
    const auto now = last + static_cast<std::int64_t>(rng() % 5);
    auto n = update_node(node(actions, age(rng), last, age(rng)), now, (rng() % 2) == 1);
    CHECK(n.fitness >= 0.0);
    CHECK(n.age >= kAgeFloor);
  }
  // Equal |A|: the younger node is fitter.
  auto younger = update_node(node(6, 1.0, 0, 1.0), 0, false);
  auto older = update_node(node(6, 4.0, 0, 1.0), 0, false);
  CHECK(younger.fitness > older.fitness);
  // Fixed age: more actions, more fitness.
  CHECK(update_node(node(7, 1.0, 0, 1.0), 0, false).fitness > younger.fitness);
}

TEST_CASE("select_weighted") {
  std::mt19937_64 rng(1);
  std::vector<WeightedCandidate> single = {{"only", 2.0}};
  CHECK(select_weighted(single, rng) == "only");
  std::vector<WeightedCandidate> first = {{"a", 1.0}, {"b", 0.0}};
  for (int i = 0; i < 1000; ++i) CHECK(select_weighted(first, rng) == "a");

  std::vector<WeightedCandidate> skew = {{"a", 1.0}, {"b", 3.0}};
  int a = 0;
  const int draws = 100000;
  for (int i = 0; i < draws; ++i) a += select_weighted(skew, rng) == "a";
  CHECK(std::abs(a / double(draws) - 0.25) <= 0.01);

  std::vector<WeightedCandidate> zeros = {{"a", 0.0}};
  CHECK_THROWS_AS(select_weighted(zeros, rng), Error);
  std::vector<WeightedCandidate> negative = {{"a", -1.0}, {"b", 2.0}};
  CHECK_THROWS_AS(select_weighted(negative, rng), Error);
}

TEST_CASE("init_from_log") {
  EventLog log;
  for (int u = 0; u < 5; ++u) {
    log.push_back(event("e" + std::to_string(u), u, "u" + std::to_string(u), "r"));
  }
  auto state = init_from_log(log, {});
  CHECK(state.users.size() == 5);
  for (const auto& [id, n] : state.users) CHECK(n.fitness == 1.0);
  for (const auto& [id, n] : state.targets) CHECK(n.fitness == 1.0);

  CHECK_THROWS_AS(init_from_log(EventLog{}, {}), Error);

  EventLog twenty;
  for (int u = 0; u < 20; ++u) {
    twenty.push_back(event("e" + std::to_string(u), u % 10, "u" + std::to_string(u), "r"));
  }
  sort_events(twenty);
  auto fitted = init_from_log(twenty, {});
  CHECK(fitted.next_tick == 10);
  CHECK(fitted.node_add_rate == 2.0);

  auto mixed = log;
  mixed[0].platform = Platform::Reddit;
  mixed[0].action = PlatformAction::Comment;
  CHECK_THROWS_AS(init_from_log(mixed, {}), Error);
}

TEST_CASE("step: no fitness mass and no arrivals emits nothing") {
  auto state = init_from_log(fixtures::seed_graph(1), {});
  for (auto& [id, n] : state.users) {
    n.fitness = 0.0;
  }
  state.node_add_rate = 0.0;
  auto r = step(state, state.next_tick);
  CHECK(r.events.empty());
  CHECK(r.degree_increments == 0);
}

TEST_CASE("step: targets are drawn in proportion to fitness") {
  State state;
  state.targets["heavy"] = NodeState{"heavy", NodeKind::Target, 9.0, 1.0, 0, 0, 0};
  state.targets["light"] = NodeState{"light", NodeKind::Target, 1.0, 1.0, 0, 0, 0};
  std::mt19937_64 rng(42);
  int heavy = 0;
  for (int i = 0; i < 10000; ++i) heavy += choose_target(state, rng) == "heavy";
  const double ratio = heavy / double(10000 - heavy);
  CHECK(ratio == doctest::Approx(9.0).epsilon(0.05));
}

TEST_CASE("step: postconditions over a run") {
  auto state = init_from_log(fixtures::seed_graph(3), {});
  std::size_t total_events = 0;
  const auto start = state.next_tick;
  for (std::int64_t t = start; t < start + 300;) {
    auto r = step(state, t);
    ++t;
    CHECK(r.degree_increments == 2 * r.events.size());
    for (const auto& [id, n] : state.users) CHECK(n.age < state.removal_age);
    for (const auto& [id, n] : state.targets) CHECK(n.age < state.removal_age);
    for (const auto& e : r.events) {
      CHECK(validate_event(e).ok());
      CHECK(e.ts == state.t0 + (t - 1) * state.tick_len);
    }
    total_events += r.events.size();
  }
  CHECK(total_events > 0);
  CHECK_THROWS_AS(step(state, 0), Error);
}

TEST_CASE("step: forced removal") {
  auto state = init_from_log(fixtures::seed_graph(4), {});
  state.removal_age = 1.5;
  state.activity_rate = 0.0;
  state.node_add_rate = 0.0;
  // every idle node jumps far past its last activity: age floors, nobody is removed
  auto r = step(state, state.next_tick);
  CHECK(r.removed == 0);
  // a node updated with zero elapsed time ages by one and crosses 1.5
  state.users.begin()->second.last_active = state.next_tick;
  state.users.begin()->second.age = 1.0;
  r = step(state, state.next_tick);
  CHECK(r.removed == 1);
}

TEST_CASE("heavy-tailed target degrees emerge") {
  // At three times the mean degree an equal-edge random graph has almost no
  // mass; the grown graph keeps several percent of its targets there.
  int beats_median_null = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto state = fixtures::run_emergence(seed, 2000);
    const double mean = fixtures::mean_target_degree(state);
    const auto tail = fixtures::tail_at(state, static_cast<std::uint64_t>(std::ceil(3.0 * mean)));
    CHECK(tail.observed > 1000.0 * tail.null_model);
    CHECK(tail.observed > 0.01);
    const auto at_median = fixtures::compare_with_random_graph(state);
    beats_median_null += at_median.observed > at_median.null_model;
  }
  MESSAGE("CCDF at 10x median beats the equal-edge null in " << beats_median_null << "/20 runs");
}

TEST_CASE("simulate is deterministic per seed and multi-platform") {
  auto log = fixtures::seed_graph(9);
  Event reddit{"r1", log.back().ts, "ruser", PlatformAction::Post, "sub/a", std::nullopt,
               Platform::Reddit, std::nullopt};
  log.push_back(reddit);
  Config config;
  config.ticks = 50;
  config.seed = 5;
  auto a = simulate(log, config);
  auto b = simulate(log, config);
  CHECK(a == b);
  config.seed = 6;
  CHECK(simulate(log, config) != a);
  bool saw_reddit = false;
  for (const auto& e : a) saw_reddit |= e.platform == Platform::Reddit;
  CHECK(saw_reddit);
  CHECK(std::is_sorted(a.begin(), a.end(),
                       [](const Event& x, const Event& y) { return x.ts < y.ts; }));
}
