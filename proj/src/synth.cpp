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

#include "osnsim/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include "json.hpp"
#include "osnsim/error.hpp"

namespace osnsim::synth {
namespace {

constexpr std::int64_t kDay = 86400;

std::vector<std::pair<PlatformAction, double>> action_mix(Platform p) {
  switch (p) {
    case Platform::GitHub:
      return {{PlatformAction::Push, 0.45},        {PlatformAction::IssueComment, 0.12},
              {PlatformAction::PullRequest, 0.10}, {PlatformAction::Watch, 0.12},
              {PlatformAction::Fork, 0.06},        {PlatformAction::Issues, 0.06},
              {PlatformAction::CommitComment, 0.04}, {PlatformAction::Create, 0.04},
              {PlatformAction::Delete, 0.01}};
    case Platform::Twitter:
      return {{PlatformAction::Tweet, 0.35}, {PlatformAction::Retweet, 0.35},
              {PlatformAction::Reply, 0.20}, {PlatformAction::Quote, 0.10}};
    case Platform::Reddit:
      return {{PlatformAction::Post, 0.2}, {PlatformAction::Comment, 0.8}};
  }
  return {};
}

std::string content_id(Platform p, std::size_t k) {
  const char* stem = p == Platform::GitHub ? "repo" : p == Platform::Reddit ? "sub" : "thread";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%s%04zu", stem, k);
  return buf;
}

std::string event_id(std::uint64_t k) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "syn-%08llu", static_cast<unsigned long long>(k));
  return buf;
}

void validate(const ScenarioConfig& c) {
  auto fail = [](const std::string& what) { throw Error(Errc::BadConfig, what); };
  if (c.users < 1) fail("users must be >= 1");
  if (c.ticks < 1) fail("ticks must be >= 1");
  if (c.tick_len < 1) fail("tick_len must be >= 1");
  if (c.contents < 1) fail("contents must be >= 1");
  if (!(c.weekly_seasonality >= 0.0 && c.weekly_seasonality < 1.0)) {
    fail("weekly_seasonality must be in [0, 1)");
  }
  if (!(c.activity_exponent > 0.0)) fail("activity_exponent must be > 0");
  if (!(c.base_rate >= 0.0) || !(c.max_rate >= c.base_rate)) {
    fail("need 0 <= base_rate <= max_rate");
  }
  if (!(c.shock_response >= 0.0 && c.shock_response <= 1.0)) {
    fail("shock_response must be in [0, 1]");
  }
  if (c.shock_responders > c.users) {
    fail("shock_responders exceeds users");
  }
  std::set<std::string> known;
  for (std::size_t u = 0; u < c.users; ++u) known.insert(user_id(u));
  for (const auto& e : c.planted_edges) {
    if (!known.count(e.source) || !known.count(e.target)) {
      fail("planted edge " + e.source + " -> " + e.target + " names an unknown user");
    }
    if (e.source == e.target) fail("planted edge must join two users");
    if (!(e.copy_prob >= 0.0 && e.copy_prob <= 1.0)) fail("copy_prob must be in [0, 1]");
    if (e.lag < 1) fail("lag must be >= 1");
  }
  for (const auto& s : c.shock_schedule) {
    if (s.source.empty()) fail("shock source must be named");
    if (s.tick < 0 || s.tick >= static_cast<std::int64_t>(c.ticks)) {
      fail("shock tick outside the scenario");
    }
  }
}

}  // namespace

std::string user_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "user%04zu", index);
  return buf;
}

ScenarioConfig standard_scenario(std::uint64_t seed) {
  ScenarioConfig c;
  c.seed = seed;
  c.reactive_targets = true;
  std::mt19937_64 rng(seed ^ 0x5bd1e995u);
  std::vector<std::size_t> order(c.users);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  for (std::size_t k = 0; k < 10; ++k) {
    c.planted_edges.push_back({user_id(order[2 * k]), user_id(order[2 * k + 1]), 0.9, 1});
  }
  for (const char* source : {"price", "volume"}) {
    std::set<std::int64_t> ticks;
    std::uniform_int_distribution<std::int64_t> pick(100, static_cast<std::int64_t>(c.ticks) - 100);
    while (ticks.size() < 100) {
      const auto t = pick(rng);
      bool clear = true;
      for (auto other : ticks) clear &= std::abs(other - t) >= 30;
      if (clear) ticks.insert(t);
    }
    for (auto t : ticks) c.shock_schedule.push_back({source, t, 10.0});
  }
  return c;
}

Scenario generate(const ScenarioConfig& c) {
  validate(c);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  Scenario out;
  auto& notes = out.annotations;
  notes.seed = c.seed;
  notes.planted_edges = c.planted_edges;
  notes.shocks = c.shock_schedule;

  std::set<ActorId> reactive;
  if (c.reactive_targets) {
    for (const auto& e : c.planted_edges) reactive.insert(e.target);
  }
  std::vector<double> rates(c.users);
  for (std::size_t u = 0; u < c.users; ++u) {
    const double pareto = std::pow(1.0 - unit(rng), -1.0 / c.activity_exponent);
    rates[u] = reactive.count(user_id(u)) ? c.base_rate : std::min(c.max_rate, c.base_rate * pareto);
    notes.user_rates[user_id(u)] = rates[u];
  }

  // Zipf popularity over contents; each user favours three of them.
  std::vector<double> zipf(c.contents);
  for (std::size_t k = 0; k < c.contents; ++k) zipf[k] = 1.0 / static_cast<double>(k + 1);
  std::discrete_distribution<std::size_t> popular(zipf.begin(), zipf.end());
  std::vector<std::array<std::size_t, 3>> home(c.users);
  for (auto& h : home) {
    for (auto& k : h) k = popular(rng);
  }
  const auto mix = action_mix(c.platform);
  std::vector<double> mix_weights;
  for (const auto& [a, w] : mix) mix_weights.push_back(w);
  std::discrete_distribution<std::size_t> pick_action(mix_weights.begin(), mix_weights.end());
  auto pick_content = [&](std::size_t u) {
    if (unit(rng) < 0.7) return home[u][static_cast<std::size_t>(unit(rng) * 3.0) % 3];
    return popular(rng);
  };

  std::set<std::string> sources;
  for (const auto& s : c.shock_schedule) sources.insert(s.source);
  std::map<std::int64_t, std::vector<std::size_t>> answering;  // tick -> responders
  for (const auto& source : sources) {
    std::vector<std::size_t> order(c.users);
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    auto& names = notes.shock_responders[source];
    for (std::size_t k = 0; k < c.shock_responders; ++k) names.push_back(user_id(order[k]));
    std::sort(names.begin(), names.end());
    for (const auto& s : c.shock_schedule) {
      if (s.source != source) continue;
      for (std::size_t k = 0; k < c.shock_responders; ++k) answering[s.tick + 1].push_back(order[k]);
    }
  }

  std::map<ActorId, std::size_t> index_of;
  for (std::size_t u = 0; u < c.users; ++u) index_of[user_id(u)] = u;
  std::int64_t max_lag = 1;
  for (const auto& e : c.planted_edges) max_lag = std::max(max_lag, e.lag);
  // first event of each user in each of the last max_lag ticks
  std::map<std::int64_t, std::map<std::size_t, std::size_t>> first_event;

  std::uint64_t counter = 0;
  EventLog log;
  auto emit = [&](std::size_t u, std::int64_t t, std::size_t content, PlatformAction action,
                  std::optional<EventId> parent) {
    Event e;
    e.id = event_id(counter++);
    e.ts = c.t0 + t * c.tick_len + static_cast<std::int64_t>(unit(rng) * static_cast<double>(c.tick_len));
    e.actor = user_id(u);
    e.action = action;
    e.content = content_id(c.platform, content);
    e.platform = c.platform;
    e.parent = std::move(parent);
    first_event[t].try_emplace(u, log.size());
    log.push_back(std::move(e));
  };
  const auto response_action = c.platform == Platform::GitHub   ? PlatformAction::Push
                               : c.platform == Platform::Twitter ? PlatformAction::Reply
                                                                 : PlatformAction::Comment;

  for (std::int64_t t = 0; t < static_cast<std::int64_t>(c.ticks); ++t) {
    const auto day = (c.t0 + t * c.tick_len) / kDay;
    const auto dow = ((day + 3) % 7 + 7) % 7;  // 0 = Monday
    const double season =
        1.0 + c.weekly_seasonality * std::cos(2.0 * std::numbers::pi * static_cast<double>(dow) / 7.0);
    for (std::size_t u = 0; u < c.users; ++u) {
      const double lambda = rates[u] * season;
      if (!(lambda > 0.0)) continue;
      const auto n = std::poisson_distribution<int>(lambda)(rng);
      for (int k = 0; k < n; ++k) emit(u, t, pick_content(u), mix[pick_action(rng)].first, std::nullopt);
    }
    for (const auto& edge : c.planted_edges) {
      auto past = first_event.find(t - edge.lag);
      if (past == first_event.end()) continue;
      auto src = past->second.find(index_of.at(edge.source));
      if (src == past->second.end()) continue;
      if (unit(rng) >= edge.copy_prob) continue;
      const Event& cause = log[src->second];
      const auto content = static_cast<std::size_t>(std::stoul(cause.content.substr(cause.content.size() - 4)));
      emit(index_of.at(edge.target), t, content, response_action, cause.id);
    }
    if (auto it = answering.find(t); it != answering.end()) {
      for (auto u : it->second) {
        if (unit(rng) < c.shock_response) emit(u, t, pick_content(u), mix[pick_action(rng)].first, std::nullopt);
      }
    }
    first_event.erase(t - max_lag);
  }
  sort_events(log);
  out.log = std::move(log);

  for (const auto& source : sources) {
    ShockSeries series;
    series.source = source;
    series.t0 = c.t0;
    series.tick_len = c.tick_len;
    const double phase = unit(rng) * 2.0 * std::numbers::pi;
    series.values.resize(c.ticks);
    for (std::size_t t = 0; t < c.ticks; ++t) {
      series.values[t] = 100.0 + 5.0 * std::sin(2.0 * std::numbers::pi * static_cast<double>(t) / 720.0 + phase);
    }
    for (const auto& s : c.shock_schedule) {
      if (s.source == source) series.values[static_cast<std::size_t>(s.tick)] += s.magnitude;
    }
    out.exogenous.push_back(std::move(series));
  }
  return out;
}

void write_annotations(std::ostream& out, const Annotations& a) {
  nlohmann::ordered_json doc;
  doc["seed"] = a.seed;
  doc["planted_edges"] = nlohmann::ordered_json::array();
  for (const auto& e : a.planted_edges) {
    doc["planted_edges"].push_back(
        {{"source", e.source}, {"target", e.target}, {"copy_prob", e.copy_prob}, {"lag", e.lag}});
  }
  doc["shocks"] = nlohmann::ordered_json::array();
  for (const auto& s : a.shocks) {
    doc["shocks"].push_back({{"source", s.source}, {"tick", s.tick}, {"magnitude", s.magnitude}});
  }
  doc["shock_responders"] = a.shock_responders;
  doc["user_rates"] = a.user_rates;
  out << doc.dump(2) << '\n';
}

Annotations read_annotations(std::istream& in) {
  Annotations a;
  try {
    const auto doc = nlohmann::json::parse(in);
    a.seed = doc.at("seed").get<std::uint64_t>();
    for (const auto& e : doc.at("planted_edges")) {
      a.planted_edges.push_back({e.at("source").get<std::string>(), e.at("target").get<std::string>(),
                                 e.at("copy_prob").get<double>(), e.at("lag").get<std::int64_t>()});
    }
    for (const auto& s : doc.at("shocks")) {
      a.shocks.push_back({s.at("source").get<std::string>(), s.at("tick").get<std::int64_t>(),
                          s.at("magnitude").get<double>()});
    }
    a.shock_responders = doc.at("shock_responders").get<std::map<std::string, std::vector<ActorId>>>();
    a.user_rates = doc.at("user_rates").get<std::map<ActorId, double>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::Format, std::string("bad annotations: ") + e.what());
  }
  return a;
}

void save_scenario(const std::filesystem::path& dir, const Scenario& scenario) {
  std::error_code ec;
  std::filesystem::create_directories(dir / "exogenous", ec);
  if (ec) throw Error(Errc::Io, "cannot create " + dir.string() + ": " + ec.message());
  save_events(dir / "events.jsonl", scenario.log);
  auto open = [](const std::filesystem::path& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(Errc::Io, "cannot write " + path.string());
    return f;
  };
  {
    auto f = open(dir / "annotations.json");
    write_annotations(f, scenario.annotations);
  }
  for (const auto& series : scenario.exogenous) {
    auto f = open(dir / "exogenous" / (series.source + ".csv"));
    write_shock_csv(f, series);
  }
}

}  // namespace osnsim::synth
