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

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "osnsim/event.hpp"
#include "osnsim/exogenous.hpp"
#include "osnsim/ingest.hpp"

/// Synthetic ground truth with planted structure.
namespace osnsim::synth {

/// `target` acts at t with probability `copy_prob` whenever `source` acted at
/// t - lag, on the same content and with the source event as parent.
struct PlantedEdge {
  ActorId source;
  ActorId target;
  double copy_prob = 0.9;
  std::int64_t lag = 1;

  friend bool operator==(const PlantedEdge&, const PlantedEdge&) = default;
};

/// A spike of height `magnitude` added to the series of `source` at `tick`;
/// responsive users act at tick + 1. Series baselines are smooth, so any
/// magnitude well above zero stands out after high-pass filtering.
struct PlantedShock {
  std::string source;
  std::int64_t tick = 0;
  double magnitude = 10.0;

  friend bool operator==(const PlantedShock&, const PlantedShock&) = default;
};

struct ScenarioConfig {
  std::size_t users = 100;
  std::size_t ticks = 5000;
  std::int64_t tick_len = 3600;
  std::int64_t t0 = 1578268800;  // Monday 2020-01-06 00:00 UTC
  Platform platform = Platform::GitHub;
  std::vector<PlantedEdge> planted_edges;
  std::vector<PlantedShock> shock_schedule;
  /// Rate multiplier 1 + A cos(2 pi dow / 7), dow = 0 on Monday. Needs A < 1.
  double weekly_seasonality = 0.5;
  /// Per-user rate = base_rate * Pareto(activity_exponent), capped at max_rate.
  double activity_exponent = 1.5;
  double base_rate = 0.02;
  double max_rate = 0.5;
  std::size_t contents = 200;
  /// Users that answer each shock source, and their answer probability.
  std::size_t shock_responders = 5;
  double shock_response = 0.9;
  // Planted-edge targets act organically at base_rate only, so most of their
  // activity is copying.
  bool reactive_targets = false;
  std::uint64_t seed = 1;
};

/// 100 users, 5000 ticks, 10 planted lag-1 edges with copy_prob 0.9 over
/// distinct users and reactive targets, and 2 shock sources with 100 shocks each at least 30 ticks apart.
ScenarioConfig standard_scenario(std::uint64_t seed = 1);

struct Annotations {
  std::vector<PlantedEdge> planted_edges;
  std::vector<PlantedShock> shocks;
  std::map<std::string, std::vector<ActorId>> shock_responders;
  std::map<ActorId, double> user_rates;
  std::uint64_t seed = 0;
};

struct Scenario {
  EventLog log;
  Annotations annotations;
  std::vector<ShockSeries> exogenous;
};

/// Deterministic per seed. Throws BadConfig.
Scenario generate(const ScenarioConfig& config);

/// "user0007"-style id of user `index`.
std::string user_id(std::size_t index);

void write_annotations(std::ostream& out, const Annotations& annotations);
Annotations read_annotations(std::istream& in);

/// events.jsonl, annotations.json and exogenous/<source>.csv under `dir`.
void save_scenario(const std::filesystem::path& dir, const Scenario& scenario);

}  // namespace osnsim::synth
