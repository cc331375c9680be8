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

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "osnsim/event.hpp"
#include "osnsim/ingest.hpp"

/// Multiplexity-based model: users attach to targets by fitness-weighted
/// preferential attachment while fitness decays with age.
namespace osnsim::mbm {

enum class NodeKind : std::uint8_t { User, Target };

struct NodeState {
  std::string id;
  NodeKind kind = NodeKind::User;
  double fitness = 1.0;
  double age = 1.0;
  std::uint64_t degree = 0;
  std::uint64_t action_count = 0;
  std::int64_t last_active = 0;  // tick

  friend bool operator==(const NodeState&, const NodeState&) = default;
};

/// Which age equation applies to which nodes.
enum class AgeRule : std::uint8_t {
  /// Activity equation (fitness-scaled) for nodes that acted this tick, bulk
  /// equation (clock-scaled) for idle ones.
  ActivitySplit,
  /// Activity equation for every node.
  ActivityOnly,
  /// Bulk equation for every node.
  BulkOnly,
};

inline constexpr double kAgeFloor = 1e-6;

/// Advances one node to tick `t_c`. `actions` is the number of interactions
/// the node took part in during that tick (0 = idle):
///   acted: a += 1 - (t_c - t_p) * F,       then |A| += actions, t_p = t_c
///   idle:  a += 1 - (t_c - t_p) * (t_c + 1)
/// followed by a = max(a, kAgeFloor) and F = |A| / a.
/// Throws ClockSkew when t_c < t_p.
NodeState update_node(NodeState node, std::int64_t t_c, std::uint64_t actions,
                      AgeRule rule = AgeRule::ActivitySplit);
inline NodeState update_node(NodeState node, std::int64_t t_c, bool acted,
                             AgeRule rule = AgeRule::ActivitySplit) {
  return update_node(std::move(node), t_c, std::uint64_t{acted ? 1u : 0u}, rule);
}

struct WeightedCandidate {
  std::string id;
  double weight = 0.0;
};

/// P(id) = weight / sum(weights). Throws AllZeroWeights, or BadConfig for a
/// negative or non-finite weight.
const std::string& select_weighted(std::span<const WeightedCandidate> candidates,
                                   std::mt19937_64& rng);

/// Layers of the multiplex graph, one per ontology action.
enum class Layer : std::uint8_t { Creation, Contribution, Vote, Follow };
inline constexpr std::size_t kLayerCount = 4;

Layer layer_of(OntologyAction action);

struct Config {
  std::optional<double> node_add_rate;  // new users per tick; fitted if unset
  std::optional<double> activity_rate;  // events per tick by existing users
  std::optional<double> removal_age;
  std::uint64_t seed = 1;
  std::int64_t ticks = 168;
  std::int64_t tick_len = 3600;
  AgeRule age_rule = AgeRule::ActivitySplit;
};

struct State {
  Platform platform = Platform::GitHub;
  std::int64_t t0 = 0;
  std::int64_t tick_len = 3600;
  std::int64_t next_tick = 0;
  std::map<std::string, NodeState> users;
  std::map<std::string, NodeState> targets;
  std::array<double, kLayerCount> layer_fitness{};
  std::array<std::vector<std::pair<PlatformAction, double>>, kLayerCount> layer_actions;
  double node_add_rate = 0.0;
  double activity_rate = 0.0;
  double removal_age = 0.0;
  AgeRule age_rule = AgeRule::ActivitySplit;
  std::mt19937_64 rng;
  std::uint64_t user_counter = 0;
  std::uint64_t target_counter = 0;
  std::uint64_t event_counter = 0;
  std::string id_prefix = "mbm";
};

/// Seeds nodes from a single-platform log. Every node starts with F = 1;
/// unset rates are fitted from the log. Throws EmptyLog, or BadConfig for a
/// mixed-platform log.
State init_from_log(const EventLog& log, const Config& config);
/// Same, on an explicit tick frame shared with other platforms.
State init_from_log(const EventLog& log, const Config& config, const TickFrame& frame);

struct StepResult {
  std::vector<Event> events;
  std::uint64_t degree_increments = 0;
  std::size_t removed = 0;
};

/// Node selection, interaction and update for tick `t` (t >= state.next_tick).
StepResult step(State& state, std::int64_t t);

/// Draws one target by fitness from the current state without mutating the
/// graph.
const std::string& choose_target(const State& state, std::mt19937_64& rng);

/// Runs one state per platform found in `log` for `config.ticks` ticks past the
/// end of the log and returns the merged, time-sorted events.
std::vector<Event> simulate(const EventLog& log, const Config& config);

/// As above, with the simulation starting at the end of `frame` rather than the
/// end of the log.
std::vector<Event> simulate(const EventLog& log, const Config& config, const TickFrame& frame);

}  // namespace osnsim::mbm
