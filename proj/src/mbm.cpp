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

#include "osnsim/mbm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "osnsim/error.hpp"
#include "osnsim/influence.hpp"

namespace osnsim::mbm {
namespace {

// Cumulative-weight sampler over a fixed candidate order; same distribution
// as select_weighted, O(log n) per draw.
class WeightedSampler {
 public:
  template <class Map>
  explicit WeightedSampler(const Map& nodes) {
    ids_.reserve(nodes.size());
    cumulative_.reserve(nodes.size());
    double total = 0.0;
    for (const auto& [id, node] : nodes) {
      total += node.fitness;
      ids_.push_back(&id);
      cumulative_.push_back(total);
    }
  }

  double total() const { return cumulative_.empty() ? 0.0 : cumulative_.back(); }

  const std::string& draw(std::mt19937_64& rng) const {
    std::uniform_real_distribution<double> uniform(0.0, total());
    const double u = uniform(rng);
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    if (it == cumulative_.end()) --it;
    // Skip zero-weight entries that share a cumulative value.
    while (it != cumulative_.begin() && *(it - 1) == *it) --it;
    return *ids_[static_cast<std::size_t>(it - cumulative_.begin())];
  }

 private:
  std::vector<const std::string*> ids_;
  std::vector<double> cumulative_;
};

// Index i with probability weights[i] / sum(weights).
std::size_t draw_index(std::span<const double> weights, std::mt19937_64& rng) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(Errc::BadConfig, "weights must be finite and non-negative");
    }
    total += w;
  }
  if (!(total > 0.0)) throw Error(Errc::AllZeroWeights, "no candidate has positive weight");
  std::uniform_real_distribution<double> uniform(0.0, total);
  const double u = uniform(rng);
  double running = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] <= 0.0) continue;
    last_positive = i;
    running += weights[i];
    if (u < running) return i;
  }
  return last_positive;
}

std::string platform_tag(Platform p) { return std::string(to_string(p)); }

std::string make_id(const std::string& prefix, Platform p, char kind,
                    std::uint64_t counter) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%08llu", kind,
                static_cast<unsigned long long>(counter));
  return prefix + "-" + platform_tag(p) + "-" + buf;
}

NodeState fresh_node(std::string id, NodeKind kind, std::int64_t tick) {
  NodeState n;
  n.id = std::move(id);
  n.kind = kind;
  n.fitness = 1.0;
  n.age = 1.0;
  n.last_active = tick;
  return n;
}

double removal_age_from(const EventLog& log, const TickFrame& frame) {
  std::map<ActorId, std::int64_t> last;
  std::vector<double> gaps;
  for (const auto& e : log) {
    const auto tick = frame.tick_of(e.ts);
    auto [it, inserted] = last.try_emplace(e.actor, tick);
    if (!inserted) {
      gaps.push_back(static_cast<double>(tick - it->second));
      it->second = tick;
    }
  }
  if (gaps.empty()) return 4.0 * static_cast<double>(std::max<std::size_t>(frame.ticks, 1));
  return 4.0 * std::max(1.0, quantile(std::move(gaps), 0.95));
}

}  // namespace

NodeState update_node(NodeState node, std::int64_t t_c, std::uint64_t actions,
                      AgeRule rule) {
  if (t_c < node.last_active) {
    throw Error(Errc::ClockSkew, "node " + node.id + " updated at tick " +
                                     std::to_string(t_c) + " before its last activity " +
                                     std::to_string(node.last_active));
  }
  const bool acted = actions > 0;
  const auto elapsed = static_cast<double>(t_c - node.last_active);
  const double activity_step = 1.0 - elapsed * node.fitness;
  const double bulk_step = 1.0 - elapsed * (static_cast<double>(t_c) + 1.0);

  switch (rule) {
    case AgeRule::ActivitySplit:
      node.age += acted ? activity_step : bulk_step;
      break;
    case AgeRule::ActivityOnly:
      node.age += activity_step;
      break;
    case AgeRule::BulkOnly:
      node.age += bulk_step;
      break;
  }
  if (acted) {
    node.action_count += actions;
    node.last_active = t_c;
  }
  node.age = std::max(node.age, kAgeFloor);
  node.fitness = static_cast<double>(node.action_count) / node.age;
  return node;
}

const std::string& select_weighted(std::span<const WeightedCandidate> candidates,
                                   std::mt19937_64& rng) {
  std::vector<double> weights;
  weights.reserve(candidates.size());
  for (const auto& c : candidates) weights.push_back(c.weight);
  return candidates[draw_index(weights, rng)].id;
}

Layer layer_of(OntologyAction action) {
  switch (action) {
    case OntologyAction::Create: return Layer::Creation;
    case OntologyAction::Post: return Layer::Contribution;
    case OntologyAction::Vote: return Layer::Vote;
    case OntologyAction::Follow: return Layer::Follow;
  }
  return Layer::Contribution;
}

State init_from_log(const EventLog& log, const Config& config) {
  if (log.empty()) throw Error(Errc::EmptyLog, "event log is empty");
  return init_from_log(log, config, frame_for(log, config.tick_len));
}

State init_from_log(const EventLog& log, const Config& config, const TickFrame& frame) {
  if (log.empty()) throw Error(Errc::EmptyLog, "event log is empty");
  if (frame.ticks == 0) throw Error(Errc::BadConfig, "tick frame is empty");
  State state;
  state.platform = log.front().platform;
  state.t0 = frame.t0;
  state.tick_len = frame.tick_len;
  state.next_tick = static_cast<std::int64_t>(frame.ticks);
  state.age_rule = config.age_rule;
  state.rng.seed(config.seed);

  std::array<std::map<PlatformAction, double>, kLayerCount> actions;
  for (const auto& e : log) {
    if (e.platform != state.platform) {
      throw Error(Errc::BadConfig, "mbm state needs a single-platform log");
    }
    const auto tick = std::clamp<std::int64_t>(frame.tick_of(e.ts), 0, state.next_tick - 1);
    for (auto [map, id, kind] :
         {std::tuple{&state.users, &e.actor, NodeKind::User},
          std::tuple{&state.targets, &e.content, NodeKind::Target}}) {
      auto [it, inserted] = map->try_emplace(*id, fresh_node(*id, kind, tick));
      auto& node = it->second;
      ++node.degree;
      ++node.action_count;
      node.last_active = std::max(node.last_active, tick);
    }
    const auto layer = layer_of(map_platform_action(e.action, e.platform));
    actions[static_cast<std::size_t>(layer)][e.action] += 1.0;
    state.layer_fitness[static_cast<std::size_t>(layer)] += 1.0;
  }
  for (std::size_t l = 0; l < kLayerCount; ++l) {
    state.layer_actions[l].assign(actions[l].begin(), actions[l].end());
  }

  const auto ticks = static_cast<double>(frame.ticks);
  state.node_add_rate =
      config.node_add_rate.value_or(static_cast<double>(state.users.size()) / ticks);
  state.activity_rate = config.activity_rate.value_or(
      std::max(0.0, static_cast<double>(log.size()) / ticks - state.node_add_rate));
  state.removal_age = config.removal_age.value_or(removal_age_from(log, frame));
  if (state.node_add_rate < 0.0 || state.activity_rate < 0.0 || !(state.removal_age > 0.0)) {
    throw Error(Errc::BadConfig, "mbm rates must be >= 0 and removal_age > 0");
  }
  return state;
}

const std::string& choose_target(const State& state, std::mt19937_64& rng) {
  WeightedSampler sampler(state.targets);
  if (!(sampler.total() > 0.0)) throw Error(Errc::AllZeroWeights, "no target has fitness");
  return sampler.draw(rng);
}

StepResult step(State& state, std::int64_t t) {
  if (t < state.next_tick) {
    throw Error(Errc::ClockSkew, "mbm step called for an earlier tick");
  }
  StepResult result;
  auto& rng = state.rng;

  // I) node selection
  const WeightedSampler user_sampler(state.users);
  const WeightedSampler target_sampler(state.targets);
  std::vector<std::string> actors;
  if (user_sampler.total() > 0.0 && state.activity_rate > 0.0) {
    std::poisson_distribution<std::uint64_t> draws(state.activity_rate);
    const auto n = draws(rng);
    for (std::uint64_t i = 0; i < n; ++i) actors.push_back(user_sampler.draw(rng));
  }
  if (state.node_add_rate > 0.0) {
    std::poisson_distribution<std::uint64_t> arrivals(state.node_add_rate);
    const auto n = arrivals(rng);
    for (std::uint64_t i = 0; i < n; ++i) {
      auto id = make_id(state.id_prefix, state.platform, 'u', state.user_counter++);
      state.users.emplace(id, fresh_node(id, NodeKind::User, t));
      actors.push_back(std::move(id));
    }
  }

  // II) interaction
  std::map<std::string, std::uint64_t> acted_users;
  std::map<std::string, std::uint64_t> acted_targets;
  const auto timestamp = state.t0 + t * state.tick_len;
  for (const auto& actor : actors) {
    std::array<double, kLayerCount> layer_weights{};
    double layer_mass = 0.0;
    for (std::size_t l = 0; l < kLayerCount; ++l) {
      if (state.layer_actions[l].empty()) continue;
      layer_weights[l] = state.layer_fitness[l];
      layer_mass += layer_weights[l];
    }
    if (!(layer_mass > 0.0)) break;
    const auto layer_index = draw_index(layer_weights, rng);
    const auto layer = static_cast<Layer>(layer_index);

    const auto& mix = state.layer_actions[layer_index];
    std::vector<double> action_weights;
    for (const auto& [a, w] : mix) action_weights.push_back(w);
    const auto action = mix[draw_index(action_weights, rng)].first;

    std::string target;
    bool target_is_user = false;
    if (layer == Layer::Creation) {
      target = make_id(state.id_prefix, state.platform, 'c', state.target_counter++);
      state.targets.emplace(target, fresh_node(target, NodeKind::Target, t));
    } else if (layer == Layer::Follow) {
      if (!(user_sampler.total() > 0.0)) continue;
      target = user_sampler.draw(rng);
      if (target == actor) continue;
      target_is_user = true;
    } else {
      if (!(target_sampler.total() > 0.0)) continue;
      target = target_sampler.draw(rng);
    }

    Event e;
    e.id = make_id(state.id_prefix, state.platform, 'e', state.event_counter++);
    e.ts = timestamp;
    e.actor = actor;
    e.action = action;
    e.content = target;
    e.platform = state.platform;
    result.events.push_back(std::move(e));

    state.users.at(actor).degree += 1;
    ++acted_users[actor];
    if (target_is_user) {
      state.users.at(target).degree += 1;
      ++acted_users[target];
    } else {
      state.targets.at(target).degree += 1;
      ++acted_targets[target];
    }
    result.degree_increments += 2;
    state.layer_fitness[layer_index] += 1.0;
  }

  // III) update and removal
  for (auto* nodes : {&state.users, &state.targets}) {
    const auto& acted = nodes == &state.users ? acted_users : acted_targets;
    for (auto it = nodes->begin(); it != nodes->end();) {
      auto found = acted.find(it->first);
      const std::uint64_t count = found == acted.end() ? 0 : found->second;
      it->second = update_node(std::move(it->second), t, count, state.age_rule);
      if (it->second.age >= state.removal_age) {
        it = nodes->erase(it);
        ++result.removed;
      } else {
        ++it;
      }
    }
  }
  state.next_tick = t + 1;
  return result;
}

std::vector<Event> simulate(const EventLog& log, const Config& config) {
  if (log.empty()) throw Error(Errc::EmptyLog, "event log is empty");
  return simulate(log, config, frame_for(log, config.tick_len));
}

std::vector<Event> simulate(const EventLog& log, const Config& config, const TickFrame& frame) {
  if (log.empty()) throw Error(Errc::EmptyLog, "event log is empty");
  std::vector<Event> out;
  std::uint64_t platform_index = 0;
  for (Platform p : kAllPlatforms) {
    EventLog part;
    for (const auto& e : log) {
      if (e.platform == p) part.push_back(e);
    }
    if (part.empty()) continue;
    Config per_platform = config;
    per_platform.seed = config.seed + 0x9E3779B97F4A7C15ull * ++platform_index;
    auto state = init_from_log(part, per_platform, frame);
    const auto start = static_cast<std::int64_t>(frame.ticks);
    for (std::int64_t t = start; t < start + config.ticks; ++t) {
      auto r = step(state, t);
      std::move(r.events.begin(), r.events.end(), std::back_inserter(out));
    }
  }
  sort_events(out);
  return out;
}

}  // namespace osnsim::mbm
