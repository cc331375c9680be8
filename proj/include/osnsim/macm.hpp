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
#include <deque>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "osnsim/event.hpp"
#include "osnsim/influence.hpp"
#include "osnsim/ingest.hpp"

/// Multi-action cascade model: users respond to what their influencers did
/// and to exogenous shocks, one Bernoulli draw per received message.
namespace osnsim::macm {

/// q(i, j): probability that i responds to influencer j.
/// p(i, s): probability that i responds to shock source s.
/// Keys are (responder, influencer) and every value stays in [0, 1].
struct ActionProbabilities {
  std::map<std::pair<ActorId, ActorId>, double> q;
  std::map<std::pair<ActorId, std::string>, double> p;
};

/// clamp(prev + noise / (1 + te), 0, 1). Requires te >= 0.
double update_q(double prev, double te, double noise);

/// Every shock term updated as in update_q. Throws KeyMismatch unless the
/// three maps share one key set.
std::map<std::string, double> update_shock_terms(const std::map<std::string, double>& prev,
                                                 const std::map<std::string, double>& te,
                                                 const std::map<std::string, double>& noise);

/// 1 - prod(1 - p_s); 0 for no terms.
double independent_union(const std::map<std::string, double>& terms);

/// independent_union(update_shock_terms(prev, te, noise)).
double update_p(const std::map<std::string, double>& prev,
                const std::map<std::string, double>& te,
                const std::map<std::string, double>& noise);

/// q + p - q p.
double response_probability(double q, double p);

/// The four transitions a message can trigger:
///   Create      new conversation
///   Contribute  same conversation, new message
///   Share       new conversation, same message
///   Delete      same conversation, no message
enum class MessageAction : std::uint8_t { Create, Contribute, Share, Delete };

std::string_view to_string(MessageAction a);
MessageAction classify(PlatformAction action, Platform platform);

struct Message {
  ActorId sender;
  MessageAction action = MessageAction::Contribute;
  ContentId conversation;
  std::optional<MessageId> message;
  EventId event;
  Platform platform = Platform::GitHub;

  friend bool operator==(const Message&, const Message&) = default;
};

/// Bounded FIFO holding the most recent `capacity` messages.
/// capacity == 0 means unbounded.
class Inbox {
 public:
  explicit Inbox(std::size_t capacity = 10) : capacity_(capacity) {}

  void push(Message m);
  /// Removes and returns every held message, newest first, so the first k
  /// messages drained never depend on the capacity as long as it is >= k.
  std::vector<Message> drain();

  std::size_t size() const { return queue_.size(); }
  std::size_t capacity() const { return capacity_; }
  bool empty() const { return queue_.empty(); }
  const std::deque<Message>& messages() const { return queue_; }

 private:
  std::size_t capacity_;
  std::deque<Message> queue_;  // oldest at front
};

struct Config {
  std::size_t inbox_capacity = 10;
  double noise_sigma = 0.01;
  /// Update q on every tick instead of only when the influencer was active.
  bool update_q_every_tick = false;
  /// Spontaneous activity at each user's training base rate.
  bool spontaneous = true;
  std::uint64_t seed = 1;
  std::int64_t ticks = 168;
  std::int64_t tick_len = 3600;
};

struct UserProfile {
  Platform platform = Platform::GitHub;
  double base_rate = 0.0;  // unprompted events per tick, capped at 1
  std::vector<std::pair<PlatformAction, double>> action_mix;
  std::vector<ContentId> contents;
};

struct PlatformProfile {
  std::map<MessageAction, PlatformAction> action_for;
  double delete_fraction = 0.0;
};

struct State {
  std::int64_t t0 = 0;
  std::int64_t tick_len = 3600;
  std::int64_t next_tick = 0;
  Config config;
  std::map<ActorId, UserProfile> users;
  std::map<ActorId, Inbox> inboxes;
  /// influencer -> users it influences
  std::map<ActorId, std::vector<ActorId>> followers;
  /// user -> shock sources that influence it
  std::map<ActorId, std::vector<std::string>> shock_sources;
  ActionProbabilities probs;
  std::map<std::pair<ActorId, ActorId>, double> te_q;
  std::map<std::pair<ActorId, std::string>, double> te_p;
  std::map<Platform, PlatformProfile> platforms;
  /// events per user during the previous tick
  std::map<ActorId, std::uint32_t> last_activity;
  std::mt19937_64 rng;
  std::uint64_t event_counter = 0;
  std::uint64_t content_counter = 0;
  std::uint64_t message_counter = 0;
  std::string id_prefix = "macm";
};

/// Seeds users from `log`, q0 = nte(j -> i) over `endogenous`, p0 = nte(s ->
/// i) over `exogenous`, and each inbox with the last messages of its
/// influencers. Edges with an endpoint outside the log are ignored.
/// Throws EmptyLog.
State init_from_log(const EventLog& log, const InfluenceNetwork& endogenous,
                    const InfluenceNetwork& exogenous, const Config& config);
State init_from_log(const EventLog& log, const InfluenceNetwork& endogenous,
                    const InfluenceNetwork& exogenous, const Config& config,
                    const TickFrame& frame);

/// One tick. Phase one reads every inbox and decides responses against the
/// state left by the previous tick; phase two emits the events and delivers
/// them to followers, who see them at t + 1. `firing` lists the shock
/// sources whose mask bit is set at t. Throws ClockSkew when t < next_tick.
std::vector<Event> step(State& state, std::int64_t t, const std::set<std::string>& firing);

/// Sources whose mask has a 1 at state tick `t`.
std::set<std::string> firing_at(std::span<const BinarySeries> masks, std::int64_t t0,
                                std::int64_t tick_len, std::int64_t t);

/// init_from_log, then `config.ticks` steps past the end of the log. Events are
/// time-sorted.
std::vector<Event> simulate(const EventLog& log, const InfluenceNetwork& endogenous,
                            const InfluenceNetwork& exogenous,
                            std::span<const BinarySeries> masks, const Config& config);

/// As above, with the simulation starting at the end of `frame`.
std::vector<Event> simulate(const EventLog& log, const InfluenceNetwork& endogenous,
                            const InfluenceNetwork& exogenous,
                            std::span<const BinarySeries> masks, const Config& config,
                            const TickFrame& frame);

}  // namespace osnsim::macm
