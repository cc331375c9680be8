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

#include "osnsim/macm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "osnsim/error.hpp"

namespace osnsim::macm {
namespace {

double clamp01(double v) { return std::clamp(v, 0.0, 1.0); }

std::string make_id(const std::string& prefix, char kind, std::uint64_t counter) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%08llu", kind, static_cast<unsigned long long>(counter));
  return prefix + "-" + buf;
}

bool bernoulli(std::mt19937_64& rng, double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

// Zero-mean Gaussian scaled by the activity gap of the pair; no draw when
// either factor is zero.
double draw_noise(State& s, double activity_gap) {
  if (!(s.config.noise_sigma > 0.0) || activity_gap == 0.0) return 0.0;
  return std::normal_distribution<double>(0.0, s.config.noise_sigma)(s.rng) * activity_gap;
}

double activity_of(const State& s, const ActorId& id) {
  auto it = s.last_activity.find(id);
  return it == s.last_activity.end() ? 0.0 : static_cast<double>(it->second);
}

struct Decision {
  ActorId actor;
  MessageAction action = MessageAction::Contribute;
  std::optional<ContentId> content;  // unset: a new conversation
  std::optional<MessageId> message;
  bool new_message = false;
  std::optional<EventId> parent;
};

PlatformAction platform_action(const State& s, Platform platform, MessageAction action,
                               const UserProfile& user) {
  auto pit = s.platforms.find(platform);
  if (pit != s.platforms.end()) {
    for (auto a : {action, MessageAction::Contribute, MessageAction::Create}) {
      auto it = pit->second.action_for.find(a);
      if (it != pit->second.action_for.end()) return it->second;
    }
  }
  if (!user.action_mix.empty()) return user.action_mix.front().first;
  return platform_actions(platform).front();
}

Decision respond(State& s, const ActorId& i, const Message& m) {
  Decision d;
  d.actor = i;
  d.parent = m.event;
  d.action = m.action == MessageAction::Share ? MessageAction::Share : MessageAction::Contribute;
  const auto platform = s.users.at(i).platform;
  auto pit = s.platforms.find(platform);
  if (pit != s.platforms.end() && bernoulli(s.rng, pit->second.delete_fraction)) {
    d.action = MessageAction::Delete;
  }
  switch (d.action) {
    case MessageAction::Share:
      d.message = m.message ? m.message : std::optional<MessageId>(m.event);
      break;
    case MessageAction::Delete:
      d.content = m.conversation;
      break;
    default:
      d.content = m.conversation;
      d.new_message = true;
      break;
  }
  return d;
}

Decision spontaneous(State& s, const ActorId& i, const UserProfile& user) {
  Decision d;
  d.actor = i;
  std::vector<double> weights;
  for (const auto& [a, w] : user.action_mix) weights.push_back(w);
  PlatformAction chosen = platform_action(s, user.platform, MessageAction::Create, user);
  if (!weights.empty()) {
    std::discrete_distribution<std::size_t> pick(weights.begin(), weights.end());
    chosen = user.action_mix[pick(s.rng)].first;
  }
  d.action = classify(chosen, user.platform);
  if (d.action == MessageAction::Share) d.action = MessageAction::Contribute;
  if (d.action != MessageAction::Create && !user.contents.empty()) {
    std::uniform_int_distribution<std::size_t> pick(0, user.contents.size() - 1);
    d.content = user.contents[pick(s.rng)];
  } else {
    d.action = MessageAction::Create;
  }
  d.new_message = d.action != MessageAction::Delete;
  return d;
}

}  // namespace

double update_q(double prev, double te, double noise) {
  if (!(te >= 0.0)) throw Error(Errc::BadConfig, "transfer entropy must be >= 0");
  return clamp01(prev + noise / (1.0 + te));
}

std::map<std::string, double> update_shock_terms(const std::map<std::string, double>& prev,
                                                 const std::map<std::string, double>& te,
                                                 const std::map<std::string, double>& noise) {
  if (prev.size() != te.size() || prev.size() != noise.size()) {
    throw Error(Errc::KeyMismatch, "shock maps have different key sets");
  }
  std::map<std::string, double> out;
  auto t = te.begin();
  auto n = noise.begin();
  for (const auto& [key, p] : prev) {
    if (t->first != key || n->first != key) {
      throw Error(Errc::KeyMismatch, "shock maps have different key sets at '" + key + "'");
    }
    out.emplace_hint(out.end(), key, update_q(p, t->second, n->second));
    ++t;
    ++n;
  }
  return out;
}

double independent_union(const std::map<std::string, double>& terms) {
  double none = 1.0;
  for (const auto& [key, p] : terms) none *= 1.0 - p;
  return clamp01(1.0 - none);
}

double update_p(const std::map<std::string, double>& prev,
                const std::map<std::string, double>& te,
                const std::map<std::string, double>& noise) {
  return independent_union(update_shock_terms(prev, te, noise));
}

double response_probability(double q, double p) { return q + p - q * p; }

std::string_view to_string(MessageAction a) {
  switch (a) {
    case MessageAction::Create: return "create";
    case MessageAction::Contribute: return "contribute";
    case MessageAction::Share: return "share";
    case MessageAction::Delete: return "delete";
  }
  return "contribute";
}

MessageAction classify(PlatformAction action, Platform platform) {
  const auto kind = map_platform_action(action, platform);
  switch (action) {
    case PlatformAction::Fork:
    case PlatformAction::Retweet:
    case PlatformAction::Quote:
      return MessageAction::Share;
    case PlatformAction::Delete:
      return MessageAction::Delete;
    default:
      return kind == OntologyAction::Create ? MessageAction::Create : MessageAction::Contribute;
  }
}

void Inbox::push(Message m) {
  queue_.push_back(std::move(m));
  if (capacity_ > 0 && queue_.size() > capacity_) queue_.pop_front();
}

std::vector<Message> Inbox::drain() {
  std::vector<Message> out(std::make_move_iterator(queue_.rbegin()),
                           std::make_move_iterator(queue_.rend()));
  queue_.clear();
  return out;
}

State init_from_log(const EventLog& log, const InfluenceNetwork& endogenous,
                    const InfluenceNetwork& exogenous, const Config& config) {
  if (log.empty()) throw Error(Errc::EmptyLog, "event log is empty");
  return init_from_log(log, endogenous, exogenous, config, frame_for(log, config.tick_len));
}

State init_from_log(const EventLog& log, const InfluenceNetwork& endogenous,
                    const InfluenceNetwork& exogenous, const Config& config,
                    const TickFrame& frame) {
  if (log.empty()) throw Error(Errc::EmptyLog, "event log is empty");
  if (frame.ticks == 0) throw Error(Errc::BadConfig, "tick frame is empty");
  if (config.noise_sigma < 0.0) throw Error(Errc::BadConfig, "noise_sigma must be >= 0");
  State s;
  s.t0 = frame.t0;
  s.tick_len = frame.tick_len;
  s.next_tick = static_cast<std::int64_t>(frame.ticks);
  s.config = config;
  s.rng.seed(config.seed);

  struct Tally {
    std::map<Platform, std::uint64_t> platforms;
    std::map<PlatformAction, double> actions;
    std::set<ContentId> contents;
    std::uint64_t unprompted = 0;
  };
  std::map<ActorId, Tally> tallies;
  std::map<Platform, std::map<MessageAction, std::map<PlatformAction, std::uint64_t>>> by_class;
  std::map<Platform, std::pair<std::uint64_t, std::uint64_t>> deletes_all, deletes_replies;
  for (const auto& e : log) {
    auto& t = tallies[e.actor];
    ++t.platforms[e.platform];
    t.actions[e.action] += 1.0;
    t.contents.insert(e.content);
    if (!e.parent) ++t.unprompted;
    const auto cls = classify(e.action, e.platform);
    ++by_class[e.platform][cls][e.action];
    auto& all = deletes_all[e.platform];
    ++all.second;
    if (cls == MessageAction::Delete) ++all.first;
    if (e.parent) {
      auto& replies = deletes_replies[e.platform];
      ++replies.second;
      if (cls == MessageAction::Delete) ++replies.first;
    }
  }

  for (const auto& [platform, classes] : by_class) {
    PlatformProfile profile;
    for (const auto& [cls, counts] : classes) {
      auto best = std::max_element(counts.begin(), counts.end(), [](const auto& a, const auto& b) {
        return a.second < b.second;
      });
      profile.action_for[cls] = best->first;
    }
    auto replies = deletes_replies[platform];
    auto basis = replies.second > 0 ? replies : deletes_all[platform];
    profile.delete_fraction =
        basis.second ? static_cast<double>(basis.first) / static_cast<double>(basis.second) : 0.0;
    s.platforms[platform] = profile;
  }

  const auto ticks = static_cast<double>(frame.ticks);
  for (auto& [id, t] : tallies) {
    UserProfile user;
    user.platform = std::max_element(t.platforms.begin(), t.platforms.end(),
                                     [](const auto& a, const auto& b) { return a.second < b.second; })
                        ->first;
    user.base_rate = std::min(1.0, static_cast<double>(t.unprompted) / ticks);
    for (const auto& [a, w] : t.actions) {
      if (is_platform_action(a, user.platform)) user.action_mix.emplace_back(a, w);
    }
    user.contents.assign(t.contents.begin(), t.contents.end());
    s.users.emplace(id, std::move(user));
    s.inboxes.emplace(id, Inbox(config.inbox_capacity));
  }

  for (const auto& edge : endogenous.edges) {
    if (!s.users.count(edge.source) || !s.users.count(edge.target)) continue;
    if (edge.source == edge.target) continue;
    s.followers[edge.source].push_back(edge.target);
    s.probs.q[{edge.target, edge.source}] = clamp01(edge.nte);
    s.te_q[{edge.target, edge.source}] = std::max(0.0, edge.te);
  }
  for (const auto& edge : exogenous.edges) {
    if (!s.users.count(edge.target)) continue;
    s.shock_sources[edge.target].push_back(edge.source);
    s.probs.p[{edge.target, edge.source}] = clamp01(edge.nte);
    s.te_p[{edge.target, edge.source}] = std::max(0.0, edge.te);
  }

  const auto last_tick = s.next_tick - 1;
  for (const auto& e : log) {
    if (frame.tick_of(e.ts) >= last_tick) ++s.last_activity[e.actor];
    auto fit = s.followers.find(e.actor);
    if (fit == s.followers.end()) continue;
    const auto cls = classify(e.action, e.platform);
    Message m{e.actor, cls, e.content,
              cls == MessageAction::Delete ? std::nullopt
                                           : std::optional<MessageId>(e.message.value_or(e.id)),
              e.id, e.platform};
    for (const auto& f : fit->second) s.inboxes.at(f).push(m);
  }
  return s;
}

std::vector<Event> step(State& s, std::int64_t t, const std::set<std::string>& firing) {
  if (t < s.next_tick) throw Error(Errc::ClockSkew, "macm step called for an earlier tick");

  // Phase one: decide against the previous tick's state.
  std::vector<Decision> decisions;
  for (auto& [i, user] : s.users) {
    double p = 0.0;
    if (auto sit = s.shock_sources.find(i); sit != s.shock_sources.end()) {
      std::map<std::string, double> prev, te, noise;
      for (const auto& source : sit->second) {
        if (!firing.count(source)) continue;
        const std::pair key{i, source};
        prev[source] = s.probs.p.at(key);
        te[source] = s.te_p.at(key);
        noise[source] = draw_noise(s, std::abs(1.0 - activity_of(s, i)));
      }
      if (!prev.empty()) {
        const auto terms = update_shock_terms(prev, te, noise);
        for (const auto& [source, value] : terms) s.probs.p[{i, source}] = value;
        p = independent_union(terms);
      }
    }

    auto messages = s.inboxes.at(i).drain();
    for (const auto& m : messages) {
      const std::pair key{i, m.sender};
      auto qit = s.probs.q.find(key);
      double q = 0.0;
      if (qit != s.probs.q.end()) {
        if (!s.config.update_q_every_tick) {
          const double gap = std::abs(activity_of(s, m.sender) - activity_of(s, i));
          qit->second = update_q(qit->second, s.te_q.at(key), draw_noise(s, gap));
        }
        q = qit->second;
      }
      if (bernoulli(s.rng, response_probability(q, p))) decisions.push_back(respond(s, i, m));
    }
    if (s.config.spontaneous && bernoulli(s.rng, response_probability(user.base_rate, p))) {
      decisions.push_back(spontaneous(s, i, user));
    }
  }
  if (s.config.update_q_every_tick) {
    for (auto& [key, q] : s.probs.q) {
      const double gap = std::abs(activity_of(s, key.second) - activity_of(s, key.first));
      q = update_q(q, s.te_q.at(key), draw_noise(s, gap));
    }
  }

  // Phase two: emit and deliver.
  std::vector<Event> out;
  std::map<ActorId, std::uint32_t> activity;
  const auto ts = s.t0 + t * s.tick_len;
  for (auto& d : decisions) {
    auto& user = s.users.at(d.actor);
    if (!d.content) {
      d.content = make_id(s.id_prefix, 'c', s.content_counter++);
      user.contents.push_back(*d.content);
    }
    if (d.new_message) d.message = make_id(s.id_prefix, 'm', s.message_counter++);
    Event e;
    e.id = make_id(s.id_prefix, 'e', s.event_counter++);
    e.ts = ts;
    e.actor = d.actor;
    e.action = platform_action(s, user.platform, d.action, user);
    e.content = *d.content;
    e.message = d.message;
    e.platform = user.platform;
    e.parent = d.parent;
    ++activity[d.actor];
    if (auto fit = s.followers.find(d.actor); fit != s.followers.end()) {
      const Message m{d.actor, d.action, e.content, e.message, e.id, e.platform};
      for (const auto& f : fit->second) s.inboxes.at(f).push(m);
    }
    out.push_back(std::move(e));
  }
  s.last_activity = std::move(activity);
  s.next_tick = t + 1;
  return out;
}

std::set<std::string> firing_at(std::span<const BinarySeries> masks, std::int64_t t0,
                                std::int64_t tick_len, std::int64_t t) {
  std::set<std::string> out;
  const auto ts = t0 + t * tick_len;
  for (const auto& mask : masks) {
    if (mask.tick_len <= 0) continue;
    const auto offset = ts - mask.t0;
    auto idx = offset / mask.tick_len;
    if (offset % mask.tick_len != 0 && offset < 0) --idx;
    if (idx >= 0 && static_cast<std::size_t>(idx) < mask.bits.size() &&
        mask.bits[static_cast<std::size_t>(idx)]) {
      out.insert(mask.owner);
    }
  }
  return out;
}

std::vector<Event> simulate(const EventLog& log, const InfluenceNetwork& endogenous,
                            const InfluenceNetwork& exogenous,
                            std::span<const BinarySeries> masks, const Config& config) {
  return simulate(log, endogenous, exogenous, masks, config, frame_for(log, config.tick_len));
}

std::vector<Event> simulate(const EventLog& log, const InfluenceNetwork& endogenous,
                            const InfluenceNetwork& exogenous,
                            std::span<const BinarySeries> masks, const Config& config,
                            const TickFrame& frame) {
  auto state = init_from_log(log, endogenous, exogenous, config, frame);
  std::vector<Event> out;
  const auto start = state.next_tick;
  for (std::int64_t t = start; t < start + config.ticks; ++t) {
    auto events = step(state, t, firing_at(masks, state.t0, state.tick_len, t));
    std::move(events.begin(), events.end(), std::back_inserter(out));
  }
  sort_events(out);
  return out;
}

}  // namespace osnsim::macm
