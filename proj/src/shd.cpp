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

#include "osnsim/shd.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "osnsim/error.hpp"

namespace osnsim::shd {

ReplayWindow window_from_log(const EventLog& log, const TickFrame& frame, int weeks) {
  if (weeks < 1) throw Error(Errc::BadConfig, "replay window needs at least one week");
  const auto end = frame.end_ts();
  const auto span = end - frame.t0;
  const auto whole = std::min<std::int64_t>(weeks, span / kWeek);
  ReplayWindow w;
  w.end = end;
  w.start = whole >= 1 ? end - whole * kWeek : frame.t0;
  for (const auto& e : log) {
    if (e.ts >= w.start && e.ts < w.end) w.events.push_back(e);
  }
  return w;
}

std::vector<Event> replay(const ReplayWindow& window, std::int64_t forecast_start,
                          std::int64_t horizon) {
  if (window.events.empty() || window.end <= window.start) {
    throw Error(Errc::EmptyWindow, "replay window has no events");
  }
  if (horizon < 1) throw Error(Errc::BadConfig, "replay horizon must be >= 1");
  for (const auto& e : window.events) {
    if (e.ts < window.start || e.ts >= window.end) {
      throw Error(Errc::BadConfig, "event " + e.id + " lies outside the replay window");
    }
  }
  std::map<EventId, bool> in_window;
  for (const auto& e : window.events) in_window[e.id] = true;

  const auto length = window.end - window.start;
  const auto forecast_end = forecast_start + horizon;
  std::vector<Event> out;
  for (std::int64_t cycle = 0; forecast_start + cycle * length < forecast_end; ++cycle) {
    const auto prefix = "shd-" + std::to_string(cycle) + "-";
    const auto shift = forecast_start + cycle * length - window.start;
    for (const auto& e : window.events) {
      const auto ts = e.ts + shift;
      if (ts >= forecast_end) continue;
      Event copy = e;
      copy.id = prefix + e.id;
      copy.ts = ts;
      if (copy.parent) {
        auto it = in_window.find(*copy.parent);
        if (it != in_window.end()) {
          copy.parent = prefix + *copy.parent;
        } else {
          copy.parent.reset();
        }
      }
      out.push_back(std::move(copy));
    }
  }
  // A parent later in the window than its child would break ordering.
  std::map<EventId, std::int64_t> ts_of;
  for (const auto& e : out) ts_of[e.id] = e.ts;
  for (auto& e : out) {
    if (e.parent && ts_of.at(*e.parent) > e.ts) e.parent.reset();
  }
  sort_events(out);
  return out;
}

UserSplit mix_split(const EventLog& training, const MixConfig& config, bool ifn) {
  for (double f : {config.full_model_shd_fraction, config.ifn_shd_fraction}) {
    if (!(f >= 0.0 && f <= 1.0)) throw Error(Errc::BadConfig, "mix fractions must be in [0, 1]");
  }
  return split_by_interaction_share(
      training, ifn ? config.ifn_shd_fraction : config.full_model_shd_fraction);
}

std::vector<Event> mix(std::span<const Event> model_events, std::span<const Event> shd_events,
                       const UserSplit& split) {
  std::vector<Event> out;
  for (const auto& e : model_events) {
    if (!split.less_active.count(e.actor)) out.push_back(e);
  }
  for (const auto& e : shd_events) {
    if (split.less_active.count(e.actor)) out.push_back(e);
  }
  sort_events(out);
  return out;
}

}  // namespace osnsim::shd
