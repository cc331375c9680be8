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

#include <cstdint>
#include <span>
#include <vector>

#include "osnsim/event.hpp"
#include "osnsim/influence.hpp"
#include "osnsim/ingest.hpp"

/// Sampled historical data: the most recent training window replayed as the
/// forecast, and the mixer that merges it with model output.
namespace osnsim::shd {

inline constexpr std::int64_t kWeek = 7 * 24 * 3600;

/// Events with start <= ts < end, in seconds.
struct ReplayWindow {
  std::int64_t start = 0;
  std::int64_t end = 0;
  EventLog events;
};

/// The last `weeks` whole weeks before the end of `frame`. When the log is
/// shorter than one week the window covers the whole frame.
ReplayWindow window_from_log(const EventLog& log, const TickFrame& frame, int weeks = 4);

/// Tiles [forecast_start, forecast_start + horizon) with copies of the
/// window; copy c is shifted by (forecast_start - start) + c * length, and the
/// last copy is truncated. Ids become "shd-<c>-<id>", parents are kept only
/// when they point into the same copy. Throws EmptyWindow, or BadConfig for
/// horizon < 1 or an event outside the window.
std::vector<Event> replay(const ReplayWindow& window, std::int64_t forecast_start,
                          std::int64_t horizon);

struct MixConfig {
  double full_model_shd_fraction = 0.10;
  double ifn_shd_fraction = 0.90;
};

/// Users whose combined share of training interactions is about the configured
/// fraction go to the replay stream. Throws BadConfig for a fraction outside
/// [0, 1].
UserSplit mix_split(const EventLog& training, const MixConfig& config, bool ifn);

/// Model events by users outside `split.less_active` plus replayed events by
/// users inside it, stably sorted by timestamp.
std::vector<Event> mix(std::span<const Event> model_events, std::span<const Event> shd_events,
                       const UserSplit& split);

}  // namespace osnsim::shd
