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
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "osnsim/event.hpp"

namespace osnsim {

/// Events sorted ascending by timestamp (stable with respect to input order).
using EventLog = std::vector<Event>;

struct Reject {
  std::size_t line = 0;  // 1-based
  std::string reason;
  std::string text;
};

struct LoadFilter {
  std::optional<Platform> platform;
  std::optional<std::int64_t> from;  // inclusive
  std::optional<std::int64_t> to;    // exclusive
};

struct LoadResult {
  EventLog log;
  std::vector<Reject> rejects;
};

/// Malformed lines, duplicate ids and parents that post-date their child are
/// collected as rejects. With `strict` the first bad line throws
/// Error(Format) carrying its line number instead.
LoadResult read_events(std::istream& in, const LoadFilter& filter = {},
                       bool strict = false);
LoadResult load_events(const std::filesystem::path& path,
                       const LoadFilter& filter = {}, bool strict = false);

void write_events(std::ostream& out, std::span<const Event> events);
void save_events(const std::filesystem::path& path, std::span<const Event> events);
void write_rejects(std::ostream& out, std::span<const Reject> rejects);

void sort_events(EventLog& log);

/// Tick grid shared by every series derived from one run.
struct TickFrame {
  std::int64_t t0 = 0;
  std::int64_t tick_len = 3600;
  std::size_t ticks = 0;

  std::int64_t tick_of(std::int64_t ts) const;
  std::int64_t start_of(std::int64_t tick) const { return t0 + tick * tick_len; }
  std::int64_t end_ts() const { return start_of(static_cast<std::int64_t>(ticks)); }
};

/// Frame aligned to a multiple of `tick_len` that covers every event.
/// Throws EmptyLog / BadConfig.
TickFrame frame_for(const EventLog& log, std::int64_t tick_len);

struct ActivitySeries {
  std::string owner;
  std::int64_t t0 = 0;
  std::int64_t tick_len = 3600;
  std::vector<std::uint32_t> counts;
};

struct BinarySeries {
  std::string owner;
  std::int64_t t0 = 0;
  std::int64_t tick_len = 3600;
  std::vector<std::uint8_t> bits;
};

using ActivityTable = std::map<ActorId, ActivitySeries>;

ActivityTable bin_activity(const EventLog& log, std::int64_t tick_len);
/// Events outside `frame` are ignored.
ActivityTable bin_activity(const EventLog& log, const TickFrame& frame);

BinarySeries binarize(const ActivitySeries& series, std::uint32_t threshold = 1);

}  // namespace osnsim
