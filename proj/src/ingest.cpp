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

#include "osnsim/ingest.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "json.hpp"
#include "osnsim/error.hpp"

namespace osnsim {
namespace {

bool passes(const Event& e, const LoadFilter& filter) {
  if (filter.platform && e.platform != *filter.platform) return false;
  if (filter.from && e.ts < *filter.from) return false;
  if (filter.to && e.ts >= *filter.to) return false;
  return true;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

}  // namespace

LoadResult read_events(std::istream& in, const LoadFilter& filter, bool strict) {
  LoadResult result;
  std::unordered_set<std::string> seen;
  std::vector<std::size_t> line_of;
  std::string text;
  std::size_t line_no = 0;

  auto reject = [&](std::string reason, const std::string& raw) {
    if (strict) {
      throw Error(Errc::Format, "line " + std::to_string(line_no) + ": " + reason,
                  line_no);
    }
    result.rejects.push_back({line_no, std::move(reason), raw});
  };

  while (std::getline(in, text)) {
    ++line_no;
    if (!text.empty() && text.back() == '\r') text.pop_back();
    if (text.find_first_not_of(" \t") == std::string::npos) continue;
    Event event;
    try {
      event = parse_event_line(text);
    } catch (const Error& e) {
      reject(e.what(), text);
      continue;
    }
    auto validation = validate_event(event);
    if (!validation.ok()) {
      reject(std::string(to_string(validation.violations.front())), text);
      continue;
    }
    if (!seen.insert(event.id).second) {
      reject("DuplicateId", text);
      continue;
    }
    if (!passes(event, filter)) continue;
    result.log.push_back(std::move(event));
    line_of.push_back(line_no);
  }

  // Parent ordering needs the whole file; dangling parents are allowed since
  // sampled or filtered logs routinely cut threads.
  std::unordered_map<std::string, std::int64_t> ts_by_id;
  for (const auto& e : result.log) ts_by_id.emplace(e.id, e.ts);
  EventLog kept;
  kept.reserve(result.log.size());
  for (std::size_t i = 0; i < result.log.size(); ++i) {
    auto& e = result.log[i];
    if (e.parent) {
      auto it = ts_by_id.find(*e.parent);
      if (it != ts_by_id.end() && it->second > e.ts) {
        line_no = line_of[i];
        reject("ParentOrdering", to_json_line(e));
        continue;
      }
    }
    kept.push_back(std::move(e));
  }
  result.log = std::move(kept);
  std::sort(result.rejects.begin(), result.rejects.end(),
            [](const Reject& a, const Reject& b) { return a.line < b.line; });
  sort_events(result.log);
  return result;
}

LoadResult load_events(const std::filesystem::path& path, const LoadFilter& filter,
                       bool strict) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return read_events(in, filter, strict);
}

void write_events(std::ostream& out, std::span<const Event> events) {
  for (const auto& e : events) out << to_json_line(e) << '\n';
}

void save_events(const std::filesystem::path& path, std::span<const Event> events) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::Io, "cannot write " + path.string());
  write_events(out, events);
  if (!out) throw Error(Errc::Io, "write failed for " + path.string());
}

void write_rejects(std::ostream& out, std::span<const Reject> rejects) {
  for (const auto& r : rejects) {
    nlohmann::json obj = {{"line", r.line}, {"reason", r.reason}, {"text", r.text}};
    out << obj.dump() << '\n';
  }
}

void sort_events(EventLog& log) {
  std::stable_sort(log.begin(), log.end(),
                   [](const Event& a, const Event& b) { return a.ts < b.ts; });
}

std::int64_t TickFrame::tick_of(std::int64_t ts) const {
  return floor_div(ts - t0, tick_len);
}

TickFrame frame_for(const EventLog& log, std::int64_t tick_len) {
  if (tick_len <= 0) throw Error(Errc::BadConfig, "tick_len must be positive");
  if (log.empty()) throw Error(Errc::EmptyLog, "event log is empty");
  auto [lo, hi] = std::minmax_element(
      log.begin(), log.end(),
      [](const Event& a, const Event& b) { return a.ts < b.ts; });
  TickFrame frame;
  frame.tick_len = tick_len;
  frame.t0 = floor_div(lo->ts, tick_len) * tick_len;
  frame.ticks = static_cast<std::size_t>(frame.tick_of(hi->ts) + 1);
  return frame;
}

ActivityTable bin_activity(const EventLog& log, std::int64_t tick_len) {
  return bin_activity(log, frame_for(log, tick_len));
}

ActivityTable bin_activity(const EventLog& log, const TickFrame& frame) {
  if (frame.tick_len <= 0) throw Error(Errc::BadConfig, "tick_len must be positive");
  if (log.empty()) throw Error(Errc::EmptyLog, "event log is empty");
  ActivityTable table;
  for (const auto& e : log) {
    auto [it, inserted] = table.try_emplace(e.actor);
    auto& series = it->second;
    if (inserted) {
      series.owner = e.actor;
      series.t0 = frame.t0;
      series.tick_len = frame.tick_len;
      series.counts.assign(frame.ticks, 0);
    }
    auto tick = frame.tick_of(e.ts);
    if (tick < 0 || tick >= static_cast<std::int64_t>(frame.ticks)) continue;
    ++series.counts[static_cast<std::size_t>(tick)];
  }
  return table;
}

BinarySeries binarize(const ActivitySeries& series, std::uint32_t threshold) {
  if (threshold < 1) throw Error(Errc::BadConfig, "binarization threshold must be >= 1");
  BinarySeries out{series.owner, series.t0, series.tick_len, {}};
  out.bits.reserve(series.counts.size());
  for (auto c : series.counts) out.bits.push_back(c >= threshold ? 1 : 0);
  return out;
}

}  // namespace osnsim
