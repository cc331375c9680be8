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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <numeric>
#include <random>
#include <sstream>

#include "osnsim/error.hpp"
#include "osnsim/ingest.hpp"

using namespace osnsim;

namespace {
Event make(std::string id, std::int64_t ts, std::string actor) {
  return Event{std::move(id), ts, std::move(actor), PlatformAction::Push, "repo",
               std::nullopt, Platform::GitHub, std::nullopt};
}
}  // namespace

TEST_CASE("load: empty input") {
  std::istringstream in("");
  auto r = read_events(in);
  CHECK(r.log.empty());
  CHECK(r.rejects.empty());
}

TEST_CASE("load: malformed line becomes a reject with its line number") {
  std::istringstream in(
      R"({"action":"Push","actor":"a","content":"r","id":"1","platform":"github","ts":5})"
      "\n{broken\n"
      R"({"action":"Watch","actor":"b","content":"r","id":"2","platform":"github","ts":3})"
      "\n");
  auto r = read_events(in);
  CHECK(r.log.size() == 2);
  REQUIRE(r.rejects.size() == 1);
  CHECK(r.rejects[0].line == 2);
  // sorted ascending
  CHECK(r.log[0].id == "2");
  CHECK(r.log[1].id == "1");

  std::istringstream again(
      R"({"action":"Push","actor":"a","content":"r","id":"1","platform":"github","ts":5})"
      "\n{broken\n");
  try {
    read_events(again, {}, true);
    FAIL("strict mode should throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::Format);
    CHECK(e.line() == 2);
  }
}

TEST_CASE("load: duplicate ids, wrong-platform actions and late parents are rejected") {
  std::istringstream in(
      R"({"action":"Push","actor":"a","content":"r","id":"1","platform":"github","ts":5})"
      "\n"
      R"({"action":"Push","actor":"a","content":"r","id":"1","platform":"github","ts":6})"
      "\n"
      R"({"action":"Retweet","actor":"a","content":"r","id":"2","platform":"github","ts":6})"
      "\n"
      R"({"action":"Push","actor":"a","content":"r","id":"3","parent":"1","platform":"github","ts":4})"
      "\n");
  auto r = read_events(in);
  CHECK(r.log.size() == 1);
  REQUIRE(r.rejects.size() == 3);
  CHECK(r.rejects[0].reason == "DuplicateId");
  CHECK(r.rejects[1].reason == "UnknownAction");
  CHECK(r.rejects[2].reason == "ParentOrdering");
}

TEST_CASE("load: filters") {
  std::ostringstream out;
  EventLog log = {make("1", 10, "a"), make("2", 20, "b"), make("3", 30, "c")};
  log[1].platform = Platform::Reddit;
  log[1].action = PlatformAction::Comment;
  write_events(out, log);
  std::istringstream in(out.str());
  LoadFilter filter;
  filter.platform = Platform::GitHub;
  filter.from = 15;
  auto r = read_events(in, filter);
  REQUIRE(r.log.size() == 1);
  CHECK(r.log[0].id == "3");
}

TEST_CASE("bin_activity examples") {
  auto one = bin_activity({make("1", 0, "u"), make("2", 3599, "u")}, 3600);
  CHECK(one.at("u").counts == std::vector<std::uint32_t>{2});
  auto two = bin_activity({make("1", 0, "u"), make("2", 3600, "u")}, 3600);
  CHECK(two.at("u").counts == std::vector<std::uint32_t>{1, 1});

  EventLog log = {make("1", 0, "a"), make("2", 10, "b"), make("3", 7200, "a"),
                  make("4", 7300, "b"), make("5", 9000, "a")};
  auto table = bin_activity(log, 3600);
  std::uint64_t total = 0;
  for (const auto& [u, s] : table) {
    CHECK(s.counts.size() == table.begin()->second.counts.size());
    total += std::accumulate(s.counts.begin(), s.counts.end(), std::uint64_t{0});
  }
  CHECK(total == 5);

  CHECK_THROWS_AS(bin_activity(EventLog{}, 3600), Error);
  CHECK_THROWS_AS(bin_activity(log, 0), Error);
}

TEST_CASE("property: binning conserves events") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    EventLog log;
    const int n = 1 + static_cast<int>(rng() % 200);
    for (int i = 0; i < n; ++i) {
      log.push_back(make(std::to_string(i), static_cast<std::int64_t>(rng() % 100000),
                         "u" + std::to_string(rng() % 7)));
    }
    const std::int64_t tick = 1 + static_cast<std::int64_t>(rng() % 5000);
    auto table = bin_activity(log, tick);
    std::uint64_t total = 0;
    for (const auto& [u, s] : table) {
      total += std::accumulate(s.counts.begin(), s.counts.end(), std::uint64_t{0});
    }
    CHECK(total == log.size());
  }
}

TEST_CASE("binarize") {
  ActivitySeries s{"u", 0, 3600, {0, 2, 1, 0}};
  CHECK(binarize(s, 1).bits == std::vector<std::uint8_t>{0, 1, 1, 0});
  CHECK(binarize(s, 3).bits == std::vector<std::uint8_t>{0, 0, 0, 0});
  ActivitySeries zeros{"u", 0, 3600, {0, 0, 0}};
  CHECK(binarize(zeros).bits == std::vector<std::uint8_t>{0, 0, 0});

  // monotone in threshold
  std::mt19937_64 rng(11);
  ActivitySeries random{"u", 0, 3600, {}};
  for (int i = 0; i < 300; ++i) random.counts.push_back(rng() % 6);
  for (std::uint32_t th = 1; th < 7; ++th) {
    auto lo = binarize(random, th).bits;
    auto hi = binarize(random, th + 1).bits;
    for (std::size_t i = 0; i < lo.size(); ++i) CHECK(hi[i] <= lo[i]);
  }
}
