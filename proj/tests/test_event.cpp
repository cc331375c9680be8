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

#include <random>

#include "osnsim/error.hpp"
#include "osnsim/event.hpp"

using namespace osnsim;

TEST_CASE("ontology table is pinned") {
  CHECK(kOntologyTableVersion == 1);
  CHECK(map_platform_action(PlatformAction::Fork, Platform::GitHub) == OntologyAction::Post);
  CHECK(map_platform_action(PlatformAction::Watch, Platform::GitHub) == OntologyAction::Vote);
  CHECK(map_platform_action(PlatformAction::Tweet, Platform::Twitter) ==
        OntologyAction::Create);

  const std::map<std::pair<Platform, PlatformAction>, OntologyAction> expected = {
      {{Platform::GitHub, PlatformAction::Create}, OntologyAction::Create},
      {{Platform::GitHub, PlatformAction::Push}, OntologyAction::Post},
      {{Platform::GitHub, PlatformAction::PullRequest}, OntologyAction::Post},
      {{Platform::GitHub, PlatformAction::Issues}, OntologyAction::Post},
      {{Platform::GitHub, PlatformAction::CommitComment}, OntologyAction::Post},
      {{Platform::GitHub, PlatformAction::IssueComment}, OntologyAction::Post},
      {{Platform::GitHub, PlatformAction::Fork}, OntologyAction::Post},
      {{Platform::GitHub, PlatformAction::Watch}, OntologyAction::Vote},
      {{Platform::GitHub, PlatformAction::Delete}, OntologyAction::Post},
      {{Platform::Twitter, PlatformAction::Tweet}, OntologyAction::Create},
      {{Platform::Twitter, PlatformAction::Retweet}, OntologyAction::Post},
      {{Platform::Twitter, PlatformAction::Quote}, OntologyAction::Post},
      {{Platform::Twitter, PlatformAction::Reply}, OntologyAction::Post},
      {{Platform::Reddit, PlatformAction::Post}, OntologyAction::Create},
      {{Platform::Reddit, PlatformAction::Comment}, OntologyAction::Post},
  };

  // Exhaustive: every (platform, action) pair either maps as pinned or is
  // rejected with UnknownAction.
  std::size_t mapped = 0;
  for (Platform p : kAllPlatforms) {
    for (int a = 0; a <= static_cast<int>(PlatformAction::Comment); ++a) {
      const auto action = static_cast<PlatformAction>(a);
      auto it = expected.find({p, action});
      if (it != expected.end()) {
        CHECK(is_platform_action(action, p));
        CHECK(map_platform_action(action, p) == it->second);
        CHECK(map_platform_action(action, p) == map_platform_action(action, p));
        ++mapped;
      } else {
        CHECK_FALSE(is_platform_action(action, p));
        CHECK_THROWS_AS(map_platform_action(action, p), Error);
      }
    }
  }
  CHECK(mapped == expected.size());
}

TEST_CASE("unknown action error carries its code") {
  try {
    map_platform_action(PlatformAction::Retweet, Platform::GitHub);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::UnknownAction);
  }
}

TEST_CASE("entity role is fixed at construction") {
  Entity repo(EntityRole::Space, "repo/1");
  CHECK(repo.role() == EntityRole::Space);
  CHECK(repo.id() == "repo/1");
}

namespace {
Event push_event() {
  return Event{"e1", 100, "alice", PlatformAction::Push, "repo/a", std::nullopt,
               Platform::GitHub, std::nullopt};
}
}  // namespace

TEST_CASE("validate_event") {
  CHECK(validate_event(push_event()).ok());

  auto bad = push_event();
  bad.action = PlatformAction::Retweet;
  auto result = validate_event(bad);
  CHECK(result.has(Violation::UnknownAction));

  auto child = push_event();
  child.parent = "e0";
  CHECK(validate_event(child, 50).ok());
  CHECK(validate_event(child, 200).has(Violation::ParentOrdering));

  auto negative = push_event();
  negative.ts = -1;
  negative.actor.clear();
  auto r = validate_event(negative);
  CHECK(r.has(Violation::NegativeTimestamp));
  CHECK(r.has(Violation::EmptyActor));
  // input untouched
  CHECK(negative.ts == -1);
}

TEST_CASE("canonical JSON line") {
  auto e = push_event();
  CHECK(to_json_line(e) ==
        R"({"action":"Push","actor":"alice","content":"repo/a","id":"e1","platform":"github","ts":100})");
  e.message = "m1";
  e.parent = "e0";
  CHECK(to_json_line(e) ==
        R"({"action":"Push","actor":"alice","content":"repo/a","id":"e1","message":"m1","parent":"e0","platform":"github","ts":100})");
}

TEST_CASE("parse rejects malformed lines") {
  CHECK_THROWS_AS(parse_event_line("{not json"), Error);
  CHECK_THROWS_AS(parse_event_line(R"({"id":"x"})"), Error);
  CHECK_THROWS_AS(
      parse_event_line(
          R"({"action":"Nope","actor":"a","content":"c","id":"x","platform":"github","ts":1})"),
      Error);
  CHECK_THROWS_AS(
      parse_event_line(
          R"({"action":"Push","actor":"a","content":"c","id":"x","platform":"github","ts":1.5})"),
      Error);
  CHECK_THROWS_AS(
      parse_event_line(
          R"({"action":"Push","actor":"a","content":"c","id":"x","platform":"github","ts":1,"extra":2})"),
      Error);
}

TEST_CASE("property: parse/serialize round trip is byte-stable") {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 500; ++i) {
    Platform p = kAllPlatforms[rng() % 3];
    auto actions = platform_actions(p);
    Event e;
    e.id = "id-" + std::to_string(rng() % 100000);
    e.ts = static_cast<std::int64_t>(rng() % 2'000'000'000);
    e.actor = "u\"" + std::to_string(rng() % 50);  // exercise escaping
    e.action = actions[rng() % actions.size()];
    e.content = "c/" + std::to_string(rng() % 30);
    if (rng() % 2) e.message = "m" + std::to_string(rng() % 10);
    if (rng() % 2) e.parent = "p" + std::to_string(rng() % 10);
    e.platform = p;
    const auto line = to_json_line(e);
    const auto back = parse_event_line(line);
    CHECK(back == e);
    CHECK(to_json_line(back) == line);
  }
}
