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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace osnsim {

using ActorId = std::string;
using ContentId = std::string;
using EventId = std::string;
using MessageId = std::string;

enum class Platform : std::uint8_t { GitHub, Twitter, Reddit };

enum class PlatformAction : std::uint8_t {
  // GitHub
  CommitComment,
  Create,
  Delete,
  Fork,
  IssueComment,
  Issues,
  PullRequest,
  Push,
  Watch,
  // Twitter
  Tweet,
  Retweet,
  Quote,
  Reply,
  // Reddit
  Post,
  Comment,
};

/// The four platform-independent activity kinds every platform action
/// reduces to.
enum class OntologyAction : std::uint8_t { Create, Post, Vote, Follow };

enum class EntityRole : std::uint8_t { Actor, Content, Action, Space };

class Entity {
 public:
  Entity(EntityRole role, std::string id) : role_(role), id_(std::move(id)) {}

  EntityRole role() const noexcept { return role_; }
  const std::string& id() const noexcept { return id_; }

 private:
  EntityRole role_;
  std::string id_;
};

/// One timestamped platform action. Ground truth and simulator output share
/// this record.
struct Event {
  EventId id;
  std::int64_t ts = 0;  // UTC seconds
  ActorId actor;
  PlatformAction action = PlatformAction::Create;
  ContentId content;
  std::optional<MessageId> message;
  Platform platform = Platform::GitHub;
  std::optional<EventId> parent;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Bumped whenever the platform -> ontology table changes.
inline constexpr int kOntologyTableVersion = 1;

inline constexpr Platform kAllPlatforms[] = {Platform::GitHub, Platform::Twitter,
                                             Platform::Reddit};

std::span<const PlatformAction> platform_actions(Platform platform);
bool is_platform_action(PlatformAction action, Platform platform);

/// Throws Error(UnknownAction) when `action` is not in the event set of
/// `platform`.
OntologyAction map_platform_action(PlatformAction action, Platform platform);

std::string_view to_string(Platform platform);
std::string_view to_string(PlatformAction action);
std::string_view to_string(OntologyAction action);
std::optional<Platform> parse_platform(std::string_view text);
std::optional<PlatformAction> parse_action(std::string_view text);

enum class Violation : std::uint8_t {
  EmptyId,
  NegativeTimestamp,
  EmptyActor,
  EmptyContent,
  UnknownAction,
  SelfParent,
  ParentOrdering,
};

std::string_view to_string(Violation violation);

struct ValidationResult {
  std::vector<Violation> violations;

  bool ok() const noexcept { return violations.empty(); }
  bool has(Violation v) const;
};

/// Checks the per-event invariants. `parent_ts` is the timestamp of the
/// referenced parent when the caller can resolve it.
ValidationResult validate_event(const Event& event,
                                std::optional<std::int64_t> parent_ts = {});

/// Canonical JSON-lines encoding: keys in lexicographic order, optional keys
/// omitted when empty, no trailing newline.
std::string to_json_line(const Event& event);

/// Throws Error(Format) on malformed JSON, missing or mistyped fields, and
/// unrecognized action or platform names.
Event parse_event_line(std::string_view line);

}  // namespace osnsim
