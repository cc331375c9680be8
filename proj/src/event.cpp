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

#include "osnsim/event.hpp"

#include <algorithm>
#include <array>

#include "json.hpp"
#include "osnsim/error.hpp"

namespace osnsim {
namespace {

using json = nlohmann::json;

constexpr std::array kGitHubActions = {
    PlatformAction::CommitComment, PlatformAction::Create,
    PlatformAction::Delete,        PlatformAction::Fork,
    PlatformAction::IssueComment,  PlatformAction::Issues,
    PlatformAction::PullRequest,   PlatformAction::Push,
    PlatformAction::Watch,
};
constexpr std::array kTwitterActions = {
    PlatformAction::Tweet, PlatformAction::Retweet, PlatformAction::Quote,
    PlatformAction::Reply};
constexpr std::array kRedditActions = {PlatformAction::Post,
                                       PlatformAction::Comment};

struct ActionName {
  PlatformAction action;
  std::string_view name;
};

constexpr std::array kActionNames = {
    ActionName{PlatformAction::CommitComment, "CommitComment"},
    ActionName{PlatformAction::Create, "Create"},
    ActionName{PlatformAction::Delete, "Delete"},
    ActionName{PlatformAction::Fork, "Fork"},
    ActionName{PlatformAction::IssueComment, "IssueComment"},
    ActionName{PlatformAction::Issues, "Issues"},
    ActionName{PlatformAction::PullRequest, "PullRequest"},
    ActionName{PlatformAction::Push, "Push"},
    ActionName{PlatformAction::Watch, "Watch"},
    ActionName{PlatformAction::Tweet, "Tweet"},
    ActionName{PlatformAction::Retweet, "Retweet"},
    ActionName{PlatformAction::Quote, "Quote"},
    ActionName{PlatformAction::Reply, "Reply"},
    ActionName{PlatformAction::Post, "Post"},
    ActionName{PlatformAction::Comment, "Comment"},
};

constexpr std::array kEventKeys = {"action",  "actor",  "content",  "id",
                                   "message", "parent", "platform", "ts"};

std::string required_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw Error(Errc::Format, std::string("missing field '") + key + "'");
  }
  if (!it->is_string()) {
    throw Error(Errc::Format, std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

std::optional<std::string> optional_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) {
    throw Error(Errc::Format, std::string("field '") + key + "' must be a string");
  }
  return it->get<std::string>();
}

}  // namespace

std::span<const PlatformAction> platform_actions(Platform platform) {
  switch (platform) {
    case Platform::GitHub: return kGitHubActions;
    case Platform::Twitter: return kTwitterActions;
    case Platform::Reddit: return kRedditActions;
  }
  return {};
}

bool is_platform_action(PlatformAction action, Platform platform) {
  auto actions = platform_actions(platform);
  return std::find(actions.begin(), actions.end(), action) != actions.end();
}

OntologyAction map_platform_action(PlatformAction action, Platform platform) {
  if (!is_platform_action(action, platform)) {
    throw Error(Errc::UnknownAction, std::string(to_string(action)) +
                                         " is not a " +
                                         std::string(to_string(platform)) +
                                         " action");
  }
  switch (action) {
    case PlatformAction::Create:
    case PlatformAction::Tweet:
    case PlatformAction::Post:
      return OntologyAction::Create;
    case PlatformAction::Watch:
      return OntologyAction::Vote;
    case PlatformAction::CommitComment:
    case PlatformAction::Delete:
    case PlatformAction::Fork:
    case PlatformAction::IssueComment:
    case PlatformAction::Issues:
    case PlatformAction::PullRequest:
    case PlatformAction::Push:
    case PlatformAction::Retweet:
    case PlatformAction::Quote:
    case PlatformAction::Reply:
    case PlatformAction::Comment:
      return OntologyAction::Post;
  }
  throw Error(Errc::UnknownAction, "unmapped action");
}

std::string_view to_string(Platform platform) {
  switch (platform) {
    case Platform::GitHub: return "github";
    case Platform::Twitter: return "twitter";
    case Platform::Reddit: return "reddit";
  }
  return "unknown";
}

std::string_view to_string(PlatformAction action) {
  for (const auto& entry : kActionNames) {
    if (entry.action == action) return entry.name;
  }
  return "Unknown";
}

std::string_view to_string(OntologyAction action) {
  switch (action) {
    case OntologyAction::Create: return "Create";
    case OntologyAction::Post: return "Post";
    case OntologyAction::Vote: return "Vote";
    case OntologyAction::Follow: return "Follow";
  }
  return "Unknown";
}

std::optional<Platform> parse_platform(std::string_view text) {
  for (Platform p : kAllPlatforms) {
    if (to_string(p) == text) return p;
  }
  return std::nullopt;
}

std::optional<PlatformAction> parse_action(std::string_view text) {
  for (const auto& entry : kActionNames) {
    if (entry.name == text) return entry.action;
  }
  return std::nullopt;
}

std::string_view to_string(Violation violation) {
  switch (violation) {
    case Violation::EmptyId: return "EmptyId";
    case Violation::NegativeTimestamp: return "NegativeTimestamp";
    case Violation::EmptyActor: return "EmptyActor";
    case Violation::EmptyContent: return "EmptyContent";
    case Violation::UnknownAction: return "UnknownAction";
    case Violation::SelfParent: return "SelfParent";
    case Violation::ParentOrdering: return "ParentOrdering";
  }
  return "Unknown";
}

bool ValidationResult::has(Violation v) const {
  return std::find(violations.begin(), violations.end(), v) != violations.end();
}

ValidationResult validate_event(const Event& event,
                                std::optional<std::int64_t> parent_ts) {
  ValidationResult result;
  auto& out = result.violations;
  if (event.id.empty()) out.push_back(Violation::EmptyId);
  if (event.ts < 0) out.push_back(Violation::NegativeTimestamp);
  if (event.actor.empty()) out.push_back(Violation::EmptyActor);
  if (event.content.empty()) out.push_back(Violation::EmptyContent);
  if (!is_platform_action(event.action, event.platform)) {
    out.push_back(Violation::UnknownAction);
  }
  if (event.parent && *event.parent == event.id) {
    out.push_back(Violation::SelfParent);
  }
  if (event.parent && parent_ts && *parent_ts > event.ts) {
    out.push_back(Violation::ParentOrdering);
  }
  return result;
}

std::string to_json_line(const Event& event) {
  // nlohmann::json objects are std::map backed, so dump() emits keys in
  // lexicographic order.
  json obj = {
      {"action", to_string(event.action)},
      {"actor", event.actor},
      {"content", event.content},
      {"id", event.id},
      {"platform", to_string(event.platform)},
      {"ts", event.ts},
  };
  if (event.message) obj["message"] = *event.message;
  if (event.parent) obj["parent"] = *event.parent;
  return obj.dump();
}

Event parse_event_line(std::string_view line) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw Error(Errc::Format, std::string("invalid JSON: ") + e.what());
  }
  if (!obj.is_object()) throw Error(Errc::Format, "event must be a JSON object");
  for (const auto& item : obj.items()) {
    if (std::find(kEventKeys.begin(), kEventKeys.end(), item.key()) ==
        kEventKeys.end()) {
      throw Error(Errc::Format, "unknown field '" + item.key() + "'");
    }
  }

  Event event;
  event.id = required_string(obj, "id");
  event.actor = required_string(obj, "actor");
  event.content = required_string(obj, "content");
  event.message = optional_string(obj, "message");
  event.parent = optional_string(obj, "parent");

  auto ts = obj.find("ts");
  if (ts == obj.end()) throw Error(Errc::Format, "missing field 'ts'");
  if (!ts->is_number_integer()) {
    throw Error(Errc::Format, "field 'ts' must be an integer");
  }
  event.ts = ts->get<std::int64_t>();

  auto platform_name = required_string(obj, "platform");
  auto platform = parse_platform(platform_name);
  if (!platform) throw Error(Errc::Format, "unknown platform '" + platform_name + "'");
  event.platform = *platform;

  auto action_name = required_string(obj, "action");
  auto action = parse_action(action_name);
  if (!action) throw Error(Errc::Format, "unknown action '" + action_name + "'");
  event.action = *action;
  return event;
}

}  // namespace osnsim
