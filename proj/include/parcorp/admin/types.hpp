// Copyright 2026 The parcorp Authors.
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
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "parcorp/corpus/types.hpp"
#include "parcorp/util/time.hpp"

namespace parcorp {

enum class RoleKind { MasterAdmin, Admin, Annotator };

inline std::string_view to_string(RoleKind kind) {
  switch (kind) {
    case RoleKind::MasterAdmin: return "master";
    case RoleKind::Admin: return "admin";
    case RoleKind::Annotator: return "annotator";
  }
  return "?";
}

inline RoleKind parse_role_kind(std::string_view s) {
  if (s == "master") return RoleKind::MasterAdmin;
  if (s == "admin") return RoleKind::Admin;
  if (s == "annotator") return RoleKind::Annotator;
  throw Error(ErrorCode::InvalidValue, "unknown role '" + std::string(s) + "'");
}

/// Admins and annotators belong to exactly one language; the master admin to
/// none.
class Role {
 public:
  static Role master() { return Role(RoleKind::MasterAdmin, std::nullopt); }
  static Role admin(LanguageCode lang) { return Role(RoleKind::Admin, std::move(lang)); }
  static Role annotator(LanguageCode lang) { return Role(RoleKind::Annotator, std::move(lang)); }

  static Role make(RoleKind kind, std::optional<LanguageCode> language) {
    if (kind == RoleKind::MasterAdmin) {
      if (language) throw Error(ErrorCode::InvalidValue, "master admin has no language");
      return master();
    }
    if (!language) throw Error(ErrorCode::InvalidValue, std::string(to_string(kind)) + " needs a language");
    return Role(kind, std::move(language));
  }

  RoleKind kind() const noexcept { return kind_; }
  const std::optional<LanguageCode>& language() const noexcept { return language_; }
  bool is_master() const noexcept { return kind_ == RoleKind::MasterAdmin; }

  /// Master admin covers every language.
  bool covers(const LanguageCode& lang) const { return is_master() || language_ == lang; }

  std::string str() const {
    return language_ ? std::string(to_string(kind_)) + "(" + language_->str() + ")" : std::string(to_string(kind_));
  }

  bool operator==(const Role&) const = default;

 private:
  Role(RoleKind kind, std::optional<LanguageCode> language) : kind_(kind), language_(std::move(language)) {}

  RoleKind kind_;
  std::optional<LanguageCode> language_;
};

struct UserAccount {
  std::string user_id;
  std::string display_name;
  Role role;
  bool active = true;
  std::string credential;  // verifier, never the password

  bool operator==(const UserAccount&) const = default;
};

struct SessionRecord {
  std::string user_id;
  Timestamp login_at;
  std::optional<Timestamp> logout_at;
  std::string token_hash;

  bool open() const { return !logout_at.has_value(); }
  bool operator==(const SessionRecord&) const = default;
};

enum class AssignmentState { Assigned, InProgress, Completed, Reassigned };

inline std::string_view to_string(AssignmentState s) {
  switch (s) {
    case AssignmentState::Assigned: return "Assigned";
    case AssignmentState::InProgress: return "InProgress";
    case AssignmentState::Completed: return "Completed";
    case AssignmentState::Reassigned: return "Reassigned";
  }
  return "?";
}

inline AssignmentState parse_assignment_state(std::string_view s) {
  if (s == "Assigned") return AssignmentState::Assigned;
  if (s == "InProgress") return AssignmentState::InProgress;
  if (s == "Completed") return AssignmentState::Completed;
  if (s == "Reassigned") return AssignmentState::Reassigned;
  throw Error(ErrorCode::InvalidValue, "unknown assignment state '" + std::string(s) + "'");
}

inline bool is_active(AssignmentState s) {
  return s == AssignmentState::Assigned || s == AssignmentState::InProgress;
}

/// One line of an assignment's history. `event` is one of
/// assigned | started | completed | reassigned; `detail` names the other
/// party of a reassignment.
struct AssignmentEvent {
  std::string event;
  std::string actor;
  Timestamp at;
  std::string detail;

  bool operator==(const AssignmentEvent&) const = default;
};

struct FileAssignment {
  std::string assignment_id;
  std::string file_id;
  std::string assignee;
  AssignmentState state = AssignmentState::Assigned;
  std::vector<AssignmentEvent> history;

  bool operator==(const FileAssignment&) const = default;
};

/// The state an assignment's history leads to.
inline AssignmentState replay_history(const std::vector<AssignmentEvent>& history) {
  if (history.empty() || history.front().event != "assigned") {
    throw Error(ErrorCode::InvalidValue, "assignment history must start with 'assigned'");
  }
  AssignmentState state = AssignmentState::Assigned;
  for (std::size_t i = 1; i < history.size(); ++i) {
    const auto& e = history[i].event;
    if (e == "started" && state == AssignmentState::Assigned) {
      state = AssignmentState::InProgress;
    } else if (e == "completed" && is_active(state)) {
      state = AssignmentState::Completed;
    } else if (e == "reassigned" && is_active(state)) {
      state = AssignmentState::Reassigned;
    } else {
      throw Error(ErrorCode::InvalidValue, "illegal history step '" + e + "' from " + std::string(to_string(state)));
    }
  }
  return state;
}

struct ProjectConfig {
  std::size_t max_active_assignments = 3;
  Tagset tagset;
  std::set<LanguageCode> languages;
  bool open_registration = false;

  bool operator==(const ProjectConfig&) const = default;
};

struct Notice {
  std::string notice_id;
  std::string author;
  std::optional<LanguageCode> audience;  // nullopt = everyone
  std::string body;
  Timestamp posted_at;

  bool operator==(const Notice&) const = default;
};

}  // namespace parcorp
