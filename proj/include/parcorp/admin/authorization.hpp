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

// Who may do what.
//
//   action              master  admin(L)  annotator(L)
//   create/modify/delete user  yes  no        no
//   list users          all     own L     no
//   upload file         yes     no        no
//   list/view file      any L   own L     own L
//   download file       any L   own L     no
//   assign / reassign   any L   own L     no
//   mark completed      any L   own L     assignee only
//   tag / edit / auto-tag  no   no        assignee only
//   read / update lexicon  any L  own L   own L
//   progress: project   yes     yes       yes
//   progress: language  any L   own L     own L
//   progress: user      any     self      self
//   post notice         yes     no        no
//   list notices        all     all + L   all + L
//   agreement report    any L   own L     no
//   adapt text          any L   own L     no
//   translate gloss     any L   own L     own L
//   export / import     yes     no        no
//   load dictionary     yes     no        no
//
// "own L" means the resource language must equal the actor's language.
// "assignee only" additionally requires the actor to hold the file's active
// assignment; that relation is checked by the project, not here.

#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "parcorp/admin/types.hpp"

namespace parcorp {

enum class Action {
  CreateUser,
  ModifyUser,
  DeleteUser,
  ListUsers,
  UploadFile,
  ViewFile,
  DownloadFile,
  AssignFile,
  ReassignFile,
  CompleteFile,
  AnnotateFile,
  ReadLexicon,
  UpdateLexicon,
  ProjectProgress,
  LanguageProgress,
  UserProgress,
  PostNotice,
  ListNotices,
  Agreement,
  Adapt,
  Translate,
  Export,
  Import,
  LoadDictionary,
};

inline constexpr std::array kAllActions = {
    Action::CreateUser,     Action::ModifyUser,      Action::DeleteUser,    Action::ListUsers,
    Action::UploadFile,     Action::ViewFile,        Action::DownloadFile,  Action::AssignFile,
    Action::ReassignFile,   Action::CompleteFile,    Action::AnnotateFile,  Action::ReadLexicon,
    Action::UpdateLexicon,  Action::ProjectProgress, Action::LanguageProgress, Action::UserProgress,
    Action::PostNotice,     Action::ListNotices,     Action::Agreement,     Action::Adapt,
    Action::Translate,      Action::Export,          Action::Import,        Action::LoadDictionary,
};

inline std::string_view to_string(Action a) {
  switch (a) {
    case Action::CreateUser: return "create-user";
    case Action::ModifyUser: return "modify-user";
    case Action::DeleteUser: return "delete-user";
    case Action::ListUsers: return "list-users";
    case Action::UploadFile: return "upload-file";
    case Action::ViewFile: return "view-file";
    case Action::DownloadFile: return "download-file";
    case Action::AssignFile: return "assign-file";
    case Action::ReassignFile: return "reassign-file";
    case Action::CompleteFile: return "complete-file";
    case Action::AnnotateFile: return "annotate-file";
    case Action::ReadLexicon: return "read-lexicon";
    case Action::UpdateLexicon: return "update-lexicon";
    case Action::ProjectProgress: return "project-progress";
    case Action::LanguageProgress: return "language-progress";
    case Action::UserProgress: return "user-progress";
    case Action::PostNotice: return "post-notice";
    case Action::ListNotices: return "list-notices";
    case Action::Agreement: return "agreement";
    case Action::Adapt: return "adapt";
    case Action::Translate: return "translate";
    case Action::Export: return "export";
    case Action::Import: return "import";
    case Action::LoadDictionary: return "load-dictionary";
  }
  return "?";
}

/// Role-level part of the table above. `language` is the language of the
/// resource acted on, when the action has one. `self` is true when the
/// resource is the actor's own account. Assignee checks are left to the
/// caller: AnnotateFile and CompleteFile return true for annotators of the
/// language and the project must still verify the assignment.
inline bool permits(const Role& actor, Action action, const std::optional<LanguageCode>& language = std::nullopt,
                    bool self = false) {
  const bool master = actor.is_master();
  const bool admin = actor.kind() == RoleKind::Admin;
  const bool annotator = actor.kind() == RoleKind::Annotator;
  const bool same_language = language && actor.language() == language;
  switch (action) {
    case Action::CreateUser:
    case Action::ModifyUser:
    case Action::DeleteUser:
    case Action::UploadFile:
    case Action::PostNotice:
    case Action::Export:
    case Action::Import:
    case Action::LoadDictionary:
      return master;
    case Action::ListUsers:
      return master || admin;
    case Action::ViewFile:
    case Action::ReadLexicon:
    case Action::UpdateLexicon:
    case Action::LanguageProgress:
    case Action::Translate:
      return master || same_language;
    case Action::DownloadFile:
    case Action::AssignFile:
    case Action::ReassignFile:
    case Action::Agreement:
    case Action::Adapt:
      return master || (admin && same_language);
    case Action::CompleteFile:
      return master || same_language;
    case Action::AnnotateFile:
      return annotator && same_language;
    case Action::ProjectProgress:
    case Action::ListNotices:
      return true;
    case Action::UserProgress:
      return master || self;
  }
  return false;
}

}  // namespace parcorp
