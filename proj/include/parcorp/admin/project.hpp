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

// The whole mutable state of one annotation project.
//
// Mutation is split in two steps. A `plan_*` method is const: it checks
// authorization and preconditions against the current state and returns an
// event (JSON) that fully determines the change, including ids, instants and
// credential verifiers. `apply` is the only mutator and trusts its event.
// Replaying the events of a project in order therefore rebuilds it exactly.

#pragma once

#include <algorithm>
#include <cstdio>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "parcorp/admin/authorization.hpp"
#include "parcorp/admin/codec.hpp"
#include "parcorp/admin/types.hpp"
#include "parcorp/annotation/edit.hpp"
#include "parcorp/annotation/lexicon.hpp"
#include "parcorp/annotation/tagging.hpp"
#include "parcorp/corpus/format.hpp"
#include "parcorp/corpus/parallel.hpp"
#include "parcorp/qa/agreement.hpp"
#include "parcorp/translation/dictionary.hpp"
#include "parcorp/util/crypto.hpp"

namespace parcorp {

using Json = nlohmann::json;

/// An authenticated caller.
struct Actor {
  std::string user_id;
  Role role;
};

struct StoredFile {
  std::string file_id;
  CorpusFile file;
  std::string uploaded_by;
  Timestamp uploaded_at;
  std::vector<EditRecord> edits;
};

struct NewUser {
  std::string user_id;
  std::string display_name;
  Role role;
  std::string credential;  // verifier from crypto::make_verifier
};

struct UserChanges {
  std::optional<std::string> display_name;
  std::optional<Role> role;
  std::optional<bool> active;
  std::optional<std::string> credential;
};

struct ProgressCounts {
  std::size_t files_total = 0;
  std::size_t files_assigned = 0;
  std::size_t files_completed = 0;
  std::size_t sentences_total = 0;
  std::size_t sentences_complete = 0;
  std::map<std::string, std::size_t> completed_by_annotator;

  bool operator==(const ProgressCounts&) const = default;
};

enum class ProgressScope { Project, Language, User };

struct ProgressReport {
  ProgressScope scope = ProgressScope::Project;
  std::string subject;
  ProgressCounts totals;
  std::map<std::string, ProgressCounts> by_language;
  std::vector<SessionRecord> time_log;  // user scope
  std::vector<std::string> logged_in;   // project scope, master admin only
};

/// Corpus content carried by a native export.
struct ImportBundle {
  std::vector<std::pair<std::string, CorpusFile>> files;
  std::vector<ClosedClassLexicon> lexicons;
  std::vector<BilingualDictionary> dictionaries;
};

struct AgreementResult {
  AnnotationVersion a;
  AnnotationVersion b;
  ObservedAgreement observed;
  std::optional<KappaResult> kappa;
  std::size_t disagreements = 0;
  std::string report;
};

enum class FileStatus { Unassigned, Assigned, Completed };

inline std::string_view to_string(FileStatus s) {
  switch (s) {
    case FileStatus::Unassigned: return "unassigned";
    case FileStatus::Assigned: return "assigned";
    case FileStatus::Completed: return "completed";
  }
  return "?";
}

class Project {
 public:
  explicit Project(ProjectConfig config) : config_(std::move(config)) {
    if (config_.max_active_assignments < 1) {
      throw Error(ErrorCode::InvalidValue, "maxActiveAssignments must be >= 1");
    }
    for (const auto& lang : config_.languages) lexicons_.emplace(lang, ClosedClassLexicon(lang));
  }

  /// First event of every log.
  static Json initialized_event(const ProjectConfig& config, Timestamp at) {
    return {{"type", "ProjectInitialized"}, {"actor", ""}, {"at", format_rfc3339(at)}, {"config", codec::config(config)}};
  }

  static Project from_initialized_event(const Json& event) {
    if (event.at("type") != "ProjectInitialized") {
      throw Error(ErrorCode::StoreCorrupt, "log does not start with ProjectInitialized");
    }
    return Project(codec::config(event.at("config")));
  }

  // ---- users and sessions -------------------------------------------------

  /// `actor` is nullopt for self-registration, which only open projects
  /// allow and only for the annotator role.
  Json plan_create_user(const std::optional<Actor>& actor, const NewUser& user, Timestamp at) const {
    if (actor) {
      require(permits(actor->role, Action::CreateUser), "only the master admin manages users");
    } else {
      require(config_.open_registration && user.role.kind() == RoleKind::Annotator,
              "self-registration is limited to annotators of open projects");
    }
    if (user.user_id.empty() || unicode::has_whitespace(user.user_id) || user.user_id.size() > 64) {
      throw Error(ErrorCode::InvalidArgument, "user id must be 1..64 non-space characters");
    }
    if (users_.count(user.user_id)) throw Error(ErrorCode::DuplicateUser, "user exists", user.user_id);
    check_role_language(user.role);
    if (user.credential.empty()) throw Error(ErrorCode::InvalidArgument, "a credential is required", user.user_id);
    UserAccount account{user.user_id, user.display_name, user.role, true, user.credential};
    return event("UserCreated", actor ? actor->user_id : user.user_id, at, {{"user", codec::user(account, true)}});
  }

  Json plan_modify_user(const Actor& actor, const std::string& user_id, const UserChanges& changes, Timestamp at) const {
    require(permits(actor.role, Action::ModifyUser), "only the master admin manages users");
    const auto& current = user(user_id);
    if (changes.role) check_role_language(*changes.role);
    if (changes.active && !*changes.active && user_id == actor.user_id) {
      throw Error(ErrorCode::InvalidArgument, "the master admin cannot deactivate itself", user_id);
    }
    Json fields = Json::object();
    if (changes.display_name) fields["displayName"] = *changes.display_name;
    if (changes.role) fields["role"] = codec::role(*changes.role);
    if (changes.active) fields["active"] = *changes.active;
    if (changes.credential) fields["credential"] = *changes.credential;
    return event("UserModified", actor.user_id, at, {{"userId", current.user_id}, {"changes", fields}});
  }

  /// Deactivation. Accounts are never removed so their history survives.
  Json plan_delete_user(const Actor& actor, const std::string& user_id, Timestamp at) const {
    require(permits(actor.role, Action::DeleteUser), "only the master admin manages users");
    const auto& current = user(user_id);
    if (user_id == actor.user_id) throw Error(ErrorCode::InvalidArgument, "the master admin cannot deactivate itself", user_id);
    return event("UserDeactivated", actor.user_id, at, {{"userId", current.user_id}});
  }

  Json plan_login(const std::string& user_id, std::string_view password, const std::string& token_hash, Timestamp at) const {
    const auto it = users_.find(user_id);
    if (it == users_.end() || !crypto::verify(password, it->second.credential)) {
      throw Error(ErrorCode::BadCredential, "unknown user or wrong credential", user_id);
    }
    if (!it->second.active) throw Error(ErrorCode::InactiveAccount, "account is deactivated", user_id);
    return event("SessionOpened", user_id, at, {{"userId", user_id}, {"tokenHash", token_hash}});
  }

  Json plan_logout(const std::string& token_hash, Timestamp at) const {
    const auto it = open_sessions_.find(token_hash);
    if (it == open_sessions_.end()) throw Error(ErrorCode::Unauthenticated, "session is not open");
    return event("SessionClosed", sessions_[it->second].user_id, at, {{"tokenHash", token_hash}});
  }

  /// The caller behind an open session token, if the account is active.
  std::optional<Actor> actor_for_token(const std::string& token_hash) const {
    const auto it = open_sessions_.find(token_hash);
    if (it == open_sessions_.end()) return std::nullopt;
    const auto& account = users_.at(sessions_[it->second].user_id);
    if (!account.active) return std::nullopt;
    return Actor{account.user_id, account.role};
  }

  std::vector<UserAccount> list_users(const Actor& actor) const {
    require(permits(actor.role, Action::ListUsers), "annotators cannot list users");
    std::vector<UserAccount> out;
    for (const auto& [id, account] : users_) {
      if (actor.role.is_master() || account.role.language() == actor.role.language()) out.push_back(account);
    }
    return out;
  }

  // ---- files and assignments ----------------------------------------------

  Json plan_upload(const Actor& actor, const CorpusFile& file, Timestamp at) const {
    require(permits(actor.role, Action::UploadFile), "only the master admin uploads files");
    auto violations = validate(file, &config_.tagset);
    if (!config_.languages.count(file.language)) {
      violations.push_back("language " + file.language.str() + " is not part of the project");
    }
    if (file.sentences.empty()) violations.push_back("file has no sentences");
    if (!violations.empty()) {
      throw Error::with_details(ErrorCode::ValidationFailed, "uploaded file is invalid (" +
                                    std::to_string(violations.size()) + " violations): " + violations.front(),
                                violations);
    }
    return event("FileUploaded", actor.user_id, at,
                 {{"fileId", make_id('F', next_file_)}, {"content", serialize_annotated_file(file)}});
  }

  Json plan_assign(const Actor& actor, const std::string& file_id, const std::string& assignee, Timestamp at) const {
    const auto& stored = file(file_id);
    require_manager(actor, stored.file.language, Action::AssignFile);
    check_assignee(stored, assignee);
    if (status(file_id) == FileStatus::Completed) {
      throw Error(ErrorCode::AlreadyCompleted, "file " + file_id + " is already completed", file_id);
    }
    if (const auto* active = active_assignment(file_id)) {
      throw Error(ErrorCode::AlreadyAssigned, "file " + file_id + " is assigned to " + active->assignee, file_id);
    }
    check_cap(assignee);
    return event("AssignmentCreated", actor.user_id, at,
                 {{"assignmentId", make_id('A', next_assignment_)}, {"fileId", file_id}, {"assignee", assignee}});
  }

  Json plan_reassign(const Actor& actor, const std::string& assignment_id, const std::string& new_assignee,
                     Timestamp at) const {
    const auto& current = assignment(assignment_id);
    const auto& stored = file(current.file_id);
    require_manager(actor, stored.file.language, Action::ReassignFile);
    if (!is_active(current.state)) {
      throw Error(ErrorCode::NoActiveAssignment, "assignment " + assignment_id + " is " +
                                                     std::string(to_string(current.state)), assignment_id);
    }
    check_assignee(stored, new_assignee);
    if (new_assignee == current.assignee) {
      throw Error(ErrorCode::AlreadyAssigned, "file is already assigned to " + new_assignee, current.file_id);
    }
    check_cap(new_assignee);
    return event("AssignmentReassigned", actor.user_id, at,
                 {{"assignmentId", assignment_id},
                  {"newAssignmentId", make_id('A', next_assignment_)},
                  {"fileId", current.file_id},
                  {"assignee", new_assignee}});
  }

  /// Reassignment addressed by file instead of assignment.
  Json plan_reassign_file(const Actor& actor, const std::string& file_id, const std::string& new_assignee,
                          Timestamp at) const {
    const auto& stored = file(file_id);
    require_manager(actor, stored.file.language, Action::ReassignFile);
    const auto* active = active_assignment(file_id);
    if (!active) throw Error(ErrorCode::NoActiveAssignment, "file " + file_id + " has no active assignment", file_id);
    return plan_reassign(actor, active->assignment_id, new_assignee, at);
  }

  Json plan_complete(const Actor& actor, const std::string& assignment_id, Timestamp at) const {
    const auto& current = assignment(assignment_id);
    const auto& stored = file(current.file_id);
    const bool manager = actor.role.kind() != RoleKind::Annotator;
    require(permits(actor.role, Action::CompleteFile, stored.file.language) &&
                (manager || actor.user_id == current.assignee),
            "only the assignee or an admin of the language may complete a file");
    if (!is_active(current.state)) {
      throw Error(ErrorCode::NoActiveAssignment, "assignment " + assignment_id + " is " +
                                                     std::string(to_string(current.state)), assignment_id);
    }
    require_fully_tagged(stored);
    return event("AssignmentCompleted", actor.user_id, at, {{"assignmentId", assignment_id}});
  }

  const StoredFile& view_file(const Actor& actor, const std::string& file_id) const {
    const auto& stored = file(file_id);
    require(permits(actor.role, Action::ViewFile, stored.file.language), "file belongs to another language");
    return stored;
  }

  std::vector<const StoredFile*> list_files(const Actor& actor) const {
    std::vector<const StoredFile*> out;
    for (const auto& [id, stored] : files_) {
      if (permits(actor.role, Action::ViewFile, stored.file.language)) out.push_back(&stored);
    }
    return out;
  }

  /// Annotated bytes, released only to admins of the language once every
  /// sentence is fully tagged.
  std::string download(const Actor& actor, const std::string& file_id) const {
    const auto& stored = file(file_id);
    require(permits(actor.role, Action::DownloadFile, stored.file.language),
            "only administrators of the file's language may download it");
    require_fully_tagged(stored);
    return serialize_annotated_file(stored.file);
  }

  // ---- annotation ---------------------------------------------------------

  Json plan_tag(const Actor& actor, const std::string& file_id, const SentenceId& sid, std::size_t index,
                const std::string& tag, Timestamp at) const {
    const auto& stored = file(file_id);
    require_assignee(actor, stored);
    assign_tag(sentence(stored, sid), index, tag, config_.tagset);
    return event("TagAssigned", actor.user_id, at,
                 {{"fileId", file_id}, {"sid", sid.str()}, {"index", index}, {"tag", tag}});
  }

  Json plan_edit(const Actor& actor, const std::string& file_id, const SentenceId& sid, std::string_view text,
                 Timestamp at) const {
    const auto& stored = file(file_id);
    require_assignee(actor, stored);
    edit_sentence(sentence(stored, sid), text, actor.user_id, at);
    return event("SentenceEdited", actor.user_id, at, {{"fileId", file_id}, {"sid", sid.str()}, {"text", text}});
  }

  /// nullopt when the lexicon has nothing to add.
  std::optional<Json> plan_auto_tag(const Actor& actor, const std::string& file_id, Timestamp at) const {
    const auto& stored = file(file_id);
    require_assignee(actor, stored);
    const auto& lex = lexicons_.at(stored.file.language);
    Json applied = Json::array();
    for (const auto& s : stored.file.sentences) {
      for (std::size_t i = 0; i < s.tokens.size(); ++i) {
        if (s.tokens[i].tagged()) continue;
        const auto hit = lex.entries.find(s.tokens[i].surface);
        if (hit != lex.entries.end()) applied.push_back({s.id.str(), i, hit->second});
      }
    }
    if (applied.empty()) return std::nullopt;
    return event("AutoTagged", actor.user_id, at,
                 {{"fileId", file_id}, {"lexiconVersion", lex.version}, {"applied", applied}});
  }

  Json plan_lexicon_update(const Actor& actor, const LanguageCode& language, std::string_view surface,
                           const std::optional<std::string>& tag, Timestamp at) const {
    const auto& lex = lexicon(actor, language, Action::UpdateLexicon);
    const auto next = update_lexicon(lex, surface, tag, config_.tagset);
    return event("LexiconUpdated", actor.user_id, at,
                 {{"language", language.str()}, {"surface", unicode::nfc(surface)}, {"tag", codec::opt(tag)},
                  {"version", next.version}});
  }

  const ClosedClassLexicon& lexicon(const Actor& actor, const LanguageCode& language,
                                    Action action = Action::ReadLexicon) const {
    const auto it = lexicons_.find(language);
    if (it == lexicons_.end()) throw Error(ErrorCode::UnknownLanguage, "no such project language", language.str());
    require(permits(actor.role, action, language), "lexicon belongs to another language");
    return it->second;
  }

  LexiconDelta lexicon_sync(const Actor& actor, const LanguageCode& language, std::uint64_t since) const {
    return lexicon_delta(lexicon(actor, language), since);
  }

  // ---- notices ------------------------------------------------------------

  Json plan_notice(const Actor& actor, const std::optional<LanguageCode>& audience, std::string_view body,
                   Timestamp at) const {
    require(permits(actor.role, Action::PostNotice), "only the master admin posts notices");
    if (audience && !config_.languages.count(*audience)) {
      throw Error(ErrorCode::UnknownLanguage, "no such project language", audience->str());
    }
    if (body.empty()) throw Error(ErrorCode::InvalidArgument, "notice body is empty");
    return event("NoticePosted", actor.user_id, at,
                 {{"noticeId", make_id('N', next_notice_)},
                  {"audience", audience ? Json(audience->str()) : Json("all")},
                  {"body", body}});
  }

  /// Newest first.
  std::vector<Notice> list_notices(const Actor& actor) const {
    std::vector<Notice> out;
    for (auto it = notices_.rbegin(); it != notices_.rend(); ++it) {
      if (actor.role.is_master() || !it->audience || it->audience == actor.role.language()) out.push_back(*it);
    }
    std::stable_sort(out.begin(), out.end(), [](const Notice& a, const Notice& b) { return a.posted_at > b.posted_at; });
    return out;
  }

  // ---- monitoring ---------------------------------------------------------

  ProgressReport progress(const Actor& actor, ProgressScope scope, const std::string& subject = {}) const {
    ProgressReport report;
    report.scope = scope;
    report.subject = subject;
    switch (scope) {
      case ProgressScope::Project:
        for (const auto& lang : config_.languages) report.by_language[lang.str()] = counts_for_language(lang);
        for (const auto& [lang, counts] : report.by_language) add_counts(report.totals, counts);
        if (actor.role.is_master()) {
          std::set<std::string> online;
          for (const auto& [hash, index] : open_sessions_) online.insert(sessions_[index].user_id);
          report.logged_in.assign(online.begin(), online.end());
        }
        break;
      case ProgressScope::Language: {
        if (!LanguageCode::valid(subject)) throw Error(ErrorCode::InvalidArgument, "language scope needs a language");
        const LanguageCode lang(subject);
        if (!config_.languages.count(lang)) throw Error(ErrorCode::UnknownLanguage, "no such project language", subject);
        require(permits(actor.role, Action::LanguageProgress, lang), "progress of another language");
        report.totals = counts_for_language(lang);
        report.by_language[subject] = report.totals;
        break;
      }
      case ProgressScope::User: {
        const auto& target = user(subject);
        require(permits(actor.role, Action::UserProgress, std::nullopt, subject == actor.user_id),
                "time logs of other users are restricted to the master admin");
        for (const auto& [id, a] : assignments_) {
          if (a.assignee != target.user_id) continue;
          const auto& f = files_.at(a.file_id).file;
          if (is_active(a.state)) {
            ++report.totals.files_assigned;
          } else if (a.state == AssignmentState::Completed) {
            ++report.totals.files_completed;
            ++report.totals.completed_by_annotator[a.assignee];
          } else {
            continue;
          }
          ++report.totals.files_total;
          const auto c = completion_status(f);
          report.totals.sentences_total += c.total;
          report.totals.sentences_complete += c.complete;
        }
        for (const auto& s : sessions_) {
          if (s.user_id == target.user_id) report.time_log.push_back(s);
        }
        break;
      }
    }
    return report;
  }

  // ---- quality ------------------------------------------------------------

  /// Compares two files holding the same text (e.g. two annotators' copies).
  AgreementResult agreement(const Actor& actor, const std::string& file_a, const std::string& file_b) const {
    const auto& a = file(file_a);
    const auto& b = file(file_b);
    require(permits(actor.role, Action::Agreement, a.file.language) &&
                permits(actor.role, Action::Agreement, b.file.language),
            "agreement reports are for administrators of the language");
    AgreementResult result{version_of(a), version_of(b), {}, std::nullopt, 0, {}};
    result.disagreements = diff_annotations(result.a, result.b).size();
    result.observed = observed_agreement(result.a, result.b);
    if (result.observed.joint > 0) result.kappa = cohen_kappa(result.a, result.b);
    result.report = agreement_report({{result.a, result.b}});
    return result;
  }

  /// The annotator credited with a file: the assignee of its latest
  /// assignment, or "unassigned".
  AnnotationVersion version_of(const StoredFile& stored) const {
    std::string annotator = "unassigned";
    for (const auto& [id, a] : assignments_) {
      if (a.file_id == stored.file_id && a.state != AssignmentState::Reassigned) annotator = a.assignee;
    }
    return {stored.file_id, annotator, stored.file};
  }

  Json plan_load_dictionary(const Actor& actor, const BilingualDictionary& dict, Timestamp at) const {
    require(permits(actor.role, Action::LoadDictionary), "only the master admin loads dictionaries");
    return event("DictionaryLoaded", actor.user_id, at, {{"content", serialize_dictionary(dict)}});
  }

  std::vector<std::pair<SentenceId, std::vector<GlossToken>>> translate(const Actor& actor, const std::string& file_id,
                                                                         const LanguageCode& target) const {
    const auto& stored = file(file_id);
    require(permits(actor.role, Action::Translate, stored.file.language), "file belongs to another language");
    const auto it = dictionaries_.find(stored.file.language.str() + "-" + target.str());
    if (it == dictionaries_.end()) {
      throw Error(ErrorCode::NotFound, "no dictionary " + stored.file.language.str() + "-" + target.str());
    }
    std::vector<std::pair<SentenceId, std::vector<GlossToken>>> out;
    for (const auto& s : stored.file.sentences) out.emplace_back(s.id, rough_translate(s, stored.file.language, it->second));
    return out;
  }

  // ---- import -------------------------------------------------------------

  Json plan_import(const Actor& actor, const ImportBundle& bundle, Timestamp at) const {
    require(permits(actor.role, Action::Import), "only the master admin imports corpora");
    if (!files_.empty()) throw Error(ErrorCode::InvalidArgument, "import needs a project without files");
    Json files = Json::array();
    std::set<std::string> ids;
    for (const auto& [id, f] : bundle.files) {
      if (id.size() != 7 || id[0] != 'F' || !ids.insert(id).second) {
        throw Error(ErrorCode::ValidationFailed, "bad or repeated file id '" + id + "'", id);
      }
      auto violations = validate(f, &config_.tagset);
      if (!config_.languages.count(f.language)) violations.push_back("language " + f.language.str() + " not in project");
      if (!violations.empty()) throw Error::with_details(ErrorCode::ValidationFailed, "file " + id + " is invalid", violations, id);
      files.push_back({{"fileId", id}, {"content", serialize_annotated_file(f)}});
    }
    Json lexicons = Json::array();
    for (const auto& lex : bundle.lexicons) {
      if (!config_.languages.count(lex.language)) throw Error(ErrorCode::UnknownLanguage, "lexicon language not in project", lex.language.str());
      for (const auto& [surface, tag] : lex.entries) {
        if (!config_.tagset.contains(tag)) throw Error(ErrorCode::TagNotInTagset, "lexicon tag '" + tag + "' not in tagset", tag);
      }
      lexicons.push_back({{"language", lex.language.str()}, {"version", lex.version}, {"entries", lex.entries}});
    }
    Json dictionaries = Json::array();
    for (const auto& d : bundle.dictionaries) dictionaries.push_back(serialize_dictionary(d));
    return event("CorpusImported", actor.user_id, at,
                 {{"files", files}, {"lexicons", lexicons}, {"dictionaries", dictionaries}});
  }

  // ---- the mutator --------------------------------------------------------

  void apply(const Json& e) {
    const auto type = e.at("type").get<std::string>();
    const auto actor = e.at("actor").get<std::string>();
    const auto at = parse_rfc3339(e.at("at").get<std::string>());

    if (type == "UserCreated") {
      auto account = codec::user(e.at("user"));
      users_.emplace(account.user_id, std::move(account));
    } else if (type == "UserModified") {
      auto& account = users_.at(e.at("userId").get<std::string>());
      const auto& c = e.at("changes");
      if (c.contains("displayName")) account.display_name = c["displayName"].get<std::string>();
      if (c.contains("role")) account.role = codec::role(c["role"]);
      if (c.contains("credential")) account.credential = c["credential"].get<std::string>();
      if (c.contains("active")) {
        account.active = c["active"].get<bool>();
        if (!account.active) close_sessions_of(account.user_id, at);
      }
    } else if (type == "UserDeactivated") {
      auto& account = users_.at(e.at("userId").get<std::string>());
      account.active = false;
      close_sessions_of(account.user_id, at);
    } else if (type == "SessionOpened") {
      const auto hash = e.at("tokenHash").get<std::string>();
      sessions_.push_back({e.at("userId").get<std::string>(), at, std::nullopt, hash});
      open_sessions_[hash] = sessions_.size() - 1;
    } else if (type == "SessionClosed") {
      const auto it = open_sessions_.find(e.at("tokenHash").get<std::string>());
      sessions_[it->second].logout_at = at;
      open_sessions_.erase(it);
    } else if (type == "FileUploaded") {
      add_file(e.at("fileId").get<std::string>(), parse_annotated_file(e.at("content").get<std::string>()), actor, at);
    } else if (type == "AssignmentCreated") {
      const auto id = e.at("assignmentId").get<std::string>();
      assignments_[id] = {id, e.at("fileId").get<std::string>(), e.at("assignee").get<std::string>(),
                          AssignmentState::Assigned, {{"assigned", actor, at, e.at("assignee").get<std::string>()}}};
      next_assignment_ = std::max(next_assignment_, id_number(id) + 1);
    } else if (type == "AssignmentReassigned") {
      auto& old = assignments_.at(e.at("assignmentId").get<std::string>());
      const auto id = e.at("newAssignmentId").get<std::string>();
      const auto assignee = e.at("assignee").get<std::string>();
      old.state = AssignmentState::Reassigned;
      old.history.push_back({"reassigned", actor, at, assignee});
      assignments_[id] = {id, old.file_id, assignee, AssignmentState::Assigned,
                          {{"assigned", actor, at, assignee + " (from " + old.assignee + ")"}}};
      next_assignment_ = std::max(next_assignment_, id_number(id) + 1);
    } else if (type == "AssignmentCompleted") {
      auto& a = assignments_.at(e.at("assignmentId").get<std::string>());
      a.state = AssignmentState::Completed;
      a.history.push_back({"completed", actor, at, {}});
    } else if (type == "TagAssigned") {
      auto& stored = files_.at(e.at("fileId").get<std::string>());
      auto& s = sentence(stored, SentenceId::parse(e.at("sid").get<std::string>()));
      s.tokens.at(e.at("index").get<std::size_t>()).tag = e.at("tag").get<std::string>();
      mark_started(stored.file_id, actor, at);
    } else if (type == "SentenceEdited") {
      auto& stored = files_.at(e.at("fileId").get<std::string>());
      auto& s = sentence(stored, SentenceId::parse(e.at("sid").get<std::string>()));
      auto result = edit_sentence(s, e.at("text").get<std::string>(), actor, at);
      s = std::move(result.sentence);
      stored.edits.push_back(std::move(result.record));
      mark_started(stored.file_id, actor, at);
    } else if (type == "AutoTagged") {
      auto& stored = files_.at(e.at("fileId").get<std::string>());
      for (const auto& item : e.at("applied")) {
        auto& s = sentence(stored, SentenceId::parse(item.at(0).get<std::string>()));
        s.tokens.at(item.at(1).get<std::size_t>()).tag = item.at(2).get<std::string>();
      }
      mark_started(stored.file_id, actor, at);
    } else if (type == "LexiconUpdated") {
      auto& lex = lexicons_.at(LanguageCode(e.at("language").get<std::string>()));
      lex = update_lexicon(lex, e.at("surface").get<std::string>(), codec::opt_string(e.at("tag")), config_.tagset);
    } else if (type == "NoticePosted") {
      const auto id = e.at("noticeId").get<std::string>();
      const auto audience = e.at("audience").get<std::string>();
      notices_.push_back({id, actor,
                          audience == "all" ? std::nullopt : std::optional<LanguageCode>(LanguageCode(audience)),
                          e.at("body").get<std::string>(), at});
      next_notice_ = std::max(next_notice_, id_number(id) + 1);
    } else if (type == "DictionaryLoaded") {
      auto dict = load_dictionary(e.at("content").get<std::string>());
      dictionaries_.insert_or_assign(dict.source.str() + "-" + dict.target.str(), std::move(dict));
    } else if (type == "CorpusImported") {
      for (const auto& f : e.at("files")) {
        add_file(f.at("fileId").get<std::string>(), parse_annotated_file(f.at("content").get<std::string>()), actor, at);
      }
      for (const auto& l : e.at("lexicons")) {
        ClosedClassLexicon lex(LanguageCode(l.at("language").get<std::string>()));
        lex.version = l.at("version").get<std::uint64_t>();
        lex.entries = l.at("entries").get<std::map<std::string, std::string>>();
        for (const auto& [surface, tag] : lex.entries) lex.changed[surface] = {lex.version, tag};
        lexicons_.insert_or_assign(lex.language, std::move(lex));
      }
      for (const auto& d : e.at("dictionaries")) {
        auto dict = load_dictionary(d.get<std::string>());
        dictionaries_.insert_or_assign(dict.source.str() + "-" + dict.target.str(), std::move(dict));
      }
    } else {
      throw Error(ErrorCode::StoreCorrupt, "unknown event type '" + type + "'");
    }
  }

  // ---- plain accessors ----------------------------------------------------

  const ProjectConfig& config() const { return config_; }
  const std::map<std::string, UserAccount>& users() const { return users_; }
  const std::vector<SessionRecord>& sessions() const { return sessions_; }
  const std::map<std::string, StoredFile>& files() const { return files_; }
  const std::map<std::string, FileAssignment>& assignments() const { return assignments_; }
  const std::vector<Notice>& notices() const { return notices_; }
  const std::map<LanguageCode, ClosedClassLexicon>& lexicons() const { return lexicons_; }
  const std::map<std::string, BilingualDictionary>& dictionaries() const { return dictionaries_; }

  const UserAccount& user(const std::string& user_id) const {
    const auto it = users_.find(user_id);
    if (it == users_.end()) throw Error(ErrorCode::NotFound, "no such user", user_id);
    return it->second;
  }

  const StoredFile& file(const std::string& file_id) const {
    const auto it = files_.find(file_id);
    if (it == files_.end()) throw Error(ErrorCode::NotFound, "no such file", file_id);
    return it->second;
  }

  const FileAssignment& assignment(const std::string& assignment_id) const {
    const auto it = assignments_.find(assignment_id);
    if (it == assignments_.end()) throw Error(ErrorCode::NotFound, "no such assignment", assignment_id);
    return it->second;
  }

  const FileAssignment* active_assignment(const std::string& file_id) const {
    for (const auto& [id, a] : assignments_) {
      if (a.file_id == file_id && is_active(a.state)) return &a;
    }
    return nullptr;
  }

  /// Assigned + InProgress assignments held by `user_id`.
  std::size_t active_count(const std::string& user_id) const {
    return static_cast<std::size_t>(std::count_if(assignments_.begin(), assignments_.end(), [&](const auto& kv) {
      return kv.second.assignee == user_id && is_active(kv.second.state);
    }));
  }

  FileStatus status(const std::string& file_id) const {
    bool completed = false;
    for (const auto& [id, a] : assignments_) {
      if (a.file_id != file_id) continue;
      if (is_active(a.state)) return FileStatus::Assigned;
      if (a.state == AssignmentState::Completed) completed = true;
    }
    return completed ? FileStatus::Completed : FileStatus::Unassigned;
  }

  // ---- snapshots ----------------------------------------------------------

  Json to_json() const {
    Json users = Json::array();
    for (const auto& [id, u] : users_) users.push_back(codec::user(u, true));
    Json sessions = Json::array();
    for (const auto& s : sessions_) sessions.push_back(codec::session(s, true));
    Json files = Json::array();
    for (const auto& [id, f] : files_) {
      Json edits = Json::array();
      for (const auto& r : f.edits) edits.push_back(codec::edit_record(r));
      files.push_back({{"fileId", id},
                       {"content", serialize_annotated_file(f.file)},
                       {"uploadedBy", f.uploaded_by},
                       {"uploadedAt", format_rfc3339(f.uploaded_at)},
                       {"edits", edits}});
    }
    Json assignments = Json::array();
    for (const auto& [id, a] : assignments_) assignments.push_back(codec::assignment(a));
    Json notices = Json::array();
    for (const auto& n : notices_) notices.push_back(codec::notice(n));
    Json lexicons = Json::array();
    for (const auto& [lang, lex] : lexicons_) lexicons.push_back(codec::lexicon(lex));
    Json dictionaries = Json::array();
    for (const auto& [key, d] : dictionaries_) dictionaries.push_back(serialize_dictionary(d));
    return {{"config", codec::config(config_)},
            {"users", users},
            {"sessions", sessions},
            {"files", files},
            {"assignments", assignments},
            {"notices", notices},
            {"lexicons", lexicons},
            {"dictionaries", dictionaries},
            {"counters", {{"file", next_file_}, {"assignment", next_assignment_}, {"notice", next_notice_}}}};
  }

  static Project from_json(const Json& j) {
    Project p(codec::config(j.at("config")));
    for (const auto& u : j.at("users")) {
      auto account = codec::user(u);
      p.users_.emplace(account.user_id, std::move(account));
    }
    for (const auto& s : j.at("sessions")) {
      p.sessions_.push_back(codec::session(s));
      if (p.sessions_.back().open()) p.open_sessions_[p.sessions_.back().token_hash] = p.sessions_.size() - 1;
    }
    for (const auto& f : j.at("files")) {
      StoredFile stored{f.at("fileId").get<std::string>(), parse_annotated_file(f.at("content").get<std::string>()),
                        f.at("uploadedBy").get<std::string>(), parse_rfc3339(f.at("uploadedAt").get<std::string>()), {}};
      for (const auto& r : f.at("edits")) stored.edits.push_back(codec::edit_record(r));
      p.files_.emplace(stored.file_id, std::move(stored));
    }
    for (const auto& a : j.at("assignments")) {
      auto assignment = codec::assignment(a);
      p.assignments_.emplace(assignment.assignment_id, std::move(assignment));
    }
    for (const auto& n : j.at("notices")) p.notices_.push_back(codec::notice(n));
    for (const auto& l : j.at("lexicons")) {
      auto lex = codec::lexicon(l);
      p.lexicons_.insert_or_assign(lex.language, std::move(lex));
    }
    for (const auto& d : j.at("dictionaries")) {
      auto dict = load_dictionary(d.get<std::string>());
      p.dictionaries_.insert_or_assign(dict.source.str() + "-" + dict.target.str(), std::move(dict));
    }
    const auto& counters = j.at("counters");
    p.next_file_ = counters.at("file").get<std::size_t>();
    p.next_assignment_ = counters.at("assignment").get<std::size_t>();
    p.next_notice_ = counters.at("notice").get<std::size_t>();
    return p;
  }

 private:
  static void require(bool ok, const std::string& message) {
    if (!ok) throw Error(ErrorCode::NotAuthorized, message);
  }

  static std::string make_id(char prefix, std::size_t n) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%c%06zu", prefix, n);
    return buf;
  }

  static std::size_t id_number(const std::string& id) { return std::stoul(id.substr(1)); }

  static Json event(const char* type, const std::string& actor, Timestamp at, Json fields) {
    fields["type"] = type;
    fields["actor"] = actor;
    fields["at"] = format_rfc3339(at);
    return fields;
  }

  void check_role_language(const Role& role) const {
    if (role.language() && !config_.languages.count(*role.language())) {
      throw Error(ErrorCode::UnknownLanguage, "no such project language", role.language()->str());
    }
  }

  /// Assign/reassign: admins of other languages get LanguageMismatch.
  void require_manager(const Actor& actor, const LanguageCode& language, Action action) const {
    if (permits(actor.role, action, language)) return;
    if (actor.role.kind() == RoleKind::Admin) {
      throw Error(ErrorCode::LanguageMismatch, actor.role.str() + " cannot manage " + language.str() + " files");
    }
    require(false, "only administrators assign files");
  }

  void check_assignee(const StoredFile& stored, const std::string& assignee) const {
    const auto it = users_.find(assignee);
    if (it == users_.end()) throw Error(ErrorCode::InvalidAssignee, "no such user", assignee);
    const auto& account = it->second;
    if (account.role.kind() != RoleKind::Annotator || !account.active) {
      throw Error(ErrorCode::InvalidAssignee, assignee + " is not an active annotator", assignee);
    }
    if (account.role.language() != stored.file.language) {
      throw Error(ErrorCode::LanguageMismatch,
                  assignee + " annotates " + account.role.language()->str() + ", file is " + stored.file.language.str(),
                  assignee);
    }
  }

  void check_cap(const std::string& assignee) const {
    if (active_count(assignee) >= config_.max_active_assignments) {
      throw Error(ErrorCode::CapExceeded,
                  assignee + " already holds " + std::to_string(config_.max_active_assignments) + " unfinished files",
                  assignee);
    }
  }

  void require_assignee(const Actor& actor, const StoredFile& stored) const {
    require(permits(actor.role, Action::AnnotateFile, stored.file.language),
            "only annotators of " + stored.file.language.str() + " annotate this file");
    const auto* active = active_assignment(stored.file_id);
    require(active && active->assignee == actor.user_id, "file " + stored.file_id + " is not assigned to " + actor.user_id);
  }

  static void require_fully_tagged(const StoredFile& stored) {
    const auto c = completion_status(stored.file);
    if (!c.fraction.is_one()) {
      throw Error(ErrorCode::IncompleteFile,
                  std::to_string(c.remaining()) + " of " + std::to_string(c.total) + " sentences not fully tagged",
                  stored.file_id);
    }
  }

  static const AnnotatedSentence& sentence(const StoredFile& stored, const SentenceId& sid) {
    for (const auto& s : stored.file.sentences) {
      if (s.id == sid) return s;
    }
    throw Error(ErrorCode::NotFound, "no sentence " + sid.str() + " in " + stored.file_id, sid.str());
  }

  static AnnotatedSentence& sentence(StoredFile& stored, const SentenceId& sid) {
    return const_cast<AnnotatedSentence&>(sentence(static_cast<const StoredFile&>(stored), sid));
  }

  void add_file(const std::string& id, CorpusFile file, const std::string& actor, Timestamp at) {
    files_.emplace(id, StoredFile{id, std::move(file), actor, at, {}});
    next_file_ = std::max(next_file_, id_number(id) + 1);
  }

  void mark_started(const std::string& file_id, const std::string& actor, Timestamp at) {
    for (auto& [id, a] : assignments_) {
      if (a.file_id == file_id && a.state == AssignmentState::Assigned) {
        a.state = AssignmentState::InProgress;
        a.history.push_back({"started", actor, at, {}});
      }
    }
  }

  void close_sessions_of(const std::string& user_id, Timestamp at) {
    for (auto it = open_sessions_.begin(); it != open_sessions_.end();) {
      if (sessions_[it->second].user_id == user_id) {
        sessions_[it->second].logout_at = at;
        it = open_sessions_.erase(it);
      } else {
        ++it;
      }
    }
  }

  ProgressCounts counts_for_language(const LanguageCode& lang) const {
    ProgressCounts c;
    for (const auto& [id, stored] : files_) {
      if (stored.file.language != lang) continue;
      ++c.files_total;
      const auto st = status(id);
      if (st == FileStatus::Assigned) ++c.files_assigned;
      if (st == FileStatus::Completed) ++c.files_completed;
      const auto done = completion_status(stored.file);
      c.sentences_total += done.total;
      c.sentences_complete += done.complete;
    }
    for (const auto& [id, a] : assignments_) {
      if (a.state == AssignmentState::Completed && files_.at(a.file_id).file.language == lang) {
        ++c.completed_by_annotator[a.assignee];
      }
    }
    return c;
  }

  static void add_counts(ProgressCounts& into, const ProgressCounts& c) {
    into.files_total += c.files_total;
    into.files_assigned += c.files_assigned;
    into.files_completed += c.files_completed;
    into.sentences_total += c.sentences_total;
    into.sentences_complete += c.sentences_complete;
    for (const auto& [who, n] : c.completed_by_annotator) into.completed_by_annotator[who] += n;
  }

  ProjectConfig config_;
  std::map<std::string, UserAccount> users_;
  std::vector<SessionRecord> sessions_;
  std::map<std::string, std::size_t> open_sessions_;  // token hash -> index into sessions_
  std::map<std::string, StoredFile> files_;
  std::map<std::string, FileAssignment> assignments_;
  std::vector<Notice> notices_;
  std::map<LanguageCode, ClosedClassLexicon> lexicons_;
  std::map<std::string, BilingualDictionary> dictionaries_;  // "<src>-<tgt>"
  std::size_t next_file_ = 1;
  std::size_t next_assignment_ = 1;
  std::size_t next_notice_ = 1;
};

}  // namespace parcorp
