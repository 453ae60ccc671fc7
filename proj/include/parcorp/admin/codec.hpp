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

// JSON forms of the domain types, used by the event log, snapshots and the
// HTTP API.

#pragma once

#include <json.hpp>

#include <optional>
#include <string>

#include "parcorp/admin/types.hpp"
#include "parcorp/annotation/edit.hpp"
#include "parcorp/annotation/lexicon.hpp"
#include "parcorp/corpus/format.hpp"

namespace parcorp::codec {

using Json = nlohmann::json;

inline Json opt(const std::optional<std::string>& v) { return v ? Json(*v) : Json(nullptr); }

inline std::optional<std::string> opt_string(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::string>();
}

inline std::optional<LanguageCode> opt_language(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return LanguageCode(j.get<std::string>());
}

inline Json role(const Role& r) {
  return {{"kind", to_string(r.kind())}, {"language", r.language() ? Json(r.language()->str()) : Json(nullptr)}};
}

inline Role role(const Json& j) {
  return Role::make(parse_role_kind(j.at("kind").get<std::string>()), opt_language(j.at("language")));
}

inline Json user(const UserAccount& u, bool with_credential) {
  Json j = {{"userId", u.user_id}, {"displayName", u.display_name}, {"role", role(u.role)}, {"active", u.active}};
  if (with_credential) j["credential"] = u.credential;
  return j;
}

inline UserAccount user(const Json& j) {
  return {j.at("userId").get<std::string>(), j.at("displayName").get<std::string>(), role(j.at("role")),
          j.at("active").get<bool>(), j.value("credential", std::string())};
}

inline Json session(const SessionRecord& s, bool with_hash) {
  Json j = {{"userId", s.user_id},
            {"loginAt", format_rfc3339(s.login_at)},
            {"logoutAt", s.logout_at ? Json(format_rfc3339(*s.logout_at)) : Json(nullptr)}};
  if (with_hash) j["tokenHash"] = s.token_hash;
  return j;
}

inline SessionRecord session(const Json& j) {
  SessionRecord s{j.at("userId").get<std::string>(), parse_rfc3339(j.at("loginAt").get<std::string>()),
                  std::nullopt, j.value("tokenHash", std::string())};
  if (!j.at("logoutAt").is_null()) s.logout_at = parse_rfc3339(j.at("logoutAt").get<std::string>());
  return s;
}

inline Json assignment(const FileAssignment& a) {
  Json history = Json::array();
  for (const auto& h : a.history) {
    history.push_back({{"event", h.event}, {"actor", h.actor}, {"at", format_rfc3339(h.at)}, {"detail", h.detail}});
  }
  return {{"assignmentId", a.assignment_id},
          {"fileId", a.file_id},
          {"assignee", a.assignee},
          {"state", to_string(a.state)},
          {"history", history}};
}

inline FileAssignment assignment(const Json& j) {
  FileAssignment a{j.at("assignmentId").get<std::string>(), j.at("fileId").get<std::string>(),
                   j.at("assignee").get<std::string>(), parse_assignment_state(j.at("state").get<std::string>()),
                   {}};
  for (const auto& h : j.at("history")) {
    a.history.push_back({h.at("event").get<std::string>(), h.at("actor").get<std::string>(),
                         parse_rfc3339(h.at("at").get<std::string>()), h.value("detail", std::string())});
  }
  return a;
}

inline Json notice(const Notice& n) {
  return {{"noticeId", n.notice_id},
          {"author", n.author},
          {"audience", n.audience ? Json(n.audience->str()) : Json("all")},
          {"body", n.body},
          {"postedAt", format_rfc3339(n.posted_at)}};
}

inline Notice notice(const Json& j) {
  const auto audience = j.at("audience").get<std::string>();
  return {j.at("noticeId").get<std::string>(), j.at("author").get<std::string>(),
          audience == "all" ? std::nullopt : std::optional<LanguageCode>(LanguageCode(audience)),
          j.at("body").get<std::string>(), parse_rfc3339(j.at("postedAt").get<std::string>())};
}

inline Json edit_record(const EditRecord& e) {
  return {{"sid", e.id.str()},
          {"oldText", e.old_text},
          {"newText", e.new_text},
          {"editor", e.editor},
          {"at", format_rfc3339(e.at)}};
}

inline EditRecord edit_record(const Json& j) {
  return {SentenceId::parse(j.at("sid").get<std::string>()), j.at("oldText").get<std::string>(),
          j.at("newText").get<std::string>(), j.at("editor").get<std::string>(),
          parse_rfc3339(j.at("at").get<std::string>())};
}

inline Json lexicon(const ClosedClassLexicon& lex) {
  Json changed = Json::object();
  for (const auto& [surface, mark] : lex.changed) changed[surface] = {{"version", mark.version}, {"tag", opt(mark.tag)}};
  return {{"language", lex.language.str()}, {"version", lex.version}, {"entries", lex.entries}, {"changed", changed}};
}

inline ClosedClassLexicon lexicon(const Json& j) {
  ClosedClassLexicon lex(LanguageCode(j.at("language").get<std::string>()));
  lex.version = j.at("version").get<std::uint64_t>();
  lex.entries = j.at("entries").get<std::map<std::string, std::string>>();
  for (const auto& [surface, mark] : j.at("changed").items()) {
    lex.changed[surface] = {mark.at("version").get<std::uint64_t>(), opt_string(mark.at("tag"))};
  }
  return lex;
}

inline Json config(const ProjectConfig& c) {
  Json languages = Json::array();
  for (const auto& l : c.languages) languages.push_back(l.str());
  return {{"maxActiveAssignments", c.max_active_assignments},
          {"tagset", {{"name", c.tagset.name()}, {"labels", c.tagset.labels()}}},
          {"languages", languages},
          {"openRegistration", c.open_registration}};
}

inline ProjectConfig config(const Json& j) {
  ProjectConfig c{j.at("maxActiveAssignments").get<std::size_t>(),
                  Tagset(j.at("tagset").at("name").get<std::string>(),
                         j.at("tagset").at("labels").get<std::vector<std::string>>()),
                  {},
                  j.at("openRegistration").get<bool>()};
  for (const auto& l : j.at("languages")) c.languages.insert(LanguageCode(l.get<std::string>()));
  return c;
}

/// Sentence as JSON for API responses.
inline Json sentence(const AnnotatedSentence& s) {
  Json tokens = Json::array();
  for (const auto& t : s.tokens) tokens.push_back({{"surface", t.surface}, {"tag", opt(t.tag)}});
  return {{"sid", s.id.str()}, {"tokens", tokens}, {"complete", s.complete()}};
}

}  // namespace parcorp::codec
