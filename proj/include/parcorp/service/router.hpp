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

// HTTP-shaped request handling without a socket. The HTTP server and the
// CLI's local mode both go through Router::handle, so they cannot drift.
//
//   POST   /api/login                          {userId, password} -> {token}
//   POST   /api/logout
//   GET    /api/users[/{id}]
//   POST   /api/users                          anonymous = self-registration
//   PATCH  /api/users/{id}
//   DELETE /api/users/{id}                     deactivates
//   GET    /api/files
//   POST   /api/files                          raw (or annotated) file body
//   GET    /api/files/{id}
//   GET    /api/files/{id}/download            gate errors -> 409
//   GET    /api/assignments
//   POST   /api/assignments                    {fileId, assignee}
//   POST   /api/assignments/{id}/reassign      {assignee}
//   POST   /api/assignments/{id}/complete
//   PUT    /api/files/{id}/sentences/{sid}/tokens/{i}/tag   {tag}
//   POST   /api/files/{id}/sentences/{sid}/edit             {text}
//   POST   /api/files/{id}/auto-tag
//   GET    /api/lexicon/{lang}[?since=v]
//   PUT    /api/lexicon/{lang}                 {surface, tag|null}
//   GET    /api/progress?scope=project|language|user[&subject=]
//   GET    /api/notices
//   POST   /api/notices                        {audience, body}
//   GET    /api/iaa?fileA=&fileB=
//   POST   /api/adapt
//   GET    /api/translate/{fileId}?pair=src-tgt
//   GET    /api/export[?format=native|columnar]
//   POST   /api/import                         native archive body
//   PUT    /api/dictionaries                   dictionary file body
//   GET    /api/health
//
// Errors: {"error": {"code", "message", "entity"[, "details"]}}.

#pragma once

#include <charconv>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "parcorp/adaptation/adapt.hpp"
#include "parcorp/service/export.hpp"
#include "parcorp/service/service.hpp"

namespace parcorp {

struct Request {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::map<std::string, std::string> headers;  // lower-case names
  std::string body;
};

struct Response {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;

  Json json() const { return Json::parse(body); }
};

inline int http_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::Unauthenticated:
    case ErrorCode::BadCredential:
      return 401;
    case ErrorCode::NotAuthorized:
    case ErrorCode::InactiveAccount:
    case ErrorCode::LanguageMismatch:
      return 403;
    case ErrorCode::NotFound:
    case ErrorCode::UnknownLanguage:
      return 404;
    case ErrorCode::DuplicateUser:
    case ErrorCode::CapExceeded:
    case ErrorCode::AlreadyAssigned:
    case ErrorCode::AlreadyCompleted:
    case ErrorCode::NoActiveAssignment:
    case ErrorCode::IncompleteFile:
    case ErrorCode::NoChange:
      return 409;
    case ErrorCode::ValidationFailed:
    case ErrorCode::InvalidAssignee:
    case ErrorCode::NoJointPositions:
    case ErrorCode::UnmappedTag:
    case ErrorCode::TextMismatch:
      return 422;
    case ErrorCode::StoreUnavailable:
    case ErrorCode::StoreCorrupt:
    case ErrorCode::BindFailure:
      return 500;
    default:
      return 400;
  }
}

inline std::string dump(const Json& j) { return j.dump(-1, ' ', false, Json::error_handler_t::replace); }

inline Response json_response(int status, const Json& body) { return {status, "application/json", dump(body) + "\n"}; }

inline Response error_response(const Error& e) {
  Json err = {{"code", to_string(e.code())}, {"message", e.what()}, {"entity", e.entity()}};
  if (!e.details().empty()) err["details"] = e.details();
  return json_response(http_status(e.code()), {{"error", err}});
}

class Router {
 public:
  explicit Router(Service& service) : service_(service) {}

  Response handle(const Request& req) const {
    try {
      return dispatch(req);
    } catch (const Error& e) {
      return error_response(e);
    } catch (const Json::exception& e) {
      return error_response(Error(ErrorCode::InvalidArgument, std::string("bad request body: ") + e.what()));
    } catch (const std::exception& e) {
      return json_response(500, {{"error", {{"code", "Internal"}, {"message", e.what()}, {"entity", ""}}}});
    }
  }

 private:
  using Segments = std::vector<std::string>;

  static Segments segments(std::string_view path) {
    Segments out;
    for (auto part : strings::split(path, '/')) {
      if (!part.empty()) out.emplace_back(part);
    }
    return out;
  }

  static bool match(const Segments& s, std::initializer_list<const char*> pattern) {
    if (s.size() != pattern.size()) return false;
    std::size_t i = 0;
    for (const char* p : pattern) {
      if (std::string_view(p) != "*" && s[i] != p) return false;
      ++i;
    }
    return true;
  }

  static std::string token_of(const Request& req) {
    const auto it = req.headers.find("authorization");
    if (it == req.headers.end()) return {};
    constexpr std::string_view prefix = "Bearer ";
    if (!strings::starts_with(it->second, prefix)) return {};
    return it->second.substr(prefix.size());
  }

  Actor authenticate(const Request& req) const {
    auto actor = service_.authenticate(token_of(req));
    if (!actor) throw Error(ErrorCode::Unauthenticated, "missing, unknown or closed session token");
    return *actor;
  }

  static Json body_json(const Request& req) {
    if (req.body.empty()) return Json::object();
    return Json::parse(req.body);
  }

  static std::string query(const Request& req, const std::string& key, const std::string& fallback = {}) {
    const auto it = req.query.find(key);
    return it == req.query.end() ? fallback : it->second;
  }

  static std::uint64_t to_number(std::string_view text, const char* what) {
    std::uint64_t n = 0;
    const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
    if (ec != std::errc() || p != text.data() + text.size()) {
      throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be a non-negative integer", std::string(text));
    }
    return n;
  }

  template <class F>
  Json commit(F&& plan) const {
    auto e = service_.commit([&](const Project& p, Timestamp now) -> std::optional<Json> { return plan(p, now); });
    return e ? *e : Json();
  }

  Response dispatch(const Request& req) const {
    const auto s = segments(req.path);
    const auto& m = req.method;
    if (s.empty() || s[0] != "api") throw Error(ErrorCode::NotFound, "no such endpoint", req.path);

    if (match(s, {"api", "health"}) && m == "GET") return json_response(200, {{"ok", true}, {"seq", service_.seq()}});
    if (match(s, {"api", "login"}) && m == "POST") return login(req);
    if (match(s, {"api", "users"}) && m == "POST" && token_of(req).empty()) return create_user(std::nullopt, req);

    const Actor actor = authenticate(req);

    if (match(s, {"api", "logout"}) && m == "POST") {
      service_.logout(token_of(req));
      return json_response(200, {{"ok", true}});
    }
    if (match(s, {"api", "users"})) {
      if (m == "GET") return list_users(actor);
      if (m == "POST") return create_user(actor, req);
    }
    if (match(s, {"api", "users", "*"})) {
      if (m == "GET") return get_user(actor, s[2]);
      if (m == "PATCH") return modify_user(actor, s[2], req);
      if (m == "DELETE") {
        commit([&](const Project& p, Timestamp now) { return p.plan_delete_user(actor, s[2], now); });
        return get_user(actor, s[2]);
      }
    }
    if (match(s, {"api", "files"})) {
      if (m == "GET") return list_files(actor);
      if (m == "POST") return upload(actor, req);
    }
    if (match(s, {"api", "files", "*"}) && m == "GET") return get_file(actor, s[2]);
    if (match(s, {"api", "files", "*", "download"}) && m == "GET") {
      auto bytes = service_.read([&](const Project& p) { return p.download(actor, s[2]); });
      return {200, "text/plain; charset=utf-8", std::move(bytes)};
    }
    if (match(s, {"api", "assignments"})) {
      if (m == "GET") return list_assignments(actor);
      if (m == "POST") return assign(actor, req);
    }
    if (match(s, {"api", "assignments", "*", "reassign"}) && m == "POST") return reassign(actor, s[2], req);
    if (match(s, {"api", "assignments", "*", "complete"}) && m == "POST") {
      commit([&](const Project& p, Timestamp now) { return p.plan_complete(actor, s[2], now); });
      return assignment_response(200, s[2]);
    }
    if (match(s, {"api", "files", "*", "sentences", "*", "tokens", "*", "tag"}) && m == "PUT") {
      return tag(actor, s[2], s[4], s[6], req);
    }
    if (match(s, {"api", "files", "*", "sentences", "*", "edit"}) && m == "POST") return edit(actor, s[2], s[4], req);
    if (match(s, {"api", "files", "*", "auto-tag"}) && m == "POST") return auto_tag(actor, s[2]);
    if (match(s, {"api", "lexicon", "*"})) {
      if (m == "GET") return get_lexicon(actor, s[2], req);
      if (m == "PUT") return put_lexicon(actor, s[2], req);
    }
    if (match(s, {"api", "progress"}) && m == "GET") return progress(actor, req);
    if (match(s, {"api", "notices"})) {
      if (m == "GET") return list_notices(actor);
      if (m == "POST") return post_notice(actor, req);
    }
    if (match(s, {"api", "iaa"}) && m == "GET") return iaa(actor, req);
    if (match(s, {"api", "adapt"}) && m == "POST") return adapt(actor, req);
    if (match(s, {"api", "translate", "*"}) && m == "GET") return translate(actor, s[2], req);
    if (match(s, {"api", "export"}) && m == "GET") {
      const auto format = parse_export_format(query(req, "format"));
      auto bytes = service_.read([&](const Project& p) { return export_project(p, actor, format); });
      return {200, "application/x-tar", std::move(bytes)};
    }
    if (match(s, {"api", "import"}) && m == "POST") return import(actor, req);
    if (match(s, {"api", "dictionaries"}) && m == "PUT") {
      if (!permits(actor.role, Action::LoadDictionary)) throw Error(ErrorCode::NotAuthorized, "only the master admin loads dictionaries");
      const auto dict = load_dictionary(req.body);
      commit([&](const Project& p, Timestamp now) { return p.plan_load_dictionary(actor, dict, now); });
      return json_response(200, {{"pair", dict.source.str() + "-" + dict.target.str()}, {"entries", dict.entries.size()}});
    }
    throw Error(ErrorCode::NotFound, "no such endpoint: " + m + " " + req.path, req.path);
  }

  // ---- users --------------------------------------------------------------

  Response login(const Request& req) const {
    const auto body = body_json(req);
    const auto user_id = body.at("userId").get<std::string>();
    const auto token = service_.login(user_id, body.at("password").get<std::string>());
    const auto account = service_.read([&](const Project& p) { return p.user(user_id); });
    return json_response(200, {{"token", token}, {"user", codec::user(account, false)}});
  }

  Response create_user(const std::optional<Actor>& actor, const Request& req) const {
    const auto body = body_json(req);
    const auto password = body.at("password").get<std::string>();
    if (password.empty()) throw Error(ErrorCode::InvalidArgument, "password is empty");
    const auto user_id = body.at("userId").get<std::string>();
    NewUser user{user_id, body.value("displayName", user_id), codec::role(body.at("role")), "pending"};
    // reject early so unauthorized callers do not cost a key derivation
    service_.read([&](const Project& p) { return p.plan_create_user(actor, user, system_now()); });
    user.credential = crypto::make_verifier(password);
    commit([&](const Project& p, Timestamp now) { return p.plan_create_user(actor, user, now); });
    const auto account = service_.read([&](const Project& p) { return p.user(user_id); });
    return json_response(201, codec::user(account, false));
  }

  Response list_users(const Actor& actor) const {
    Json users = Json::array();
    for (const auto& u : service_.read([&](const Project& p) { return p.list_users(actor); })) {
      users.push_back(codec::user(u, false));
    }
    return json_response(200, {{"users", users}});
  }

  Response get_user(const Actor& actor, const std::string& id) const {
    return service_.read([&](const Project& p) {
      const auto& u = p.user(id);
      const bool visible = id == actor.user_id || actor.role.is_master() ||
                           (actor.role.kind() == RoleKind::Admin && u.role.language() == actor.role.language());
      if (!visible) throw Error(ErrorCode::NotAuthorized, "user belongs to another language", id);
      return json_response(200, codec::user(u, false));
    });
  }

  Response modify_user(const Actor& actor, const std::string& id, const Request& req) const {
    const auto body = body_json(req);
    UserChanges changes;
    if (body.contains("displayName")) changes.display_name = body["displayName"].get<std::string>();
    if (body.contains("role")) changes.role = codec::role(body["role"]);
    if (body.contains("active")) changes.active = body["active"].get<bool>();
    service_.read([&](const Project& p) { return p.plan_modify_user(actor, id, changes, system_now()); });
    if (body.contains("password")) changes.credential = crypto::make_verifier(body["password"].get<std::string>());
    commit([&](const Project& p, Timestamp now) { return p.plan_modify_user(actor, id, changes, now); });
    return get_user(actor, id);
  }

  // ---- files --------------------------------------------------------------

  static Json file_summary(const Project& p, const StoredFile& f) {
    const auto c = completion_status(f.file);
    const auto* active = p.active_assignment(f.file_id);
    return {{"fileId", f.file_id},
            {"language", f.file.language.str()},
            {"domain", f.file.domain.str()},
            {"sentences", c.total},
            {"complete", c.complete},
            {"status", to_string(p.status(f.file_id))},
            {"assignee", active ? Json(active->assignee) : Json(nullptr)},
            {"uploadedBy", f.uploaded_by},
            {"uploadedAt", format_rfc3339(f.uploaded_at)}};
  }

  Response list_files(const Actor& actor) const {
    return service_.read([&](const Project& p) {
      Json files = Json::array();
      for (const auto* f : p.list_files(actor)) files.push_back(file_summary(p, *f));
      return json_response(200, {{"files", files}});
    });
  }

  Response get_file(const Actor& actor, const std::string& id) const {
    return service_.read([&](const Project& p) {
      const auto& f = p.view_file(actor, id);
      Json j = file_summary(p, f);
      Json sentences = Json::array();
      for (const auto& s : f.file.sentences) sentences.push_back(codec::sentence(s));
      Json edits = Json::array();
      for (const auto& r : f.edits) edits.push_back(codec::edit_record(r));
      j["content"] = sentences;
      j["edits"] = edits;
      return json_response(200, j);
    });
  }

  Response upload(const Actor& actor, const Request& req) const {
    if (!permits(actor.role, Action::UploadFile)) throw Error(ErrorCode::NotAuthorized, "only the master admin uploads files");
    CorpusFile file{LanguageCode("xx"), DomainLabel("x"), {}};
    try {
      const bool annotated = req.body.find("\n#SID ") != std::string::npos;
      file = annotated ? parse_annotated_file(req.body) : parse_raw_file(req.body);
    } catch (const Error& e) {
      throw Error::with_details(ErrorCode::ValidationFailed, std::string("uploaded file is invalid: ") + e.what(),
                                {e.what()});
    }
    const auto e = commit([&](const Project& p, Timestamp now) { return p.plan_upload(actor, file, now); });
    const auto id = e.at("fileId").get<std::string>();
    return service_.read([&](const Project& p) { return json_response(201, file_summary(p, p.file(id))); });
  }

  // ---- assignments --------------------------------------------------------

  Response assignment_response(int status, const std::string& id) const {
    return service_.read([&](const Project& p) { return json_response(status, codec::assignment(p.assignment(id))); });
  }

  Response list_assignments(const Actor& actor) const {
    return service_.read([&](const Project& p) {
      Json out = Json::array();
      for (const auto& [id, a] : p.assignments()) {
        const auto& lang = p.file(a.file_id).file.language;
        const bool visible = actor.role.kind() == RoleKind::Annotator
                                 ? a.assignee == actor.user_id
                                 : permits(actor.role, Action::AssignFile, lang);
        if (visible) out.push_back(codec::assignment(a));
      }
      return json_response(200, {{"assignments", out}});
    });
  }

  Response assign(const Actor& actor, const Request& req) const {
    const auto body = body_json(req);
    const auto e = commit([&](const Project& p, Timestamp now) {
      return p.plan_assign(actor, body.at("fileId").get<std::string>(), body.at("assignee").get<std::string>(), now);
    });
    return assignment_response(201, e.at("assignmentId").get<std::string>());
  }

  Response reassign(const Actor& actor, const std::string& id, const Request& req) const {
    const auto body = body_json(req);
    const auto e = commit([&](const Project& p, Timestamp now) {
      return p.plan_reassign(actor, id, body.at("assignee").get<std::string>(), now);
    });
    return service_.read([&](const Project& p) {
      return json_response(201, {{"previous", codec::assignment(p.assignment(id))},
                                 {"assignment", codec::assignment(p.assignment(e.at("newAssignmentId").get<std::string>()))}});
    });
  }

  // ---- annotation ---------------------------------------------------------

  Response sentence_response(const std::string& file_id, const SentenceId& sid) const {
    return service_.read([&](const Project& p) {
      for (const auto& s : p.file(file_id).file.sentences) {
        if (s.id == sid) return json_response(200, codec::sentence(s));
      }
      throw Error(ErrorCode::NotFound, "no such sentence", sid.str());
    });
  }

  Response tag(const Actor& actor, const std::string& file_id, const std::string& sid_text, const std::string& index,
               const Request& req) const {
    const auto sid = SentenceId::parse(sid_text);
    const auto i = static_cast<std::size_t>(to_number(index, "token index"));
    const auto tag = body_json(req).at("tag").get<std::string>();
    commit([&](const Project& p, Timestamp now) { return p.plan_tag(actor, file_id, sid, i, tag, now); });
    return sentence_response(file_id, sid);
  }

  Response edit(const Actor& actor, const std::string& file_id, const std::string& sid_text, const Request& req) const {
    const auto sid = SentenceId::parse(sid_text);
    const auto text = body_json(req).at("text").get<std::string>();
    commit([&](const Project& p, Timestamp now) { return p.plan_edit(actor, file_id, sid, text, now); });
    return sentence_response(file_id, sid);
  }

  Response auto_tag(const Actor& actor, const std::string& file_id) const {
    const auto e = commit([&](const Project& p, Timestamp now) { return p.plan_auto_tag(actor, file_id, now); });
    Json applied = Json::array();
    if (!e.is_null()) {
      for (const auto& item : e.at("applied")) applied.push_back({{"sid", item[0]}, {"index", item[1]}, {"tag", item[2]}});
    }
    return json_response(200, {{"fileId", file_id}, {"applied", applied}});
  }

  Response get_lexicon(const Actor& actor, const std::string& lang, const Request& req) const {
    if (!LanguageCode::valid(lang)) throw Error(ErrorCode::UnknownLanguage, "no such project language", lang);
    const LanguageCode language(lang);
    return service_.read([&](const Project& p) {
      if (req.query.count("since")) {
        const auto delta = p.lexicon_sync(actor, language, to_number(query(req, "since"), "since"));
        Json changes = Json::object();
        for (const auto& [surface, tag] : delta.changes) changes[surface] = codec::opt(tag);
        return json_response(200, {{"language", lang}, {"version", delta.version}, {"changes", changes}});
      }
      const auto& lex = p.lexicon(actor, language);
      return json_response(200, {{"language", lang}, {"version", lex.version}, {"entries", lex.entries}});
    });
  }

  Response put_lexicon(const Actor& actor, const std::string& lang, const Request& req) const {
    if (!LanguageCode::valid(lang)) throw Error(ErrorCode::UnknownLanguage, "no such project language", lang);
    const auto body = body_json(req);
    const auto e = commit([&](const Project& p, Timestamp now) {
      return p.plan_lexicon_update(actor, LanguageCode(lang), body.at("surface").get<std::string>(),
                                   codec::opt_string(body.value("tag", Json())), now);
    });
    return json_response(200, {{"language", lang}, {"version", e.at("version")}, {"surface", e.at("surface")},
                               {"tag", e.at("tag")}});
  }

  // ---- monitoring ---------------------------------------------------------

  static Json counts_json(const ProgressCounts& c) {
    return {{"filesTotal", c.files_total},
            {"filesAssigned", c.files_assigned},
            {"filesCompleted", c.files_completed},
            {"sentencesTotal", c.sentences_total},
            {"sentencesComplete", c.sentences_complete},
            {"fileFraction", Ratio::of(c.files_completed, c.files_total).value()},
            {"sentenceFraction", Ratio::of(c.sentences_complete, c.sentences_total).value()},
            {"completedByAnnotator", c.completed_by_annotator}};
  }

  Response progress(const Actor& actor, const Request& req) const {
    const auto scope_name = query(req, "scope", "project");
    ProgressScope scope;
    std::string subject = query(req, "subject");
    if (scope_name == "project") {
      scope = ProgressScope::Project;
    } else if (scope_name == "language") {
      scope = ProgressScope::Language;
      if (subject.empty() && actor.role.language()) subject = actor.role.language()->str();
    } else if (scope_name == "user") {
      scope = ProgressScope::User;
      if (subject.empty()) subject = actor.user_id;
    } else {
      throw Error(ErrorCode::InvalidArgument, "scope must be project, language or user", scope_name);
    }
    const auto report = service_.read([&](const Project& p) { return p.progress(actor, scope, subject); });
    Json by_language = Json::object();
    for (const auto& [lang, c] : report.by_language) by_language[lang] = counts_json(c);
    Json time_log = Json::array();
    for (const auto& sr : report.time_log) time_log.push_back(codec::session(sr, false));
    return json_response(200, {{"scope", scope_name},
                               {"subject", report.subject},
                               {"totals", counts_json(report.totals)},
                               {"byLanguage", by_language},
                               {"timeLog", time_log},
                               {"loggedIn", report.logged_in}});
  }

  Response list_notices(const Actor& actor) const {
    Json out = Json::array();
    for (const auto& n : service_.read([&](const Project& p) { return p.list_notices(actor); })) {
      out.push_back(codec::notice(n));
    }
    return json_response(200, {{"notices", out}});
  }

  Response post_notice(const Actor& actor, const Request& req) const {
    const auto body = body_json(req);
    const auto audience_text = body.value("audience", std::string("all"));
    std::optional<LanguageCode> audience;
    if (audience_text != "all") {
      if (!LanguageCode::valid(audience_text)) throw Error(ErrorCode::UnknownLanguage, "no such project language", audience_text);
      audience = LanguageCode(audience_text);
    }
    const auto e = commit([&](const Project& p, Timestamp now) {
      return p.plan_notice(actor, audience, body.at("body").get<std::string>(), now);
    });
    return json_response(201, {{"noticeId", e.at("noticeId")}, {"audience", e.at("audience")}, {"body", e.at("body")},
                               {"author", e.at("actor")}, {"postedAt", e.at("at")}});
  }

  // ---- quality, adaptation, translation -----------------------------------

  Response iaa(const Actor& actor, const Request& req) const {
    const auto a = query(req, "fileA");
    const auto b = query(req, "fileB");
    if (a.empty() || b.empty()) throw Error(ErrorCode::InvalidArgument, "fileA and fileB are required");
    const auto r = service_.read([&](const Project& p) { return p.agreement(actor, a, b); });
    Json j = {{"fileA", a},
              {"fileB", b},
              {"annotatorA", r.a.annotator},
              {"annotatorB", r.b.annotator},
              {"joint", r.observed.joint},
              {"matches", r.observed.matches},
              {"observed", r.observed.value},
              {"disagreements", r.disagreements},
              {"report", r.report}};
    if (r.kappa) {
      j["expected"] = r.kappa->expected;
      j["kappa"] = r.kappa->kappa;
    } else {
      j["expected"] = nullptr;
      j["kappa"] = nullptr;
    }
    return json_response(200, j);
  }

  /// Body forms:
  ///   {"language", "domain", "startSerial"?, "text"}  normalize, segment, id
  ///   {"annotated", "mapping"}                          retag a foreign file
  Response adapt(const Actor& actor, const Request& req) const {
    const auto body = body_json(req);
    const auto tagset = service_.read([](const Project& p) { return p.config().tagset; });
    if (body.contains("annotated")) {
      const auto foreign = parse_annotated_file(body.at("annotated").get<std::string>());
      require_adapt(actor, foreign.language);
      const auto mapping = parse_tag_mapping(body.at("mapping").get<std::string>(), tagset);
      const auto mapped = map_foreign_tags(foreign, mapping);
      return json_response(200, {{"file", serialize_annotated_file(mapped)},
                                 {"sentences", mapped.sentences.size()},
                                 {"replacements", 0}});
    }
    const LanguageCode language(body.at("language").get<std::string>());
    require_adapt(actor, language);
    const DomainLabel domain(body.at("domain").get<std::string>());
    const auto start = body.value("startSerial", std::uint64_t{1});
    const auto normalized = normalize_text(body.at("text").get<std::string>());
    const auto sentences = segment_sentences(normalized.text);
    CorpusFile file{language, domain, assign_ids(sentences, domain, start)};
    return json_response(200, {{"file", serialize_raw_file(file)},
                               {"annotated", serialize_annotated_file(file)},
                               {"sentences", file.sentences.size()},
                               {"replacements", normalized.replacements}});
  }

  static void require_adapt(const Actor& actor, const LanguageCode& language) {
    if (!permits(actor.role, Action::Adapt, language)) {
      throw Error(ErrorCode::NotAuthorized, "adaptation is for administrators of the language", language.str());
    }
  }

  Response translate(const Actor& actor, const std::string& file_id, const Request& req) const {
    const auto pair = query(req, "pair");
    const auto parts = strings::split(pair, '-');
    if (parts.size() != 2 || !LanguageCode::valid(parts[0]) || !LanguageCode::valid(parts[1])) {
      throw Error(ErrorCode::InvalidArgument, "pair must be <src>-<tgt>", pair);
    }
    const auto gloss = service_.read([&](const Project& p) {
      const auto& f = p.view_file(actor, file_id);
      if (f.file.language.str() != parts[0]) {
        throw Error(ErrorCode::LanguageMismatch, "file is " + f.file.language.str() + ", pair starts with " +
                                                     std::string(parts[0]), file_id);
      }
      return p.translate(actor, file_id, LanguageCode(std::string(parts[1])));
    });
    Json sentences = Json::array();
    for (const auto& [sid, tokens] : gloss) {
      Json out = Json::array();
      for (const auto& t : tokens) {
        out.push_back({{"source", t.source}, {"output", t.output}, {"outOfVocabulary", t.out_of_vocabulary}});
      }
      sentences.push_back({{"sid", sid.str()}, {"gloss", out}});
    }
    return json_response(200, {{"fileId", file_id}, {"pair", pair}, {"sentences", sentences}});
  }

  Response import(const Actor& actor, const Request& req) const {
    if (!permits(actor.role, Action::Import)) throw Error(ErrorCode::NotAuthorized, "only the master admin imports corpora");
    const auto tagset = service_.read([](const Project& p) { return p.config().tagset; });
    const auto bundle = read_import_bundle(req.body, tagset);
    commit([&](const Project& p, Timestamp now) { return p.plan_import(actor, bundle, now); });
    return json_response(200, {{"files", bundle.files.size()},
                               {"lexicons", bundle.lexicons.size()},
                               {"dictionaries", bundle.dictionaries.size()}});
  }

  Service& service_;
};

}  // namespace parcorp
