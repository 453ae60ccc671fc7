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

// Operator command line. Every subcommand is one or a few API requests sent
// either to a server (--server) or to an in-process Router over a local
// store (--store); the CLI has no privileges of its own.
//
// Exit codes: 0 ok, 1 domain error (the API said no), 2 usage error.
// Password for --as comes from PARCORP_PASSWORD; new accounts take
// PARCORP_NEW_PASSWORD.

#pragma once

#include <CLI11.hpp>

#include <fstream>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "parcorp/service/http.hpp"

namespace parcorp::cli {

struct Result {
  int exit_code = 0;
  std::string out;
  std::string err;
};

class Transport {
 public:
  virtual ~Transport() = default;
  virtual Response send(const Request& req) = 0;
};

class HttpTransport : public Transport {
 public:
  explicit HttpTransport(std::string url) : url_(std::move(url)) {}
  Response send(const Request& req) override { return http_send(url_, req); }

 private:
  std::string url_;
};

/// Opens the store in-process. Environment keys configure a new store the
/// same way they configure the server.
class LocalTransport : public Transport {
 public:
  explicit LocalTransport(ServiceConfig config) : service_(std::move(config)), router_(service_) {}
  Response send(const Request& req) override { return router_.handle(req); }

 private:
  Service service_;
  Router router_;
};

using Env = std::function<const char*(const char*)>;

inline const char* system_env(const char* key) { return std::getenv(key); }

namespace detail {

/// Carries a failed API response out of a command.
struct ApiFailure {
  Response response;
};

struct Session {
  Transport& transport;
  std::string token;

  Response call(std::string method, std::string path, std::string body = {},
                std::map<std::string, std::string> query = {}, std::string content_type = "application/json") {
    Request req{std::move(method), std::move(path), std::move(query), {}, std::move(body)};
    if (!token.empty()) req.headers["authorization"] = "Bearer " + token;
    req.headers["content-type"] = std::move(content_type);
    auto res = transport.send(req);
    if (res.status >= 300) throw ApiFailure{std::move(res)};
    return res;
  }

  Json call_json(std::string method, std::string path, const Json& body = Json(),
                 std::map<std::string, std::string> query = {}) {
    return call(std::move(method), std::move(path), body.is_null() ? std::string() : dump(body), std::move(query))
        .json();
  }
};

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path, path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_output(const std::string& path, const std::string& bytes, std::string& out) {
  if (path.empty() || path == "-") {
    out += bytes;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f || !f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()))) {
    throw Error(ErrorCode::InvalidArgument, "cannot write " + path, path);
  }
}

inline std::string cell(const Json& j) {
  if (j.is_null()) return "-";
  if (j.is_string()) return j.get<std::string>();
  if (j.is_number_float()) return strings::fixed(j.get<double>(), 4);
  return j.dump();
}

inline std::string row(const std::vector<std::string>& cells) { return strings::join(cells, "\t") + "\n"; }

}  // namespace detail

inline constexpr const char* kSynopsis =
    "usage: parcorp (--server URL | --store PATH) [--as USER] [--format human|tsv] <command> ...\n"
    "commands: upload, download, export, users, assign, progress, stats, iaa, adapt, lexicon\n"
    "run 'parcorp <command> --help' for details\n";

/// Runs one command. `args` excludes the program name. When `transport` is
/// given it replaces --server/--store (used by tests to share one service).
inline Result dispatch(const std::vector<std::string>& args, const Env& env = system_env,
                       Transport* transport = nullptr) {
  Result result;
  CLI::App app{"parallel corpus annotation service client", "parcorp"};
  app.require_subcommand(1);
  app.set_help_flag("-h,--help");

  std::string server, store, as_user, format = "human";
  app.add_option("--server", server, "service base URL, e.g. http://127.0.0.1:8080");
  app.add_option("--store", store, "local store directory");
  app.add_option("--as", as_user, "user to authenticate as");
  app.add_option("--format", format, "output format")->check(CLI::IsMember({"human", "tsv"}));

  std::string path, out_path, file_id, file_b, assignee, assignment, scope, subject, kind = "native";
  std::string language, domain, mapping, surface, tag, role, display_name, user_id;
  std::uint64_t since = 0, start = 1;
  bool reassign = false, complete = false, remove = false;

  auto* upload = app.add_subcommand("upload", "upload a raw or annotated file (master admin)");
  upload->add_option("path", path, "file to upload")->required();

  auto* download = app.add_subcommand("download", "download a fully tagged file");
  download->add_option("--file", file_id, "file id")->required();
  download->add_option("-o,--output", out_path, "output path (default stdout)");

  auto* exporter = app.add_subcommand("export", "export the project as a tar archive");
  exporter->add_option("--kind", kind, "archive kind")->check(CLI::IsMember({"native", "columnar"}));
  exporter->add_option("-o,--output", out_path, "output path (default stdout)");

  auto* users = app.add_subcommand("users", "list, add or deactivate users");
  users->add_option("action", subject, "list | add | deactivate")->check(CLI::IsMember({"list", "add", "deactivate"}))
      ->required();
  users->add_option("--id", user_id, "user id");
  users->add_option("--role", role, "master | admin | annotator");
  users->add_option("--language", language, "role language");
  users->add_option("--name", display_name, "display name");

  auto* assign = app.add_subcommand("assign", "assign, reassign or complete files");
  assign->add_option("--file", file_id, "file id (assign, or reassign by file)");
  assign->add_option("--to", assignee, "annotator");
  assign->add_option("--assignment", assignment, "assignment id (reassign/complete)");
  assign->add_flag("--reassign", reassign, "move the active assignment to --to");
  assign->add_flag("--complete", complete, "mark the assignment completed");

  auto* progress = app.add_subcommand("progress", "completion report");
  progress->add_option("--scope", scope, "project | language | user")
      ->check(CLI::IsMember({"project", "language", "user"}));
  progress->add_option("--subject", subject, "language code or user id");

  auto* stats = app.add_subcommand("stats", "sentence and token counts");
  auto* stats_file = stats->add_option("--file", file_id, "file id on the service");
  auto* stats_path = stats->add_option("--path", path, "local raw or annotated file");
  stats_file->excludes(stats_path);

  auto* iaa = app.add_subcommand("iaa", "inter-annotator agreement between two files");
  iaa->add_option("--file-a", file_id, "first file id")->required();
  iaa->add_option("--file-b", file_b, "second file id")->required();

  auto* adapt = app.add_subcommand("adapt", "normalize and segment text, or retag a foreign file");
  adapt->add_option("--path", path, "input text, or annotated file with --mapping")->required();
  adapt->add_option("--language", language, "language of plain text");
  adapt->add_option("--domain", domain, "domain label for new ids");
  adapt->add_option("--start", start, "first serial")->check(CLI::PositiveNumber);
  adapt->add_option("--mapping", mapping, "tag mapping file");
  adapt->add_option("-o,--output", out_path, "output path (default stdout)");

  auto* lexicon = app.add_subcommand("lexicon", "show or change a closed-class lexicon");
  lexicon->add_option("language", language, "language code")->required();
  lexicon->add_option("surface", surface, "entry to set or delete");
  lexicon->add_option("tag", tag, "tag for the entry");
  lexicon->add_option("--since", since, "show only changes after this version");
  lexicon->add_flag("--delete", remove, "delete the entry");

  std::vector<const char*> argv{"parcorp"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return {0, out.str(), err.str()};
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return {0, out.str(), err.str()};
  } catch (const CLI::ParseError& e) {
    err << e.what() << "\n" << kSynopsis;
    return {2, out.str(), err.str()};
  }

  auto usage = [&](const std::string& msg) { return Result{2, {}, "usage error: " + msg + "\n" + kSynopsis}; };
  const bool tsv = format == "tsv";
  auto* sub = app.get_subcommands().front();

  // stats --path needs no service
  if (sub == stats && !path.empty()) {
    try {
      const auto bytes = detail::read_file(path);
      const bool annotated = bytes.find("\n#SID ") != std::string::npos;
      const auto file = annotated ? parse_annotated_file(bytes) : parse_raw_file(bytes);
      const auto st = corpus_stats(file);
      const auto mean = strings::decimal(st.mean_tokens_per_sentence.value());
      result.out = tsv ? detail::row({"sentences", "tokens", "mean"}) +
                             detail::row({std::to_string(st.sentence_count), std::to_string(st.token_count), mean})
                       : "sentences: " + std::to_string(st.sentence_count) + "\ntokens: " +
                             std::to_string(st.token_count) + "\nmean tokens per sentence: " + mean + "\n";
      return result;
    } catch (const Error& e) {
      return {1, {}, "error: " + std::string(to_string(e.code())) + ": " + e.what() + "\n"};
    }
  }
  if (sub == stats && file_id.empty()) return usage("stats needs --file or --path");

  std::unique_ptr<Transport> owned;
  if (!transport) {
    if (server.empty() == store.empty()) return usage("exactly one of --server and --store is required");
    try {
      if (!server.empty()) {
        owned = std::make_unique<HttpTransport>(server);
      } else {
        auto config = config_from_env([&](const char* k) { return env(k); });
        config.store = store;
        owned = std::make_unique<LocalTransport>(std::move(config));
      }
    } catch (const Error& e) {
      return {1, {}, "error: " + std::string(to_string(e.code())) + ": " + e.what() + "\n"};
    }
    transport = owned.get();
  }
  if (as_user.empty()) return usage("--as USER is required");
  const char* password = env("PARCORP_PASSWORD");
  if (!password) return usage("set PARCORP_PASSWORD for --as " + as_user);

  detail::Session session{*transport, {}};
  std::string& o = result.out;
  try {
    session.token = session.call_json("POST", "/api/login", {{"userId", as_user}, {"password", password}})
                        .at("token")
                        .get<std::string>();
    struct Logout {
      detail::Session& s;
      ~Logout() {
        try {
          s.transport.send({"POST", "/api/logout", {}, {{"authorization", "Bearer " + s.token}}, {}});
        } catch (...) {
        }
      }
    } logout{session};

    if (sub == upload) {
      const auto f = session.call("POST", "/api/files", detail::read_file(path), {}, "text/plain").json();
      o += tsv ? detail::row({detail::cell(f["fileId"]), detail::cell(f["language"]), detail::cell(f["domain"]),
                              detail::cell(f["sentences"])})
               : "uploaded " + detail::cell(f["fileId"]) + " (" + detail::cell(f["language"]) + ", " +
                     detail::cell(f["sentences"]) + " sentences)\n";
    } else if (sub == download) {
      detail::write_output(out_path, session.call("GET", "/api/files/" + file_id + "/download").body, o);
    } else if (sub == exporter) {
      detail::write_output(out_path, session.call("GET", "/api/export", {}, {{"format", kind}}).body, o);
    } else if (sub == users) {
      if (subject == "list") {
        const auto list = session.call_json("GET", "/api/users");
        if (tsv) o += detail::row({"user", "role", "language", "active", "name"});
        for (const auto& u : list.at("users")) {
          const std::vector<std::string> cells{detail::cell(u["userId"]), detail::cell(u["role"]["kind"]),
                                               detail::cell(u["role"]["language"]),
                                               u["active"].get<bool>() ? "yes" : "no", detail::cell(u["displayName"])};
          o += tsv ? detail::row(cells)
                   : cells[0] + "  " + cells[1] + (cells[2] == "-" ? "" : "(" + cells[2] + ")") +
                         (cells[3] == "yes" ? "" : "  [inactive]") + "  " + cells[4] + "\n";
        }
      } else if (subject == "add") {
        if (user_id.empty() || role.empty()) return usage("users add needs --id and --role");
        const char* new_password = env("PARCORP_NEW_PASSWORD");
        if (!new_password) return usage("set PARCORP_NEW_PASSWORD for the new account");
        const Json body = {{"userId", user_id},
                           {"displayName", display_name.empty() ? user_id : display_name},
                           {"password", new_password},
                           {"role", {{"kind", role}, {"language", language.empty() ? Json() : Json(language)}}}};
        const auto u = session.call_json("POST", "/api/users", body);
        o += tsv ? detail::row({detail::cell(u["userId"]), detail::cell(u["role"]["kind"]),
                                detail::cell(u["role"]["language"])})
                 : "created " + detail::cell(u["userId"]) + "\n";
      } else {
        if (user_id.empty()) return usage("users deactivate needs --id");
        session.call("DELETE", "/api/users/" + user_id);
        o += tsv ? detail::row({user_id, "inactive"}) : "deactivated " + user_id + "\n";
      }
    } else if (sub == assign) {
      Json a;
      if (complete) {
        if (assignment.empty()) return usage("--complete needs --assignment");
        a = session.call_json("POST", "/api/assignments/" + assignment + "/complete");
      } else if (reassign) {
        if (assignee.empty()) return usage("--reassign needs --to");
        if (assignment.empty()) {
          if (file_id.empty()) return usage("--reassign needs --assignment or --file");
          const auto list = session.call_json("GET", "/api/assignments");
          for (const auto& x : list.at("assignments")) {
            if (x["fileId"] == file_id && (x["state"] == "Assigned" || x["state"] == "InProgress")) {
              assignment = x["assignmentId"].get<std::string>();
            }
          }
          if (assignment.empty()) {
            throw Error(ErrorCode::NoActiveAssignment, "file " + file_id + " has no active assignment", file_id);
          }
        }
        a = session.call_json("POST", "/api/assignments/" + assignment + "/reassign", {{"assignee", assignee}})
                .at("assignment");
      } else {
        if (file_id.empty() || assignee.empty()) return usage("assign needs --file and --to");
        a = session.call_json("POST", "/api/assignments", {{"fileId", file_id}, {"assignee", assignee}});
      }
      o += tsv ? detail::row({detail::cell(a["assignmentId"]), detail::cell(a["fileId"]), detail::cell(a["assignee"]),
                              detail::cell(a["state"])})
               : detail::cell(a["assignmentId"]) + ": " + detail::cell(a["fileId"]) + " -> " +
                     detail::cell(a["assignee"]) + " [" + detail::cell(a["state"]) + "]\n";
    } else if (sub == progress) {
      std::map<std::string, std::string> q{{"scope", scope.empty() ? "project" : scope}};
      if (!subject.empty()) q["subject"] = subject;
      const auto r = session.call_json("GET", "/api/progress", {}, q);
      auto counts_row = [&](const std::string& name, const Json& c) {
        return std::vector<std::string>{name,
                                        detail::cell(c["filesTotal"]),
                                        detail::cell(c["filesAssigned"]),
                                        detail::cell(c["filesCompleted"]),
                                        detail::cell(c["sentencesTotal"]),
                                        detail::cell(c["sentencesComplete"])};
      };
      if (tsv) {
        o += detail::row({"unit", "files", "assigned", "completed", "sentences", "sentences_complete"});
        for (const auto& [lang, c] : r.at("byLanguage").items()) o += detail::row(counts_row(lang, c));
        o += detail::row(counts_row("total", r.at("totals")));
        for (const auto& [who, n] : r.at("totals").at("completedByAnnotator").items()) {
          o += detail::row({"annotator", who, detail::cell(n)});
        }
        for (const auto& s : r.at("timeLog")) {
          o += detail::row({"session", detail::cell(s["loginAt"]), detail::cell(s["logoutAt"])});
        }
      } else {
        auto line = [&](const std::string& name, const Json& c) {
          o += name + ": files " + detail::cell(c["filesCompleted"]) + "/" + detail::cell(c["filesTotal"]) +
               " completed (" + detail::cell(c["filesAssigned"]) + " assigned), sentences " +
               detail::cell(c["sentencesComplete"]) + "/" + detail::cell(c["sentencesTotal"]) + " tagged\n";
        };
        for (const auto& [lang, c] : r.at("byLanguage").items()) line(lang, c);
        line("total", r.at("totals"));
        for (const auto& [who, n] : r.at("totals").at("completedByAnnotator").items()) {
          o += "  " + who + " completed " + detail::cell(n) + "\n";
        }
        for (const auto& s : r.at("timeLog")) {
          o += "  session " + detail::cell(s["loginAt"]) + " .. " + detail::cell(s["logoutAt"]) + "\n";
        }
        if (!r.at("loggedIn").empty()) {
          o += "logged in: " + strings::join(r.at("loggedIn").get<std::vector<std::string>>(), ", ") + "\n";
        }
      }
    } else if (sub == stats) {
      const auto f = session.call_json("GET", "/api/files/" + file_id);
      std::size_t tokens = 0;
      for (const auto& s : f.at("content")) tokens += s.at("tokens").size();
      const auto sentences = f.at("content").size();
      const auto mean = strings::decimal(Ratio::of(tokens, sentences).value());
      o += tsv ? detail::row({"sentences", "tokens", "mean"}) +
                     detail::row({std::to_string(sentences), std::to_string(tokens), mean})
               : "sentences: " + std::to_string(sentences) + "\ntokens: " + std::to_string(tokens) +
                     "\nmean tokens per sentence: " + mean + "\n";
    } else if (sub == iaa) {
      const auto r = session.call_json("GET", "/api/iaa", {}, {{"fileA", file_id}, {"fileB", file_b}});
      o += r.at("report").get<std::string>();
      if (!tsv) o += "disagreements: " + detail::cell(r["disagreements"]) + "\n";
    } else if (sub == adapt) {
      Json body;
      if (!mapping.empty()) {
        body = {{"annotated", detail::read_file(path)}, {"mapping", detail::read_file(mapping)}};
      } else {
        if (language.empty() || domain.empty()) return usage("adapt needs --language and --domain for plain text");
        body = {{"language", language}, {"domain", domain}, {"startSerial", start}, {"text", detail::read_file(path)}};
      }
      const auto r = session.call_json("POST", "/api/adapt", body);
      detail::write_output(out_path, r.at("file").get<std::string>(), o);
      result.err += "sentences: " + detail::cell(r["sentences"]) + ", replaced byte sequences: " +
                    detail::cell(r["replacements"]) + "\n";
    } else if (sub == lexicon) {
      if (!surface.empty()) {
        if (remove == !tag.empty()) return usage("lexicon needs either a tag or --delete for " + surface);
        const auto r = session.call_json("PUT", "/api/lexicon/" + language,
                                         {{"surface", surface}, {"tag", remove ? Json() : Json(tag)}});
        o += tsv ? detail::row({detail::cell(r["surface"]), detail::cell(r["tag"]), detail::cell(r["version"])})
                 : "version " + detail::cell(r["version"]) + ": " + detail::cell(r["surface"]) + " -> " +
                       detail::cell(r["tag"]) + "\n";
      } else if (since > 0) {
        const auto r = session.call_json("GET", "/api/lexicon/" + language, {}, {{"since", std::to_string(since)}});
        if (!tsv) o += "version " + detail::cell(r["version"]) + "\n";
        for (const auto& [s, t] : r.at("changes").items()) o += detail::row({s, detail::cell(t)});
      } else {
        const auto r = session.call_json("GET", "/api/lexicon/" + language);
        if (!tsv) o += "version " + detail::cell(r["version"]) + "\n";
        for (const auto& [s, t] : r.at("entries").items()) o += detail::row({s, detail::cell(t)});
      }
    }
  } catch (const detail::ApiFailure& f) {
    std::string code = "Error", message = f.response.body;
    try {
      const auto j = Json::parse(f.response.body).at("error");
      code = j.at("code").get<std::string>();
      message = j.at("message").get<std::string>();
    } catch (...) {
    }
    result.exit_code = 1;
    result.err += "error: " + code + ": " + message + "\n";
  } catch (const Error& e) {
    result.exit_code = 1;
    result.err += "error: " + std::string(to_string(e.code())) + ": " + e.what() + "\n";
  }
  return result;
}

}  // namespace parcorp::cli
