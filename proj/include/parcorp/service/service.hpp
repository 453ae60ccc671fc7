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

// A durable project: Project state + EventStore, shared between threads.
//
// Writers hold an exclusive lock across plan -> append -> apply, so every
// mutation is on disk before anyone (including the caller) can observe it.
// Readers take a shared lock. One lock for the whole project is coarser than
// per-entity serialization but satisfies it.

#pragma once

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <utility>

#include "parcorp/admin/project.hpp"
#include "parcorp/service/event_store.hpp"

namespace parcorp {

struct ServiceConfig {
  std::string bind = "127.0.0.1:8080";
  std::filesystem::path store = "parcorp-store";
  ProjectConfig project{3, Tagset("default", {"N", "V", "ADJ", "ADV", "PRON", "PSP", "CC", "QF", "PUNC"}), {}, false};
  std::size_t snapshot_every = 1000;
  std::optional<std::string> bootstrap_user;
  std::optional<std::string> bootstrap_password;
};

/// Reads PARCORP_* keys through `lookup` (defaults to std::getenv).
///   PARCORP_BIND               host:port
///   PARCORP_STORE              store directory
///   PARCORP_MAX_ACTIVE         cap on unfinished assignments per annotator
///   PARCORP_OPEN_REGISTRATION  true|false
///   PARCORP_LANGUAGES          comma-separated language codes
///   PARCORP_TAGSET             path to a tagset file
///   PARCORP_SNAPSHOT_EVERY     events between snapshots
///   PARCORP_BOOTSTRAP_ADMIN / PARCORP_BOOTSTRAP_PASSWORD  first master admin
inline ServiceConfig config_from_env(const std::function<const char*(const char*)>& lookup = [](const char* k) {
  return static_cast<const char*>(std::getenv(k));
}) {
  ServiceConfig c;
  auto get = [&](const char* key) -> std::optional<std::string> {
    const char* v = lookup(key);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
  auto number = [](const std::string& key, const std::string& v) -> std::size_t {
    std::size_t n = 0;
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), n);
    if (ec != std::errc() || p != v.data() + v.size()) throw Error(ErrorCode::InvalidValue, key + " must be a number", v);
    return n;
  };
  if (auto v = get("PARCORP_BIND")) c.bind = *v;
  if (auto v = get("PARCORP_STORE")) c.store = *v;
  if (auto v = get("PARCORP_MAX_ACTIVE")) c.project.max_active_assignments = number("PARCORP_MAX_ACTIVE", *v);
  if (auto v = get("PARCORP_OPEN_REGISTRATION")) {
    if (*v != "true" && *v != "false") throw Error(ErrorCode::InvalidValue, "PARCORP_OPEN_REGISTRATION must be true|false");
    c.project.open_registration = *v == "true";
  }
  if (auto v = get("PARCORP_LANGUAGES")) {
    for (auto part : strings::split(*v, ',')) {
      if (!part.empty()) c.project.languages.insert(LanguageCode(std::string(part)));
    }
  }
  if (auto v = get("PARCORP_TAGSET")) {
    std::ifstream in(*v, std::ios::binary);
    if (!in) throw Error(ErrorCode::InvalidValue, "cannot read tagset file", *v);
    std::ostringstream ss;
    ss << in.rdbuf();
    c.project.tagset = parse_tagset(ss.str());
  }
  if (auto v = get("PARCORP_SNAPSHOT_EVERY")) c.snapshot_every = number("PARCORP_SNAPSHOT_EVERY", *v);
  c.bootstrap_user = get("PARCORP_BOOTSTRAP_ADMIN");
  c.bootstrap_password = get("PARCORP_BOOTSTRAP_PASSWORD");
  return c;
}

/// (kind, id) of the entity an event belongs to, for the log.
inline std::pair<std::string, std::string> event_entity(const Json& e) {
  const auto type = e.at("type").get<std::string>();
  auto str = [&](const char* key) { return e.at(key).get<std::string>(); };
  if (type == "ProjectInitialized") return {"project", ""};
  if (type == "UserCreated") return {"user", e.at("user").at("userId").get<std::string>()};
  if (type == "UserModified" || type == "UserDeactivated" || type == "SessionOpened") return {"user", str("userId")};
  if (type == "SessionClosed") return {"user", str("actor")};
  if (type == "AssignmentCreated" || type == "AssignmentReassigned" || type == "AssignmentCompleted") {
    return {"assignment", str("assignmentId")};
  }
  if (type == "FileUploaded" || type == "TagAssigned" || type == "SentenceEdited" || type == "AutoTagged") {
    return {"file", str("fileId")};
  }
  if (type == "LexiconUpdated") return {"lexicon", str("language")};
  if (type == "NoticePosted") return {"notice", str("noticeId")};
  if (type == "DictionaryLoaded") return {"dictionary", ""};
  return {"project", ""};
}

class Service {
 public:
  using Clock = std::function<Timestamp()>;

  explicit Service(ServiceConfig config, Clock clock = system_now)
      : config_(std::move(config)), clock_(std::move(clock)), store_(config_.store), project_(load()) {}

  const ServiceConfig& config() const { return config_; }

  /// Runs `f(const Project&)` under a shared lock.
  template <class F>
  decltype(auto) read(F&& f) const {
    std::shared_lock lock(mutex_);
    return f(static_cast<const Project&>(project_));
  }

  /// Plans, persists and applies one mutation. `plan(project, now)` returns
  /// the event, or nullopt for a no-op. Returns the applied event.
  template <class F>
  std::optional<Json> commit(F&& plan) {
    std::unique_lock lock(mutex_);
    std::optional<Json> event = plan(static_cast<const Project&>(project_), clock_());
    if (!event) return std::nullopt;
    persist_and_apply(*event);
    return event;
  }

  /// Opens a session; returns the bearer token. Only its hash is stored.
  std::string login(const std::string& user_id, std::string_view password) {
    const auto token = crypto::random_hex(32);
    commit([&](const Project& p, Timestamp now) -> std::optional<Json> {
      return p.plan_login(user_id, password, crypto::sha256_hex(token), now);
    });
    return token;
  }

  void logout(const std::string& token) {
    commit([&](const Project& p, Timestamp now) -> std::optional<Json> {
      return p.plan_logout(crypto::sha256_hex(token), now);
    });
  }

  std::optional<Actor> authenticate(const std::string& token) const {
    if (token.empty()) return std::nullopt;
    const auto hash = crypto::sha256_hex(token);
    return read([&](const Project& p) { return p.actor_for_token(hash); });
  }

  std::uint64_t seq() const {
    std::shared_lock lock(mutex_);
    return store_.last_seq();
  }

  void snapshot() {
    std::unique_lock lock(mutex_);
    store_.write_snapshot(store_.last_seq(), project_.to_json());
  }

  /// Rebuilds a project purely from the events in `dir`, ignoring snapshots.
  static Project replay_log(const std::filesystem::path& dir) {
    EventStore store(dir);
    auto contents = store.open();
    if (contents.entries.empty()) throw Error(ErrorCode::StoreCorrupt, "empty event log", dir.string());
    auto project = Project::from_initialized_event(contents.entries.front().event);
    for (std::size_t i = 1; i < contents.entries.size(); ++i) project.apply(contents.entries[i].event);
    return project;
  }

 private:
  Project load() {
    auto contents = store_.open();
    if (contents.entries.empty()) {
      auto init = Project::initialized_event(config_.project, clock_());
      store_.append("project", "", init);
      Project project = Project::from_initialized_event(init);
      bootstrap(project);
      return project;
    }
    std::optional<Project> project;
    std::size_t next = 1;
    if (contents.snapshot) {
      project.emplace(Project::from_json(contents.snapshot->second));
      next = contents.snapshot->first;
    } else {
      project.emplace(Project::from_initialized_event(contents.entries.front().event));
    }
    for (; next < contents.entries.size(); ++next) project->apply(contents.entries[next].event);
    // the stored configuration wins over the environment on restart
    config_.project = project->config();
    bootstrap(*project);
    return std::move(*project);
  }

  void bootstrap(Project& project) {
    if (!config_.bootstrap_user || !config_.bootstrap_password) return;
    const bool has_master = std::any_of(project.users().begin(), project.users().end(),
                                        [](const auto& kv) { return kv.second.role.is_master(); });
    if (has_master) return;
    UserAccount account{*config_.bootstrap_user, *config_.bootstrap_user, Role::master(), true,
                        crypto::make_verifier(*config_.bootstrap_password)};
    Json e = {{"type", "UserCreated"}, {"actor", ""}, {"at", format_rfc3339(clock_())}, {"user", codec::user(account, true)}};
    store_.append("user", account.user_id, e);
    project.apply(e);
  }

  void persist_and_apply(const Json& event) {
    auto [kind, id] = event_entity(event);
    store_.append(kind, id, event);
    project_.apply(event);
    if (config_.snapshot_every > 0 && store_.last_seq() % config_.snapshot_every == 0) {
      store_.write_snapshot(store_.last_seq(), project_.to_json());
    }
  }

  ServiceConfig config_;
  Clock clock_;
  EventStore store_;
  Project project_;
  mutable std::shared_mutex mutex_;
};

}  // namespace parcorp
