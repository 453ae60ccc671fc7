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

#include <chrono>
#include <filesystem>
#include <string>
#include <vector>
#include <unistd.h>

#include "parcorp/parcorp.hpp"
#include "synthetic.hpp"

namespace parcorp::testing {

/// Deterministic clock: one second per call.
struct TickClock {
  Timestamp t = parse_rfc3339("2026-03-01T08:00:00Z");
  Timestamp operator()() { return t += std::chrono::seconds(1); }
};

inline ProjectConfig test_config(std::size_t cap = 3, bool open = false) {
  return ProjectConfig{cap, test_tagset(), {LanguageCode("hin"), LanguageCode("eng")}, open};
}

/// A project with a master, per-language admins and annotators. Verifiers
/// use a single PBKDF2 round to keep tests fast.
struct World {
  Project project;
  TickClock clock;
  Actor master{"root", Role::master()};
  Actor admin_hin{"asha", Role::admin(LanguageCode("hin"))};
  Actor admin_eng{"emma", Role::admin(LanguageCode("eng"))};
  Actor ann_hin1{"ravi", Role::annotator(LanguageCode("hin"))};
  Actor ann_hin2{"sita", Role::annotator(LanguageCode("hin"))};
  Actor ann_eng{"tom", Role::annotator(LanguageCode("eng"))};
  std::vector<Json> log;  // every applied event, in order

  explicit World(ProjectConfig config = test_config()) : project(config) {
    log.push_back({{"type", "UserCreated"}, {"actor", ""}, {"at", format_rfc3339(clock())},
                   {"user", codec::user({master.user_id, "Root", master.role, true, crypto::make_verifier("pw", 1)}, true)}});
    project.apply(log.back());
    for (const auto* a : {&admin_hin, &admin_eng, &ann_hin1, &ann_hin2, &ann_eng}) add_user(*a);
  }

  void add_user(const Actor& a) {
    run([&](const Project& p, Timestamp now) {
      return p.plan_create_user(master, {a.user_id, a.user_id, a.role, crypto::make_verifier("pw", 1)}, now);
    });
  }

  template <class F>
  Json run(F&& plan) {
    Json e = plan(static_cast<const Project&>(project), clock());
    project.apply(e);
    log.push_back(e);
    return e;
  }

  std::string upload(const CorpusFile& f) {
    return run([&](const Project& p, Timestamp now) { return p.plan_upload(master, f, now); })
        .at("fileId")
        .get<std::string>();
  }

  std::string assign(const Actor& by, const std::string& file, const std::string& to) {
    return run([&](const Project& p, Timestamp now) { return p.plan_assign(by, file, to, now); })
        .at("assignmentId")
        .get<std::string>();
  }
};

/// Fresh directory under the system temp dir, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  explicit TempDir(const std::string& tag = "t") {
    static int counter = 0;
    path = std::filesystem::temp_directory_path() /
           ("parcorp-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(++counter));
    std::filesystem::remove_all(path);
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

}  // namespace parcorp::testing
