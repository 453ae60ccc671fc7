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

// Event store, archives, export/import, the service, the router and the CLI.

#include <gtest/gtest.h>

#include <fstream>
#include <thread>

#include "../support/fixtures.hpp"

namespace parcorp {
namespace {

using testing::Rng;
using testing::TempDir;
using testing::World;

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::filesystem::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << bytes;
}

ErrorCode open_error(const std::filesystem::path& dir) {
  try {
    EventStore store(dir);
    store.open();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "store opened";
  return ErrorCode::InvalidArgument;
}

// ---- event store ------------------------------------------------------------

TEST(EventStore, AppendAndReopen) {
  TempDir dir("store");
  {
    EventStore store(dir.path);
    EXPECT_TRUE(store.open().entries.empty());
    for (int i = 0; i < 5; ++i) store.append("k", std::to_string(i), {{"type", "X"}, {"n", i}});
    EXPECT_EQ(store.last_seq(), 5u);
  }
  EventStore store(dir.path);
  const auto contents = store.open();
  ASSERT_EQ(contents.entries.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(contents.entries[i].seq, i + 1);
    EXPECT_EQ(contents.entries[i].event.at("n"), static_cast<int>(i));
    EXPECT_EQ(contents.entries[i].entity_id, std::to_string(i));
  }
  EXPECT_EQ(store.append("k", "", {{"type", "X"}}).seq, 6u);
}

TEST(EventStore, TornTailIsDropped) {
  TempDir dir("torn");
  {
    EventStore store(dir.path);
    store.open();
    store.append("k", "", {{"type", "X"}});
    store.append("k", "", {{"type", "Y"}});
  }
  const auto log = dir.path / "events.log";
  const auto bytes = slurp(log);
  spit(log, bytes + bytes.substr(0, bytes.size() / 3));  // half-written third line
  {
    EventStore store(dir.path);
    EXPECT_EQ(store.open().entries.size(), 2u);
    store.append("k", "", {{"type", "Z"}});
  }
  EventStore store(dir.path);
  const auto contents = store.open();
  ASSERT_EQ(contents.entries.size(), 3u);
  EXPECT_EQ(contents.entries[2].event.at("type"), "Z");
}

TEST(EventStore, CorruptMiddleLineIsFatal) {
  TempDir dir("corrupt");
  {
    EventStore store(dir.path);
    store.open();
    for (int i = 0; i < 3; ++i) store.append("k", "", {{"type", "X"}});
  }
  auto bytes = slurp(dir.path / "events.log");
  bytes[bytes.find('\n') + 3] = '#';
  spit(dir.path / "events.log", bytes);
  EXPECT_EQ(open_error(dir.path), ErrorCode::StoreCorrupt);
}

TEST(EventStore, SequenceGapIsFatal) {
  TempDir dir("gap");
  {
    EventStore store(dir.path);
    store.open();
    for (int i = 0; i < 3; ++i) store.append("k", "", {{"type", "X"}});
  }
  const auto bytes = slurp(dir.path / "events.log");
  const auto first = bytes.find('\n') + 1;
  const auto second = bytes.find('\n', first) + 1;
  spit(dir.path / "events.log", bytes.substr(0, first) + bytes.substr(second));
  EXPECT_EQ(open_error(dir.path), ErrorCode::StoreCorrupt);
}

TEST(EventStore, SnapshotAheadOfLogIsFatal) {
  TempDir dir("ahead");
  {
    EventStore store(dir.path);
    store.open();
    store.append("k", "", {{"type", "X"}});
    store.write_snapshot(7, Json::object());
  }
  EXPECT_EQ(open_error(dir.path), ErrorCode::StoreCorrupt);
}

// ---- tar ----------------------------------------------------------------------

TEST(Tar, RoundTripAndDeterminism) {
  const std::vector<tar::Entry> entries = {
      {"manifest.json", "{}\n"}, {"files/F000001.ann", std::string(1000, 'x')}, {"empty", ""}, {"b", "512"}};
  const auto bytes = tar::write(entries);
  EXPECT_EQ(bytes.size() % 512, 0u);
  EXPECT_EQ(tar::read(bytes), entries);
  EXPECT_EQ(tar::write(entries), bytes);
}

TEST(Tar, RejectsDamage) {
  auto bytes = tar::write({{"a", "hello"}});
  bytes[130] ^= 1;  // inside the header, breaks the checksum
  EXPECT_THROW(tar::read(bytes), Error);
  EXPECT_THROW(tar::read("short"), Error);
}

// ---- export / import ----------------------------------------------------------

void populate(World& w) {
  Rng rng(21);
  for (int i = 0; i < 3; ++i) w.upload(testing::random_file(rng, 5, "hin", "health", 0.7));
  w.upload(testing::random_file(rng, 4, "eng", "health", 1.0));
  w.run([&](const Project& p, Timestamp t) { return p.plan_lexicon_update(w.ann_hin1, LanguageCode("hin"), "और", std::string("CC"), t); });
  w.run([&](const Project& p, Timestamp t) { return p.plan_lexicon_update(w.ann_hin1, LanguageCode("hin"), "में", std::string("PSP"), t); });
  w.run([&](const Project& p, Timestamp t) { return p.plan_lexicon_update(w.ann_hin1, LanguageCode("hin"), "में", std::nullopt, t); });
  w.run([&](const Project& p, Timestamp t) { return p.plan_load_dictionary(w.master, load_dictionary("#PAIR hin eng\nघर\thouse|home\n"), t); });
}

TEST(Export, NativeRoundTripPreservesCorpusState) {
  World source;
  populate(source);
  const auto archive = export_project(source.project, source.master, ExportFormat::Native);
  EXPECT_EQ(export_project(source.project, source.master, ExportFormat::Native), archive);

  World target;
  const auto bundle = read_import_bundle(archive, target.project.config().tagset);
  target.run([&](const Project& p, Timestamp t) { return p.plan_import(target.master, bundle, t); });

  ASSERT_EQ(target.project.files().size(), source.project.files().size());
  for (const auto& [id, f] : source.project.files()) EXPECT_EQ(target.project.file(id).file, f.file);
  for (const auto& [lang, lex] : source.project.lexicons()) {
    EXPECT_EQ(target.project.lexicons().at(lang).entries, lex.entries);
    EXPECT_EQ(target.project.lexicons().at(lang).version, lex.version);
  }
  EXPECT_EQ(target.project.dictionaries(), source.project.dictionaries());
  EXPECT_EQ(export_project(target.project, target.master, ExportFormat::Native), archive);
  // new uploads continue after the imported ids
  Rng rng(1);
  EXPECT_EQ(target.upload(testing::random_file(rng, 1, "hin", "health", 0.0)), "F000005");
}

TEST(Export, ImportNeedsEmptyProject) {
  World w;
  populate(w);
  const auto bundle = read_import_bundle(export_project(w.project, w.master, ExportFormat::Native), w.project.config().tagset);
  EXPECT_THROW(w.project.plan_import(w.master, bundle, {}), Error);
}

TEST(Export, ColumnarSharesCorpusFormat) {
  World w;
  const auto file = parse_annotated_file("#LANG hin\n#DOMAIN health\n#SID health-000001\nयह\tPRON\nघर\t_\n\n");
  w.upload(file);
  const auto entries = tar::read(export_project(w.project, w.master, ExportFormat::Columnar));
  ASSERT_EQ(entries.size(), 2u);
  EXPECT_EQ(entries[0].name, "files/F000001.ann");
  EXPECT_EQ(entries[0].content, "#LANG hin\n#DOMAIN health\n#SID health-000001\n" + unicode::nfc("यह") + "\tPRON\n" +
                                    unicode::nfc("घर") + "\t_\n\n");
  EXPECT_EQ(entries[1].name, "units.tsv");
  EXPECT_EQ(entries[1].content, "sid\tlanguages\tfiles\tmissing\nhealth-000001\thin\thin:F000001\teng\n");
}

TEST(Export, MasterOnly) {
  World w;
  for (const auto* a : {&w.admin_hin, &w.ann_hin1}) {
    try {
      export_project(w.project, *a, ExportFormat::Native);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NotAuthorized);
    }
  }
}

// ---- service ------------------------------------------------------------------

ServiceConfig service_config(const std::filesystem::path& store, std::size_t snapshot_every = 1000) {
  ServiceConfig c;
  c.store = store;
  c.project = testing::test_config();
  c.snapshot_every = snapshot_every;
  c.bootstrap_user = "root";
  c.bootstrap_password = "rootpw";
  return c;
}

Service::Clock tick_clock() {
  auto clock = std::make_shared<testing::TickClock>();
  return [clock] { return (*clock)(); };
}

TEST(Service, ConfigFromEnvironment) {
  std::map<std::string, std::string> env = {{"PARCORP_BIND", "0.0.0.0:9000"},
                                            {"PARCORP_MAX_ACTIVE", "5"},
                                            {"PARCORP_LANGUAGES", "hin,eng,ben"},
                                            {"PARCORP_OPEN_REGISTRATION", "true"}};
  const auto c = config_from_env([&](const char* k) { return env.count(k) ? env[k].c_str() : nullptr; });
  EXPECT_EQ(c.bind, "0.0.0.0:9000");
  EXPECT_EQ(c.project.max_active_assignments, 5u);
  EXPECT_EQ(c.project.languages.size(), 3u);
  EXPECT_TRUE(c.project.open_registration);
  env["PARCORP_MAX_ACTIVE"] = "x";
  EXPECT_THROW(config_from_env([&](const char* k) { return env.count(k) ? env[k].c_str() : nullptr; }), Error);
}

void drive(Service& svc) {
  const auto token = svc.login("root", "rootpw");
  const auto root = *svc.authenticate(token);
  svc.commit([&](const Project& p, Timestamp t) -> std::optional<Json> {
    return p.plan_create_user(root, {"ravi", "Ravi", Role::annotator(LanguageCode("hin")), crypto::make_verifier("pw", 1)}, t);
  });
  Rng rng(4);
  for (int i = 0; i < 4; ++i) {
    const auto f = testing::random_file(rng, 3, "hin", "health", 0.5);
    svc.commit([&](const Project& p, Timestamp t) -> std::optional<Json> { return p.plan_upload(root, f, t); });
  }
  svc.commit([&](const Project& p, Timestamp t) -> std::optional<Json> { return p.plan_assign(root, "F000002", "ravi", t); });
  svc.commit([&](const Project& p, Timestamp t) -> std::optional<Json> {
    return p.plan_lexicon_update(root, LanguageCode("hin"), "और", std::string("CC"), t);
  });
}

TEST(Service, RestartRestoresAcknowledgedState) {
  TempDir dir("svc");
  Json before;
  std::uint64_t seq = 0;
  {
    Service svc(service_config(dir.path), tick_clock());
    drive(svc);
    before = svc.read([](const Project& p) { return p.to_json(); });
    seq = svc.seq();
  }
  Service again(service_config(dir.path), tick_clock());
  EXPECT_EQ(again.seq(), seq);
  EXPECT_EQ(again.read([](const Project& p) { return p.to_json(); }), before);
  EXPECT_EQ(Service::replay_log(dir.path).to_json(), before);
}

// Salts and session tokens are random; everything else must match.
Json without_secrets(Json j) {
  for (auto& u : j.at("users")) u.erase("credential");
  for (auto& s : j.at("sessions")) s.erase("tokenHash");
  return j;
}

TEST(Service, SnapshotsDoNotChangeState) {
  TempDir plain("plain"), snap("snap");
  Json a, b;
  {
    Service svc(service_config(plain.path), tick_clock());
    drive(svc);
    a = svc.read([](const Project& p) { return p.to_json(); });
  }
  {
    Service svc(service_config(snap.path, 3), tick_clock());
    drive(svc);
    b = svc.read([](const Project& p) { return p.to_json(); });
  }
  EXPECT_EQ(without_secrets(a), without_secrets(b));
  EXPECT_TRUE(std::filesystem::exists(snap.path / "snapshot.json"));
  Service again(service_config(snap.path, 3), tick_clock());
  EXPECT_EQ(again.read([](const Project& p) { return p.to_json(); }), b);
}

TEST(Service, StoredConfigWinsOnRestart) {
  TempDir dir("cfg");
  { Service svc(service_config(dir.path), tick_clock()); }
  auto changed = service_config(dir.path);
  changed.project.max_active_assignments = 9;
  Service again(changed, tick_clock());
  EXPECT_EQ(again.config().project.max_active_assignments, 3u);
}

TEST(Service, LogoutInvalidatesToken) {
  TempDir dir("logout");
  Service svc(service_config(dir.path), tick_clock());
  const auto token = svc.login("root", "rootpw");
  EXPECT_EQ(token.size(), 64u);
  EXPECT_TRUE(svc.authenticate(token));
  svc.logout(token);
  EXPECT_FALSE(svc.authenticate(token));
  // the raw token never reaches the log
  EXPECT_EQ(slurp(dir.path / "events.log").find(token), std::string::npos);
}

// ---- router -------------------------------------------------------------------

struct Api {
  Router& router;
  std::string token;

  Response call(const std::string& method, const std::string& path, const std::string& body = {},
                std::map<std::string, std::string> query = {}) const {
    Request req{method, path, std::move(query), {}, body};
    if (!token.empty()) req.headers["authorization"] = "Bearer " + token;
    return router.handle(req);
  }

  Api as(const std::string& user, const std::string& password) const {
    const auto r = call("POST", "/api/login", dump({{"userId", user}, {"password", password}}));
    EXPECT_EQ(r.status, 200) << r.body;
    return {router, r.json().at("token").get<std::string>()};
  }
};

struct RouterWorld {
  TempDir dir{"router"};
  Service service{service_config(dir.path), tick_clock()};
  Router router{service};
  Api anon{router, {}};
  Api root = anon.as("root", "rootpw");

  void add_user(const std::string& id, const std::string& kind, const std::string& lang) {
    const auto r = root.call("POST", "/api/users",
                             dump({{"userId", id}, {"password", "pw"}, {"role", {{"kind", kind}, {"language", lang}}}}));
    ASSERT_EQ(r.status, 201) << r.body;
  }
};

TEST(Router, MissingTokenIs401Envelope) {
  RouterWorld w;
  for (const auto& path : {"/api/progress", "/api/files", "/api/notices"}) {
    const auto r = w.anon.call("GET", path);
    EXPECT_EQ(r.status, 401);
    EXPECT_EQ(r.json()["error"]["code"], "Unauthenticated");
  }
  Api bogus{w.router, "deadbeef"};
  EXPECT_EQ(bogus.call("GET", "/api/files").status, 401);
}

TEST(Router, EmptyProjectProgressIsZero) {
  RouterWorld w;
  const auto r = w.root.call("GET", "/api/progress");
  ASSERT_EQ(r.status, 200);
  const auto t = r.json()["totals"];
  EXPECT_EQ(t["filesTotal"], 0);
  EXPECT_EQ(t["sentencesTotal"], 0);
  EXPECT_EQ(t["fileFraction"], 0.0);
}

TEST(Router, AnnotationWorkflow) {
  RouterWorld w;
  w.add_user("asha", "admin", "hin");
  w.add_user("ravi", "annotator", "hin");
  const auto admin = w.anon.as("asha", "pw");
  const auto ravi = w.anon.as("ravi", "pw");

  auto r = w.root.call("POST", "/api/files", "#LANG hin\n#DOMAIN health\nhealth-000001\tयह घर है।\nhealth-000002\tऔर\n");
  ASSERT_EQ(r.status, 201) << r.body;
  EXPECT_EQ(r.json()["fileId"], "F000001");
  EXPECT_EQ(r.json()["sentences"], 2);

  EXPECT_EQ(ravi.call("POST", "/api/files", "#LANG hin\n#DOMAIN health\nhealth-000001\tx\n").status, 403);
  r = w.root.call("POST", "/api/files", "#LANG hin\n#DOMAIN health\nhealth-000001\tx\nhealth-000001\ty\n");
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.json()["error"]["code"], "ValidationFailed");

  r = admin.call("POST", "/api/assignments", dump({{"fileId", "F000001"}, {"assignee", "ravi"}}));
  ASSERT_EQ(r.status, 201) << r.body;
  const auto assignment = r.json()["assignmentId"].get<std::string>();

  r = ravi.call("PUT", "/api/lexicon/hin", dump({{"surface", "और"}, {"tag", "CC"}}));
  ASSERT_EQ(r.status, 200) << r.body;
  r = ravi.call("POST", "/api/files/F000001/auto-tag");
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.json()["applied"].size(), 1u);

  r = admin.call("GET", "/api/files/F000001/download");
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(r.json()["error"]["code"], "IncompleteFile");
  EXPECT_NE(r.body.find("1 of 2 sentences"), std::string::npos);

  for (int i = 0; i < 4; ++i) {
    r = ravi.call("PUT", "/api/files/F000001/sentences/health-000001/tokens/" + std::to_string(i) + "/tag",
                  dump({{"tag", i == 3 ? "PUNC" : "N"}}));
    ASSERT_EQ(r.status, 200) << r.body;
  }
  EXPECT_EQ(admin.call("PUT", "/api/files/F000001/sentences/health-000001/tokens/0/tag", dump({{"tag", "N"}})).status, 403);
  EXPECT_EQ(ravi.call("PUT", "/api/files/F000001/sentences/health-000001/tokens/0/tag", dump({{"tag", "ZZ"}})).status, 400);

  r = ravi.call("GET", "/api/files/F000001/download");
  EXPECT_EQ(r.status, 403);
  r = admin.call("GET", "/api/files/F000001/download");
  ASSERT_EQ(r.status, 200);
  EXPECT_NE(r.body.find("#SID health-000002"), std::string::npos);

  r = ravi.call("POST", "/api/assignments/" + assignment + "/complete");
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.json()["state"], "Completed");

  r = admin.call("GET", "/api/progress", {}, {{"scope", "language"}, {"subject", "hin"}});
  ASSERT_EQ(r.status, 200);
  EXPECT_EQ(r.json()["totals"]["filesCompleted"], 1);
  EXPECT_EQ(r.json()["totals"]["completedByAnnotator"]["ravi"], 1);
}

TEST(Router, EditReturnsNewTokens) {
  RouterWorld w;
  w.add_user("ravi", "annotator", "hin");
  const auto ravi = w.anon.as("ravi", "pw");
  w.root.call("POST", "/api/files", "#LANG hin\n#DOMAIN health\nhealth-000001\tयह घर\n");
  w.root.call("POST", "/api/assignments", dump({{"fileId", "F000001"}, {"assignee", "ravi"}}));
  ravi.call("PUT", "/api/files/F000001/sentences/health-000001/tokens/0/tag", dump({{"tag", "PRON"}}));
  auto r = ravi.call("POST", "/api/files/F000001/sentences/health-000001/edit", dump({{"text", "यह बड़ा घर"}}));
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.json()["tokens"].size(), 3u);
  r = ravi.call("POST", "/api/files/F000001/sentences/health-000001/edit", dump({{"text", "यह बड़ा घर"}}));
  EXPECT_EQ(r.status, 409);
  r = ravi.call("GET", "/api/files/F000001");
  EXPECT_EQ(r.json()["edits"].size(), 1u);
}

TEST(Router, CapExceededIs409) {
  RouterWorld w;
  w.add_user("ravi", "annotator", "hin");
  Rng rng(3);
  for (int i = 0; i < 4; ++i) {
    w.root.call("POST", "/api/files", serialize_annotated_file(testing::random_file(rng, 2, "hin", "health", 0.2)));
  }
  for (int i = 1; i <= 3; ++i) {
    EXPECT_EQ(w.root.call("POST", "/api/assignments", dump({{"fileId", "F00000" + std::to_string(i)}, {"assignee", "ravi"}})).status, 201);
  }
  const auto r = w.root.call("POST", "/api/assignments", dump({{"fileId", "F000004"}, {"assignee", "ravi"}}));
  EXPECT_EQ(r.status, 409);
  EXPECT_EQ(r.json()["error"]["code"], "CapExceeded");
}

TEST(Router, SelfRegistrationFollowsProjectSetting) {
  RouterWorld w;
  const auto body = dump({{"userId", "walkin"}, {"password", "pw"}, {"role", {{"kind", "annotator"}, {"language", "hin"}}}});
  EXPECT_EQ(w.anon.call("POST", "/api/users", body).status, 403);
}

TEST(Router, AdaptAndTranslate) {
  RouterWorld w;
  auto r = w.root.call("POST", "/api/adapt",
                       dump({{"language", "hin"}, {"domain", "tourism"}, {"startSerial", 5}, {"text", "यह घर है। वह गया।"}}));
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(r.json()["sentences"], 2);
  const auto raw = r.json()["file"].get<std::string>();
  EXPECT_NE(raw.find("tourism-000005\t"), std::string::npos);
  EXPECT_NE(raw.find("tourism-000006\t"), std::string::npos);

  r = w.root.call("POST", "/api/adapt",
                  dump({{"annotated", "#LANG eng\n#DOMAIN x\n#SID x-000001\nbig\tJJ\n\n"}, {"mapping", "#FROM penn\nNN\tN\n"}}));
  EXPECT_EQ(r.status, 422);
  EXPECT_EQ(r.json()["error"]["code"], "UnmappedTag");

  w.root.call("POST", "/api/files", "#LANG hin\n#DOMAIN health\nhealth-000001\tयह घर\n");
  EXPECT_EQ(w.root.call("GET", "/api/translate/F000001", {}, {{"pair", "hin-eng"}}).status, 404);
  EXPECT_EQ(w.root.call("PUT", "/api/dictionaries", "#PAIR hin eng\nघर\thouse|home\n").status, 200);
  r = w.root.call("GET", "/api/translate/F000001", {}, {{"pair", "hin-eng"}});
  ASSERT_EQ(r.status, 200) << r.body;
  const auto gloss = r.json()["sentences"][0]["gloss"];
  EXPECT_EQ(gloss[1]["output"], "house");
  EXPECT_EQ(gloss[0]["outOfVocabulary"], true);
}

TEST(Router, ExportImportOverHttpShape) {
  RouterWorld a;
  a.root.call("POST", "/api/files", "#LANG hin\n#DOMAIN health\nhealth-000001\tयह घर\n");
  a.root.call("PUT", "/api/dictionaries", "#PAIR hin eng\nघर\thouse\n");
  const auto archive = a.root.call("GET", "/api/export", {}, {{"format", "native"}});
  ASSERT_EQ(archive.status, 200);
  EXPECT_EQ(archive.content_type, "application/x-tar");

  RouterWorld b;
  const auto r = b.root.call("POST", "/api/import", archive.body);
  ASSERT_EQ(r.status, 200) << r.body;
  EXPECT_EQ(b.root.call("GET", "/api/export", {}, {{"format", "native"}}).body, archive.body);
}

TEST(Router, UnknownEndpointIs404) {
  RouterWorld w;
  EXPECT_EQ(w.root.call("GET", "/api/nothing").status, 404);
  EXPECT_EQ(w.root.call("GET", "/elsewhere").status, 404);
}

// ---- CLI ----------------------------------------------------------------------

struct ServerThread {
  TempDir dir{"http"};
  Service service;
  HttpServer server{service};
  int port = 0;
  std::thread thread;

  explicit ServerThread(ServiceConfig config) : service([&] {
    config.store = dir.path;
    return config;
  }()) {
    port = server.bind("127.0.0.1:0");
    thread = std::thread([this] { server.serve(); });
  }
  ~ServerThread() {
    server.stop();
    thread.join();
  }
  std::string url() const { return "http://127.0.0.1:" + std::to_string(port); }
};

struct CliEnv {
  std::map<std::string, std::string> vars = {{"PARCORP_PASSWORD", "rootpw"},
                                             {"PARCORP_NEW_PASSWORD", "pw"},
                                             {"PARCORP_BOOTSTRAP_ADMIN", "root"},
                                             {"PARCORP_BOOTSTRAP_PASSWORD", "rootpw"},
                                             {"PARCORP_LANGUAGES", "hin,eng"}};
  cli::Env env() const {
    return [this](const char* k) -> const char* {
      const auto it = vars.find(k);
      return it == vars.end() ? nullptr : it->second.c_str();
    };
  }
};

std::vector<std::string> with(std::vector<std::string> head, const std::vector<std::string>& tail) {
  head.insert(head.end(), tail.begin(), tail.end());
  return head;
}

TEST(Cli, UnknownSubcommandIsUsageError) {
  const auto r = cli::dispatch({"--store", "/nonexistent", "frobnicate"});
  EXPECT_EQ(r.exit_code, 2);
  EXPECT_NE(r.err.find("usage:"), std::string::npos);
  EXPECT_EQ(cli::dispatch({}).exit_code, 2);
}

TEST(Cli, StatsOnLocalFile) {
  TempDir dir("stats");
  spit(dir.path / "f.txt", "#LANG hin\n#DOMAIN health\nhealth-000001\tयह घर है\nhealth-000002\ta b c d e\n");
  const auto r = cli::dispatch({"stats", "--path", (dir.path / "f.txt").string()});
  EXPECT_EQ(r.exit_code, 0) << r.err;
  EXPECT_EQ(r.out, "sentences: 2\ntokens: 8\nmean tokens per sentence: 4.0\n");
}

// The same command sequence through a local store and through HTTP must
// print the same thing.
std::vector<cli::Result> scripted_session(const std::vector<std::string>& target, const CliEnv& env,
                                          const std::filesystem::path& work) {
  spit(work / "a.txt", "#LANG hin\n#DOMAIN health\nhealth-000001\tयह घर है\nhealth-000002\ta b c d e\n");
  spit(work / "text.txt", "यह घर है। वह\xc2\xa0\xc2\xa0गया।");
  const std::vector<std::vector<std::string>> steps = {
      {"users", "add", "--id", "asha", "--role", "admin", "--language", "hin"},
      {"users", "add", "--id", "ravi", "--role", "annotator", "--language", "hin"},
      {"upload", (work / "a.txt").string()},
      {"stats", "--file", "F000001"},
      {"download", "--file", "F000001"},
      {"assign", "--file", "F000001", "--to", "ravi"},
      {"assign", "--file", "F000001", "--to", "ravi"},
      {"lexicon", "hin", "और", "CC"},
      {"lexicon", "hin"},
      {"lexicon", "hin", "--since", "0"},
      {"users", "list"},
      {"--format", "tsv", "users", "list"},
      {"progress"},
      {"--format", "tsv", "progress", "--scope", "language", "--subject", "hin"},
      {"adapt", "--path", (work / "text.txt").string(), "--language", "hin", "--domain", "travel"},
      {"users", "deactivate", "--id", "ravi"},
      {"assign", "--reassign", "--file", "F000001", "--to", "ravi"},
  };
  std::vector<cli::Result> out;
  for (const auto& step : steps) out.push_back(cli::dispatch(with(with(target, {"--as", "root"}), step), env.env()));
  return out;
}

TEST(Cli, LocalAndHttpAgree) {
  CliEnv env;
  TempDir work("cli");
  const auto local = scripted_session({"--store", (work.path / "store").string()}, env, work.path);

  auto config = service_config(work.path / "unused");
  config.project.languages = {LanguageCode("hin"), LanguageCode("eng")};
  config.project.tagset = ServiceConfig{}.project.tagset;
  ServerThread server(config);
  const auto remote = scripted_session({"--server", server.url()}, env, work.path);

  ASSERT_EQ(local.size(), remote.size());
  for (std::size_t i = 0; i < local.size(); ++i) {
    EXPECT_EQ(local[i].exit_code, remote[i].exit_code) << "step " << i << ": " << local[i].err << remote[i].err;
    EXPECT_EQ(local[i].out, remote[i].out) << "step " << i;
    EXPECT_EQ(local[i].err, remote[i].err) << "step " << i;
  }

  EXPECT_EQ(local[2].out, "uploaded F000001 (hin, 2 sentences)\n");
  EXPECT_EQ(local[3].out, "sentences: 2\ntokens: 8\nmean tokens per sentence: 4.0\n");
  EXPECT_EQ(local[4].exit_code, 1);
  EXPECT_NE(local[4].err.find("IncompleteFile"), std::string::npos);
  EXPECT_NE(local[4].err.find("2 of 2 sentences not fully tagged"), std::string::npos);
  EXPECT_EQ(local[5].exit_code, 0) << local[5].err;
  EXPECT_EQ(local[6].exit_code, 1);
  EXPECT_NE(local[6].err.find("AlreadyAssigned"), std::string::npos);
  EXPECT_EQ(local[7].out, "version 1: " + unicode::nfc("और") + " -> CC\n");
  EXPECT_NE(local[14].out.find("travel-000002\t"), std::string::npos);
  EXPECT_EQ(local[16].exit_code, 1);
}

TEST(Cli, MissingCredentialsAreUsageErrors) {
  CliEnv env;
  env.vars.erase("PARCORP_PASSWORD");
  TempDir work("cred");
  EXPECT_EQ(cli::dispatch({"--store", work.path.string(), "--as", "root", "progress"}, env.env()).exit_code, 2);
  EXPECT_EQ(cli::dispatch({"--store", work.path.string(), "progress"}, env.env()).exit_code, 2);
  EXPECT_EQ(cli::dispatch({"--as", "root", "progress"}, env.env()).exit_code, 2);
}

TEST(Cli, WrongPasswordIsDomainError) {
  CliEnv env;
  env.vars["PARCORP_PASSWORD"] = "nope";
  TempDir work("badpw");
  const auto r = cli::dispatch({"--store", work.path.string(), "--as", "root", "progress"}, env.env());
  EXPECT_EQ(r.exit_code, 1);
  EXPECT_NE(r.err.find("BadCredential"), std::string::npos);
}

}  // namespace
}  // namespace parcorp
