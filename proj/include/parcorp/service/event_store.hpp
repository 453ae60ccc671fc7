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

// On-disk store of one project: an append-only JSON-lines event log plus an
// optional snapshot.
//
//   <dir>/events.log     {"seq":N,"at":..,"actor":..,"entity":{"kind","id"},"event":{..}}
//   <dir>/snapshot.json  {"seq":N,"state":{..}}  state after applying 1..N
//
// Every append is fsync'd before it returns. A crash can leave at most a
// torn final line, which is dropped (and truncated away) on open; anything
// malformed before the last line is reported as corruption.

#pragma once

#include <fcntl.h>
#include <unistd.h>

#include <cerrno>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "parcorp/error.hpp"
#include "parcorp/util/strings.hpp"

namespace parcorp {

struct EventLogEntry {
  std::uint64_t seq = 0;
  std::string at;
  std::string actor;
  std::string entity_kind;
  std::string entity_id;
  nlohmann::json event;
};

struct StoreContents {
  std::optional<std::pair<std::uint64_t, nlohmann::json>> snapshot;
  std::vector<EventLogEntry> entries;  // every log entry, seq 1..N
};

class EventStore {
 public:
  explicit EventStore(std::filesystem::path dir) : dir_(std::move(dir)) {}

  EventStore(const EventStore&) = delete;
  EventStore& operator=(const EventStore&) = delete;
  ~EventStore() {
    if (fd_ >= 0) ::close(fd_);
  }

  const std::filesystem::path& dir() const { return dir_; }
  std::filesystem::path log_path() const { return dir_ / "events.log"; }
  std::filesystem::path snapshot_path() const { return dir_ / "snapshot.json"; }

  /// Reads what is on disk and opens the log for appending.
  StoreContents open() {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw Error(ErrorCode::StoreUnavailable, "cannot create store directory: " + ec.message(), dir_.string());

    StoreContents contents;
    contents.entries = read_log();
    last_seq_ = contents.entries.empty() ? 0 : contents.entries.back().seq;

    if (std::filesystem::exists(snapshot_path())) {
      const auto text = read_file(snapshot_path());
      try {
        auto j = nlohmann::json::parse(text);
        contents.snapshot = std::make_pair(j.at("seq").get<std::uint64_t>(), std::move(j.at("state")));
      } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::StoreCorrupt, std::string("unreadable snapshot: ") + e.what(), snapshot_path().string());
      }
      if (contents.snapshot->first > last_seq_) {
        throw Error(ErrorCode::StoreCorrupt, "snapshot is ahead of the event log", snapshot_path().string());
      }
    }

    fd_ = ::open(log_path().c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
    if (fd_ < 0) throw Error(ErrorCode::StoreUnavailable, std::string("cannot open log: ") + std::strerror(errno));
    return contents;
  }

  std::uint64_t last_seq() const { return last_seq_; }

  /// Appends with seq = last_seq() + 1 and returns once the line is on disk.
  EventLogEntry append(std::string entity_kind, std::string entity_id, nlohmann::json event) {
    if (fd_ < 0) throw Error(ErrorCode::StoreUnavailable, "store is not open");
    EventLogEntry entry{last_seq_ + 1,
                        event.value("at", std::string()),
                        event.value("actor", std::string()),
                        std::move(entity_kind),
                        std::move(entity_id),
                        std::move(event)};
    const std::string line = encode(entry) + "\n";
    std::size_t written = 0;
    while (written < line.size()) {
      const auto n = ::write(fd_, line.data() + written, line.size() - written);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw Error(ErrorCode::StoreUnavailable, std::string("log write failed: ") + std::strerror(errno));
      }
      written += static_cast<std::size_t>(n);
    }
    if (::fsync(fd_) != 0) throw Error(ErrorCode::StoreUnavailable, std::string("fsync failed: ") + std::strerror(errno));
    last_seq_ = entry.seq;
    return entry;
  }

  /// Atomically replaces the snapshot (write temp, fsync, rename).
  void write_snapshot(std::uint64_t seq, const nlohmann::json& state) {
    const auto tmp = dir_ / "snapshot.json.tmp";
    const std::string text = nlohmann::json{{"seq", seq}, {"state", state}}.dump() + "\n";
    const int fd = ::open(tmp.c_str(), O_WRONLY | O_CREAT | O_TRUNC | O_CLOEXEC, 0644);
    if (fd < 0) throw Error(ErrorCode::StoreUnavailable, "cannot write snapshot");
    const bool ok = ::write(fd, text.data(), text.size()) == static_cast<ssize_t>(text.size()) && ::fsync(fd) == 0;
    ::close(fd);
    if (!ok) throw Error(ErrorCode::StoreUnavailable, "snapshot write failed");
    std::filesystem::rename(tmp, snapshot_path());
    sync_dir();
  }

  static std::string encode(const EventLogEntry& e) {
    return nlohmann::json{{"seq", e.seq},
                          {"at", e.at},
                          {"actor", e.actor},
                          {"entity", {{"kind", e.entity_kind}, {"id", e.entity_id}}},
                          {"event", e.event}}
        .dump();
  }

 private:
  static std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::StoreUnavailable, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::vector<EventLogEntry> read_log() {
    std::vector<EventLogEntry> entries;
    if (!std::filesystem::exists(log_path())) return entries;
    const auto text = read_file(log_path());
    std::size_t good_bytes = 0;
    std::size_t pos = 0;
    while (pos < text.size()) {
      const auto nl = text.find('\n', pos);
      const bool last = nl == std::string::npos || nl + 1 == text.size();
      const std::string_view line(text.data() + pos, (nl == std::string::npos ? text.size() : nl) - pos);
      std::optional<EventLogEntry> parsed;
      if (nl != std::string::npos) parsed = decode(line);
      if (!parsed) {
        if (last) break;  // torn tail
        throw Error(ErrorCode::StoreCorrupt, "malformed log line after seq " + std::to_string(entries.size()),
                    log_path().string());
      }
      if (parsed->seq != entries.size() + 1) {
        throw Error(ErrorCode::StoreCorrupt, "log seq gap at " + std::to_string(parsed->seq), log_path().string());
      }
      entries.push_back(std::move(*parsed));
      pos = nl + 1;
      good_bytes = pos;
    }
    if (good_bytes != text.size()) {
      std::filesystem::resize_file(log_path(), good_bytes);
    }
    return entries;
  }

  static std::optional<EventLogEntry> decode(std::string_view line) {
    try {
      const auto j = nlohmann::json::parse(line);
      return EventLogEntry{j.at("seq").get<std::uint64_t>(),
                           j.at("at").get<std::string>(),
                           j.at("actor").get<std::string>(),
                           j.at("entity").at("kind").get<std::string>(),
                           j.at("entity").at("id").get<std::string>(),
                           j.at("event")};
    } catch (const nlohmann::json::exception&) {
      return std::nullopt;
    }
  }

  void sync_dir() const {
    const int fd = ::open(dir_.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
    if (fd >= 0) {
      ::fsync(fd);
      ::close(fd);
    }
  }

  std::filesystem::path dir_;
  int fd_ = -1;
  std::uint64_t last_seq_ = 0;
};

}  // namespace parcorp
