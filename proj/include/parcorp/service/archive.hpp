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

// Minimal ustar writer/reader for export archives. Regular files only, with
// fixed mode/owner/mtime so equal inputs give equal bytes. Readable by tar(1).

#pragma once

#include <cstdio>
#include <cstring>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parcorp/error.hpp"

namespace parcorp::tar {

struct Entry {
  std::string name;
  std::string content;

  bool operator==(const Entry&) const = default;
};

namespace detail {

inline void put_octal(char* field, std::size_t width, std::uint64_t value) {
  std::snprintf(field, width, "%0*llo", static_cast<int>(width - 1), static_cast<unsigned long long>(value));
}

inline std::uint64_t get_octal(const char* field, std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width && field[i]; ++i) {
    if (field[i] == ' ') continue;
    if (field[i] < '0' || field[i] > '7') throw Error(ErrorCode::FormatError, "bad octal field in archive");
    v = v * 8 + static_cast<std::uint64_t>(field[i] - '0');
  }
  return v;
}

}  // namespace detail

inline std::string write(const std::vector<Entry>& entries) {
  std::string out;
  for (const auto& e : entries) {
    if (e.name.empty() || e.name.size() > 99) throw Error(ErrorCode::InvalidArgument, "archive name length", e.name);
    char h[512];
    std::memset(h, 0, sizeof h);
    std::memcpy(h, e.name.data(), e.name.size());
    detail::put_octal(h + 100, 8, 0644);
    detail::put_octal(h + 108, 8, 0);
    detail::put_octal(h + 116, 8, 0);
    detail::put_octal(h + 124, 12, e.content.size());
    detail::put_octal(h + 136, 12, 0);
    std::memset(h + 148, ' ', 8);
    h[156] = '0';
    std::memcpy(h + 257, "ustar", 6);
    std::memcpy(h + 263, "00", 2);
    unsigned sum = 0;
    for (unsigned char c : h) sum += c;
    std::snprintf(h + 148, 8, "%06o", sum);
    out.append(h, sizeof h);
    out += e.content;
    out.append((512 - e.content.size() % 512) % 512, '\0');
  }
  out.append(1024, '\0');
  return out;
}

inline std::vector<Entry> read(std::string_view bytes) {
  std::vector<Entry> entries;
  std::size_t pos = 0;
  while (pos + 512 <= bytes.size()) {
    const char* h = bytes.data() + pos;
    if (h[0] == '\0') break;
    unsigned sum = 0;
    for (std::size_t i = 0; i < 512; ++i) sum += (i >= 148 && i < 156) ? ' ' : static_cast<unsigned char>(h[i]);
    if (sum != detail::get_octal(h + 148, 8)) throw Error(ErrorCode::FormatError, "archive header checksum mismatch");
    const auto size = detail::get_octal(h + 124, 12);
    std::string name(h, strnlen(h, 100));
    pos += 512;
    if (pos + size > bytes.size()) throw Error(ErrorCode::FormatError, "truncated archive", name);
    if (h[156] == '0' || h[156] == '\0') entries.push_back({std::move(name), std::string(bytes.substr(pos, size))});
    pos += (size + 511) / 512 * 512;
  }
  if (entries.empty() && !bytes.empty() && bytes.find_first_not_of('\0') != std::string_view::npos &&
      bytes.size() < 512) {
    throw Error(ErrorCode::FormatError, "not an archive");
  }
  return entries;
}

}  // namespace parcorp::tar
