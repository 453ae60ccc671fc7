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

#include <string>
#include <string_view>
#include <vector>

#include "parcorp/corpus/types.hpp"
#include "parcorp/util/unicode.hpp"

namespace parcorp {

/// Characters detached from word edges: . , ! ? ; : " ' ( ) and the
/// Devanagari danda / double danda.
inline bool is_edge_punctuation(UChar32 c) {
  switch (c) {
    case '.': case ',': case '!': case '?': case ';': case ':':
    case '"': case '\'': case '(': case ')':
    case 0x0964: case 0x0965:
      return true;
    default:
      return false;
  }
}

/// Whitespace split, then every maximal leading and trailing run of edge
/// punctuation becomes its own token. A field made only of punctuation stays
/// a single token. Surfaces are NFC.
inline std::vector<Token> tokenize(std::string_view text) {
  const std::string normalized = unicode::nfc(text);
  const auto cps = unicode::code_points(normalized);

  std::vector<Token> out;
  auto emit = [&](std::size_t from, std::size_t to) {
    if (from >= to) return;
    const std::size_t begin = cps[from].offset;
    const std::size_t end = cps[to - 1].offset + cps[to - 1].length;
    out.push_back({unicode::nfc(std::string_view(normalized).substr(begin, end - begin)), out.size()});
  };

  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && unicode::is_whitespace(cps[i].value)) ++i;
    std::size_t j = i;
    while (j < cps.size() && !unicode::is_whitespace(cps[j].value)) ++j;
    if (i == j) break;

    std::size_t lead = i;
    while (lead < j && is_edge_punctuation(cps[lead].value)) ++lead;
    if (lead == j) {
      emit(i, j);
    } else {
      std::size_t trail = j;
      while (trail > lead && is_edge_punctuation(cps[trail - 1].value)) --trail;
      emit(i, lead);
      emit(lead, trail);
      emit(trail, j);
    }
    i = j;
  }
  if (out.empty()) throw Error(ErrorCode::EmptyInput, "text contains no tokens");
  return out;
}

inline std::vector<AnnotatedToken> untagged(const std::vector<Token>& tokens) {
  std::vector<AnnotatedToken> out;
  out.reserve(tokens.size());
  for (const auto& t : tokens) out.push_back({t.surface, std::nullopt});
  return out;
}

inline std::string join_surfaces(const std::vector<Token>& tokens) {
  std::string out;
  for (const auto& t : tokens) {
    if (!out.empty()) out += ' ';
    out += t.surface;
  }
  return out;
}

}  // namespace parcorp
