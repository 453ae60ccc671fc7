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
#include <utility>
#include <vector>

#include "parcorp/corpus/tokenize.hpp"
#include "parcorp/corpus/types.hpp"
#include "parcorp/util/time.hpp"

namespace parcorp {

struct EditRecord {
  SentenceId id;
  std::string old_text;
  std::string new_text;
  std::string editor;
  Timestamp at;

  bool operator==(const EditRecord&) const = default;
};

/// Index pairs (old, new) of a longest common subsequence of surfaces. When
/// several exist, the one pairing the earliest old tokens is chosen.
inline std::vector<std::pair<std::size_t, std::size_t>> lcs_matches(
    const std::vector<std::string>& old_surfaces, const std::vector<std::string>& new_surfaces) {
  const std::size_t n = old_surfaces.size();
  const std::size_t m = new_surfaces.size();
  // suffix[i][j] = LCS length of old[i..] and new[j..]
  std::vector<std::vector<std::size_t>> suffix(n + 1, std::vector<std::size_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      suffix[i][j] = old_surfaces[i] == new_surfaces[j]
                         ? suffix[i + 1][j + 1] + 1
                         : std::max(suffix[i + 1][j], suffix[i][j + 1]);
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> matches;
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (old_surfaces[i] == new_surfaces[j] && suffix[i][j] == suffix[i + 1][j + 1] + 1) {
      matches.emplace_back(i++, j++);
    } else if (suffix[i][j + 1] >= suffix[i + 1][j]) {
      ++j;  // keep old[i] available
    } else {
      ++i;
    }
  }
  return matches;
}

struct EditResult {
  AnnotatedSentence sentence;
  EditRecord record;
};

/// Replaces the text of a sentence. Tags survive on tokens matched by the
/// LCS of old and new surfaces; every other new token starts untagged.
inline EditResult edit_sentence(const AnnotatedSentence& sentence, std::string_view new_text,
                                std::string editor, Timestamp at) {
  std::vector<Token> tokens;
  try {
    tokens = tokenize(new_text);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::EmptyInput) throw;
    throw Error(ErrorCode::EmptyEdit, "edited text of " + sentence.id.str() + " is empty",
                sentence.id.str());
  }
  std::vector<std::string> old_surfaces;
  std::vector<std::string> new_surfaces;
  for (const auto& t : sentence.tokens) old_surfaces.push_back(t.surface);
  for (const auto& t : tokens) new_surfaces.push_back(t.surface);
  if (old_surfaces == new_surfaces) {
    throw Error(ErrorCode::NoChange, "edit leaves " + sentence.id.str() + " unchanged", sentence.id.str());
  }

  AnnotatedSentence edited{sentence.id, untagged(tokens)};
  for (const auto& [o, n] : lcs_matches(old_surfaces, new_surfaces)) {
    edited.tokens[n].tag = sentence.tokens[o].tag;
  }
  EditRecord record{sentence.id, sentence.text(), edited.text(), std::move(editor), at};
  return {std::move(edited), std::move(record)};
}

}  // namespace parcorp
