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

// Word-for-word gloss through a bilingual dictionary. This is a drafting aid
// for translators, not machine translation: no reordering, no morphology.

#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "parcorp/corpus/format.hpp"
#include "parcorp/corpus/types.hpp"

namespace parcorp {

struct BilingualDictionary {
  LanguageCode source;
  LanguageCode target;
  std::map<std::string, std::vector<std::string>> entries;

  bool operator==(const BilingualDictionary&) const = default;
};

/// `#PAIR <src> <tgt>` then `<source>\t<cand1>|<cand2>|...` lines. Repeated
/// source keys are merged, keeping first-seen candidate order without
/// duplicates.
inline BilingualDictionary load_dictionary(std::string_view bytes) {
  detail::require_utf8(bytes);
  const auto lines = strings::lines(bytes);
  if (lines.empty()) throw Error(ErrorCode::FormatError, "missing #PAIR header");
  const auto pair = strings::split(detail::header_value(lines[0], "PAIR", 1), ' ');
  if (pair.size() != 2 || !LanguageCode::valid(pair[0]) || !LanguageCode::valid(pair[1]) ||
      pair[0] == pair[1]) {
    throw Error::at_line(ErrorCode::FormatError, 1, "expected '#PAIR <src> <tgt>' with distinct languages");
  }
  BilingualDictionary dict{LanguageCode(pair[0]), LanguageCode(pair[1]), {}};
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    const auto fields = strings::split(lines[i], '\t');
    if (fields.size() != 2 || fields[0].empty() || fields[1].empty()) {
      throw Error::at_line(ErrorCode::FormatError, lineno, "expected '<source>\\t<candidates>'");
    }
    auto& candidates = dict.entries[unicode::nfc(fields[0])];
    for (const auto c : strings::split(fields[1], '|')) {
      if (c.empty()) throw Error::at_line(ErrorCode::FormatError, lineno, "empty translation candidate");
      std::string candidate = unicode::nfc(c);
      if (std::find(candidates.begin(), candidates.end(), candidate) == candidates.end()) {
        candidates.push_back(std::move(candidate));
      }
    }
  }
  return dict;
}

inline std::string serialize_dictionary(const BilingualDictionary& dict) {
  std::string out = "#PAIR " + dict.source.str() + " " + dict.target.str() + "\n";
  for (const auto& [source, candidates] : dict.entries) {
    out += source + "\t" + strings::join(candidates, "|") + "\n";
  }
  return out;
}

struct GlossToken {
  std::string source;
  std::string output;
  bool out_of_vocabulary = false;

  bool operator==(const GlossToken&) const = default;
};

/// First candidate per token; unknown words pass through and are flagged.
inline std::vector<GlossToken> rough_translate(const AnnotatedSentence& sentence,
                                               const LanguageCode& sentence_language,
                                               const BilingualDictionary& dict) {
  if (sentence_language != dict.source) {
    throw Error(ErrorCode::LanguageMismatch, "dictionary translates from " + dict.source.str() +
                                                 ", sentence is " + sentence_language.str());
  }
  std::vector<GlossToken> gloss;
  gloss.reserve(sentence.tokens.size());
  for (const auto& token : sentence.tokens) {
    const auto hit = dict.entries.find(token.surface);
    if (hit == dict.entries.end()) {
      gloss.push_back({token.surface, token.surface, true});
    } else {
      gloss.push_back({token.surface, hit->second.front(), false});
    }
  }
  return gloss;
}

}  // namespace parcorp
