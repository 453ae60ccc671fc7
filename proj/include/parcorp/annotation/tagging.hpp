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

#include <cstddef>
#include <string>
#include <utility>

#include "parcorp/annotation/lexicon.hpp"
#include "parcorp/corpus/types.hpp"
#include "parcorp/util/ratio.hpp"

namespace parcorp {

/// Sets the tag of one token. Only labels from `tagset` are accepted.
inline AnnotatedSentence assign_tag(const AnnotatedSentence& sentence, std::size_t index,
                                    const std::string& tag, const Tagset& tagset) {
  if (index >= sentence.tokens.size()) {
    throw Error(ErrorCode::IndexOutOfRange,
                "token " + std::to_string(index) + " out of range for " + sentence.id.str() + " (" +
                    std::to_string(sentence.tokens.size()) + " tokens)",
                sentence.id.str());
  }
  if (!tagset.contains(tag)) {
    throw Error(ErrorCode::TagNotInTagset, "tag '" + tag + "' is not in tagset " + tagset.name(), tag);
  }
  AnnotatedSentence out = sentence;
  out.tokens[index].tag = tag;
  return out;
}

struct AutoTagResult {
  AnnotatedSentence sentence;
  std::size_t applied = 0;
};

/// Tags every untagged token whose surface is a lexicon key. Existing tags
/// are never touched, which makes the operation idempotent.
inline AutoTagResult auto_tag(const AnnotatedSentence& sentence, const ClosedClassLexicon& lexicon) {
  AutoTagResult result{sentence, 0};
  for (auto& token : result.sentence.tokens) {
    if (token.tagged()) continue;
    const auto hit = lexicon.entries.find(token.surface);
    if (hit == lexicon.entries.end()) continue;
    token.tag = hit->second;
    ++result.applied;
  }
  return result;
}

struct AutoTagFileResult {
  CorpusFile file;
  std::size_t applied = 0;
};

inline AutoTagFileResult auto_tag(const CorpusFile& file, const ClosedClassLexicon& lexicon) {
  if (file.language != lexicon.language) {
    throw Error(ErrorCode::LanguageMismatch, "lexicon is for " + lexicon.language.str() +
                                                 " but file is " + file.language.str());
  }
  AutoTagFileResult result{file, 0};
  for (auto& sentence : result.file.sentences) {
    auto r = auto_tag(sentence, lexicon);
    result.applied += r.applied;
    sentence = std::move(r.sentence);
  }
  return result;
}

struct CompletionStatus {
  std::size_t complete = 0;
  std::size_t total = 0;
  Ratio fraction;

  std::size_t remaining() const { return total - complete; }
  bool operator==(const CompletionStatus&) const = default;
};

/// A sentence counts only when every one of its tokens is tagged.
inline CompletionStatus completion_status(const CorpusFile& file) {
  CompletionStatus status;
  status.total = file.sentences.size();
  for (const auto& s : file.sentences) {
    if (s.complete()) ++status.complete;
  }
  status.fraction = Ratio::of(status.complete, status.total);
  return status;
}

/// Gate used by completion and download: fraction exactly 1. An empty file
/// reports fraction 0 and never passes.
inline bool fully_tagged(const CorpusFile& file) { return completion_status(file).fraction.is_one(); }

}  // namespace parcorp
