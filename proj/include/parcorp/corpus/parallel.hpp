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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "parcorp/corpus/types.hpp"

namespace parcorp {

struct AlignmentGap {
  SentenceId id;
  std::vector<LanguageCode> missing;

  bool operator==(const AlignmentGap&) const = default;
};

struct ParallelIndex {
  std::vector<ParallelUnit> units;  // ascending by id
  std::vector<AlignmentGap> gaps;   // ascending by id
};

/// Groups every sentence of every file by id. The languages expected for a
/// unit are all languages that occur in `files`.
inline ParallelIndex build_parallel_units(const std::vector<CorpusFile>& files) {
  if (files.empty()) throw Error(ErrorCode::InvalidArgument, "no files to align");
  std::set<LanguageCode> languages;
  std::map<SentenceId, ParallelUnit> units;
  for (const auto& file : files) {
    languages.insert(file.language);
    for (const auto& sentence : file.sentences) {
      auto it = units.try_emplace(sentence.id, ParallelUnit{sentence.id, {}}).first;
      if (!it->second.versions.emplace(file.language, sentence).second) {
        throw Error(ErrorCode::ConflictingText,
                    "sentence " + sentence.id.str() + " appears twice in language " +
                        file.language.str(),
                    sentence.id.str());
      }
    }
  }
  ParallelIndex index;
  for (auto& [id, unit] : units) {
    std::vector<LanguageCode> missing;
    for (const auto& lang : languages) {
      if (!unit.versions.count(lang)) missing.push_back(lang);
    }
    if (!missing.empty()) index.gaps.push_back({id, std::move(missing)});
    index.units.push_back(std::move(unit));
  }
  return index;
}

/// Empty files report a zero mean.
inline CorpusStats corpus_stats(const CorpusFile& file) {
  CorpusStats stats;
  stats.sentence_count = file.sentences.size();
  for (const auto& s : file.sentences) stats.token_count += s.tokens.size();
  stats.mean_tokens_per_sentence = Ratio::of(stats.token_count, stats.sentence_count);
  return stats;
}

struct AlignmentViolation {
  std::size_t source_index;
  std::size_t target_index;
  std::string reason;

  bool operator==(const AlignmentViolation&) const = default;
};

/// Every link that points outside its sentence. Partial alignments (including
/// no links at all) are valid.
inline std::vector<AlignmentViolation> validate_word_alignment(const WordAlignment& alignment,
                                                               const ParallelUnit& unit) {
  const auto src = unit.versions.find(alignment.source);
  const auto tgt = unit.versions.find(alignment.target);
  for (const auto* lang : {&alignment.source, &alignment.target}) {
    if (!unit.versions.count(*lang)) {
      throw Error(ErrorCode::MissingLanguage,
                  "unit " + unit.id.str() + " has no " + lang->str() + " version", unit.id.str());
    }
  }
  std::vector<AlignmentViolation> out;
  if (alignment.id != unit.id) {
    out.push_back({0, 0, "alignment id " + alignment.id.str() + " differs from unit " + unit.id.str()});
  }
  const auto src_len = src->second.tokens.size();
  const auto tgt_len = tgt->second.tokens.size();
  for (const auto& [i, j] : alignment.links) {
    if (i >= src_len || j >= tgt_len) {
      std::string reason;
      if (i >= src_len) reason = "source index " + std::to_string(i) + " >= " + std::to_string(src_len);
      if (j >= tgt_len) {
        if (!reason.empty()) reason += "; ";
        reason += "target index " + std::to_string(j) + " >= " + std::to_string(tgt_len);
      }
      out.push_back({i, j, std::move(reason)});
    }
  }
  return out;
}

}  // namespace parcorp
