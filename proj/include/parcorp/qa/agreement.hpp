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

// Diff, majority merge and pairwise agreement between annotators who tagged
// the same underlying text.

#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "parcorp/corpus/types.hpp"
#include "parcorp/util/strings.hpp"

namespace parcorp {

struct AnnotationVersion {
  std::string file_id;
  std::string annotator;
  CorpusFile file;
};

using TagVote = std::optional<std::string>;

/// One token position where versions differ. `votes` keeps version order so
/// two versions by the same annotator stay distinguishable.
struct Disagreement {
  SentenceId id;
  std::size_t index = 0;
  std::vector<std::pair<std::string, TagVote>> votes;

  bool operator==(const Disagreement&) const = default;
};

namespace detail {

inline void require_same_text(const CorpusFile& a, const CorpusFile& b) {
  if (a.sentences.size() != b.sentences.size()) {
    throw Error(ErrorCode::TextMismatch, "versions have different sentence counts");
  }
  for (std::size_t s = 0; s < a.sentences.size(); ++s) {
    const auto& x = a.sentences[s];
    const auto& y = b.sentences[s];
    if (x.id != y.id) throw Error(ErrorCode::TextMismatch, "sentence ids differ: " + x.id.str() + " vs " + y.id.str(), x.id.str());
    bool same = x.tokens.size() == y.tokens.size();
    for (std::size_t i = 0; same && i < x.tokens.size(); ++i) same = x.tokens[i].surface == y.tokens[i].surface;
    if (!same) throw Error(ErrorCode::TextMismatch, "text of " + x.id.str() + " differs between versions", x.id.str());
  }
}

}  // namespace detail

/// Positions whose tags differ, ordered by (sentence, index). Untagged is a
/// value of its own.
inline std::vector<Disagreement> diff_annotations(const AnnotationVersion& a, const AnnotationVersion& b) {
  detail::require_same_text(a.file, b.file);
  std::vector<Disagreement> out;
  for (std::size_t s = 0; s < a.file.sentences.size(); ++s) {
    const auto& x = a.file.sentences[s];
    const auto& y = b.file.sentences[s];
    for (std::size_t i = 0; i < x.tokens.size(); ++i) {
      if (x.tokens[i].tag != y.tokens[i].tag) {
        out.push_back({x.id, i, {{a.annotator, x.tokens[i].tag}, {b.annotator, y.tokens[i].tag}}});
      }
    }
  }
  return out;
}

struct MergeResult {
  CorpusFile gold;
  std::vector<Disagreement> adjudication;
};

/// Per position, a tag wins only with a strict majority of all versions
/// (untagged votes count toward the total). Positions without a winner stay
/// untagged; those where versions disagree are queued for adjudication.
/// Positions no version tagged are left untagged and are not queued.
inline MergeResult merge_gold(const std::vector<AnnotationVersion>& versions) {
  if (versions.size() < 2) throw Error(ErrorCode::InvalidArgument, "merging needs at least two versions");
  for (std::size_t v = 1; v < versions.size(); ++v) detail::require_same_text(versions[0].file, versions[v].file);

  MergeResult result{versions[0].file, {}};
  const std::size_t n = versions.size();
  for (std::size_t s = 0; s < result.gold.sentences.size(); ++s) {
    auto& sentence = result.gold.sentences[s];
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      std::map<std::string, std::size_t> counts;
      bool unanimous = true;
      const auto& first = versions[0].file.sentences[s].tokens[i].tag;
      for (const auto& v : versions) {
        const auto& tag = v.file.sentences[s].tokens[i].tag;
        if (tag) ++counts[*tag];
        if (tag != first) unanimous = false;
      }
      sentence.tokens[i].tag.reset();
      for (const auto& [tag, count] : counts) {
        if (2 * count > n) sentence.tokens[i].tag = tag;
      }
      if (!sentence.tokens[i].tag && !unanimous) {
        Disagreement d{sentence.id, i, {}};
        for (const auto& v : versions) d.votes.emplace_back(v.annotator, v.file.sentences[s].tokens[i].tag);
        result.adjudication.push_back(std::move(d));
      }
    }
  }
  return result;
}

/// Agreement over positions both annotators tagged. `value` is 1 when there
/// are none (vacuous); callers should look at `joint`.
struct ObservedAgreement {
  double value = 1.0;
  std::uint64_t matches = 0;
  std::uint64_t joint = 0;
};

inline ObservedAgreement observed_agreement(const AnnotationVersion& a, const AnnotationVersion& b) {
  detail::require_same_text(a.file, b.file);
  ObservedAgreement result;
  for (std::size_t s = 0; s < a.file.sentences.size(); ++s) {
    const auto& x = a.file.sentences[s].tokens;
    const auto& y = b.file.sentences[s].tokens;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!x[i].tag || !y[i].tag) continue;
      ++result.joint;
      if (*x[i].tag == *y[i].tag) ++result.matches;
    }
  }
  if (result.joint > 0) result.value = static_cast<double>(result.matches) / static_cast<double>(result.joint);
  return result;
}

struct KappaResult {
  double observed = 0;  // p_o
  double expected = 0;  // p_e
  double kappa = 0;
  std::uint64_t joint = 0;
};

/// Cohen's kappa over jointly tagged positions:
///   kappa = (p_o - p_e) / (1 - p_e),  p_e = sum_t p_a(t) p_b(t).
/// Computed from integer counts, (n*m - S) / (n^2 - S) with S = sum_t a_t b_t,
/// so perfect agreement gives exactly 1. The single-tag table (p_e = 1) is
/// defined as 1.
inline KappaResult cohen_kappa(const AnnotationVersion& a, const AnnotationVersion& b) {
  detail::require_same_text(a.file, b.file);
  std::map<std::string, std::uint64_t> marginal_a, marginal_b;
  std::uint64_t n = 0, m = 0;
  for (std::size_t s = 0; s < a.file.sentences.size(); ++s) {
    const auto& x = a.file.sentences[s].tokens;
    const auto& y = b.file.sentences[s].tokens;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!x[i].tag || !y[i].tag) continue;
      ++n;
      if (*x[i].tag == *y[i].tag) ++m;
      ++marginal_a[*x[i].tag];
      ++marginal_b[*y[i].tag];
    }
  }
  if (n == 0) throw Error(ErrorCode::NoJointPositions, "no token is tagged by both annotators");

  long double chance = 0;  // S
  for (const auto& [tag, count] : marginal_a) {
    const auto hit = marginal_b.find(tag);
    if (hit != marginal_b.end()) chance += static_cast<long double>(count) * static_cast<long double>(hit->second);
  }
  const long double nn = static_cast<long double>(n) * static_cast<long double>(n);
  KappaResult r;
  r.joint = n;
  r.observed = static_cast<double>(static_cast<long double>(m) / static_cast<long double>(n));
  r.expected = static_cast<double>(chance / nn);
  if (chance == nn) {
    r.kappa = 1.0;
  } else {
    r.kappa = static_cast<double>((static_cast<long double>(m) * static_cast<long double>(n) - chance) / (nn - chance));
  }
  return r;
}

/// Tab-separated agreement table, one row per annotator pair, four decimals.
/// Undefined kappa (no joint positions) is printed as NA.
inline std::string agreement_report(const std::vector<std::pair<AnnotationVersion, AnnotationVersion>>& pairs) {
  std::string out = "file\tannotator_a\tannotator_b\tjoint\tp_o\tp_e\tkappa\n";
  for (const auto& [a, b] : pairs) {
    const auto observed = observed_agreement(a, b);
    out += a.file_id + (a.file_id == b.file_id ? "" : "," + b.file_id) + "\t" + a.annotator + "\t" + b.annotator +
           "\t" + std::to_string(observed.joint) + "\t";
    if (observed.joint == 0) {
      out += strings::fixed(observed.value, 4) + "\tNA\tNA\n";
      continue;
    }
    const auto k = cohen_kappa(a, b);
    out += strings::fixed(k.observed, 4) + "\t" + strings::fixed(k.expected, 4) + "\t" + strings::fixed(k.kappa, 4) + "\n";
  }
  return out;
}

}  // namespace parcorp
