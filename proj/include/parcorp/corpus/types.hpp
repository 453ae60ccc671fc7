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

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>
#include <vector>

#include "parcorp/error.hpp"
#include "parcorp/util/ratio.hpp"
#include "parcorp/util/unicode.hpp"

namespace parcorp {

/// Lowercase ASCII language identifier, 2..8 letters ("hin", "eng").
class LanguageCode {
 public:
  explicit LanguageCode(std::string_view code) : code_(code) {
    if (!valid(code)) {
      throw Error(ErrorCode::InvalidValue, "invalid language code '" + std::string(code) + "'");
    }
  }

  static bool valid(std::string_view code) {
    if (code.size() < 2 || code.size() > 8) return false;
    return std::all_of(code.begin(), code.end(), [](char c) { return c >= 'a' && c <= 'z'; });
  }

  const std::string& str() const noexcept { return code_; }
  auto operator<=>(const LanguageCode&) const = default;

 private:
  std::string code_;
};

/// Lowercase domain label ("health", "tourism"). Starts with a letter, then
/// letters, digits, '_' or '-'.
class DomainLabel {
 public:
  explicit DomainLabel(std::string_view label) : label_(label) {
    if (!valid(label)) {
      throw Error(ErrorCode::InvalidValue, "invalid domain label '" + std::string(label) + "'");
    }
  }

  static bool valid(std::string_view label) {
    if (label.empty() || label.size() > 64 || label[0] < 'a' || label[0] > 'z') return false;
    return std::all_of(label.begin(), label.end(), [](char c) {
      return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
    });
  }

  const std::string& str() const noexcept { return label_; }
  auto operator<=>(const DomainLabel&) const = default;

 private:
  std::string label_;
};

inline constexpr std::uint32_t kMaxSerial = 999999;

/// Sentence identity shared by every language version of one sentence.
/// Canonical text form is `<domain>-<serial:06d>`.
class SentenceId {
 public:
  SentenceId(DomainLabel domain, std::uint32_t serial) : domain_(std::move(domain)), serial_(serial) {
    if (serial < 1 || serial > kMaxSerial) {
      throw Error(ErrorCode::InvalidValue, "sentence serial out of range: " + std::to_string(serial));
    }
  }

  static SentenceId parse(std::string_view text) {
    const auto dash = text.rfind('-');
    if (dash == std::string_view::npos || text.size() - dash - 1 != 6) {
      throw Error(ErrorCode::InvalidValue, "malformed sentence id '" + std::string(text) + "'");
    }
    const auto digits = text.substr(dash + 1);
    std::uint32_t serial = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), serial);
    if (ec != std::errc{} || ptr != digits.data() + digits.size() ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) {
      throw Error(ErrorCode::InvalidValue, "malformed sentence id '" + std::string(text) + "'");
    }
    return SentenceId(DomainLabel(text.substr(0, dash)), serial);
  }

  std::string str() const {
    std::string digits = std::to_string(serial_);
    return domain_.str() + "-" + std::string(6 - digits.size(), '0') + digits;
  }

  const DomainLabel& domain() const noexcept { return domain_; }
  std::uint32_t serial() const noexcept { return serial_; }

  auto operator<=>(const SentenceId&) const = default;

 private:
  DomainLabel domain_;
  std::uint32_t serial_;
};

/// A word as produced by the tokenizer.
struct Token {
  std::string surface;
  std::size_t index = 0;

  bool operator==(const Token&) const = default;
};

/// Ordered, duplicate-free inventory of tag labels. "_" is reserved as the
/// serialized marker for "untagged" and can never be a label.
class Tagset {
 public:
  Tagset(std::string name, std::vector<std::string> labels)
      : name_(std::move(name)), labels_(std::move(labels)) {
    if (labels_.empty()) throw Error(ErrorCode::InvalidValue, "tagset '" + name_ + "' is empty");
    for (const auto& label : labels_) {
      if (!valid_label(label)) {
        throw Error(ErrorCode::InvalidValue, "invalid tag label '" + label + "'");
      }
      if (!index_.insert(label).second) {
        throw Error(ErrorCode::InvalidValue, "duplicate tag label '" + label + "'");
      }
    }
  }

  static bool valid_label(std::string_view label) {
    if (label.empty() || label == "_") return false;
    return std::all_of(label.begin(), label.end(), [](char c) {
      const auto u = static_cast<unsigned char>(c);
      return u > 0x20 && u < 0x7f;
    });
  }

  const std::string& name() const noexcept { return name_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  bool contains(std::string_view label) const { return index_.count(std::string(label)) > 0; }

  bool operator==(const Tagset& other) const {
    return name_ == other.name_ && labels_ == other.labels_;
  }

 private:
  std::string name_;
  std::vector<std::string> labels_;
  std::unordered_set<std::string> index_;
};

struct AnnotatedToken {
  std::string surface;
  std::optional<std::string> tag;

  bool tagged() const { return tag.has_value(); }
  bool operator==(const AnnotatedToken&) const = default;
};

struct AnnotatedSentence {
  SentenceId id;
  std::vector<AnnotatedToken> tokens;

  bool complete() const {
    return std::all_of(tokens.begin(), tokens.end(), [](const auto& t) { return t.tagged(); });
  }
  std::string text() const {
    std::string out;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (i) out += ' ';
      out += tokens[i].surface;
    }
    return out;
  }
  bool operator==(const AnnotatedSentence&) const = default;
};

struct CorpusFile {
  LanguageCode language;
  DomainLabel domain;
  std::vector<AnnotatedSentence> sentences;

  bool operator==(const CorpusFile&) const = default;
};

struct ParallelUnit {
  SentenceId id;
  std::map<LanguageCode, AnnotatedSentence> versions;

  bool operator==(const ParallelUnit&) const = default;
};

struct WordAlignment {
  SentenceId id;
  LanguageCode source;
  LanguageCode target;
  std::set<std::pair<std::size_t, std::size_t>> links;

  bool operator==(const WordAlignment&) const = default;
};

struct CorpusStats {
  std::uint64_t sentence_count = 0;
  std::uint64_t token_count = 0;
  Ratio mean_tokens_per_sentence;

  bool operator==(const CorpusStats&) const = default;
};

/// Every invariant violation of `file`, optionally checking tags against a
/// tagset. Empty means valid.
inline std::vector<std::string> validate(const CorpusFile& file, const Tagset* tagset = nullptr) {
  std::vector<std::string> out;
  std::optional<std::uint32_t> previous;
  std::set<std::uint32_t> seen;
  for (const auto& s : file.sentences) {
    const auto sid = s.id.str();
    if (s.id.domain() != file.domain) {
      out.push_back(sid + ": domain differs from file domain '" + file.domain.str() + "'");
    }
    if (!seen.insert(s.id.serial()).second) {
      out.push_back(sid + ": duplicate sentence id");
    } else if (previous && s.id.serial() <= *previous) {
      out.push_back(sid + ": sentence ids not strictly ascending");
    }
    previous = s.id.serial();
    if (s.tokens.empty()) out.push_back(sid + ": sentence has no tokens");
    for (std::size_t i = 0; i < s.tokens.size(); ++i) {
      const auto& tok = s.tokens[i];
      const auto where = sid + " token " + std::to_string(i);
      if (tok.surface.empty()) {
        out.push_back(where + ": empty surface");
        continue;
      }
      if (!unicode::is_valid_utf8(tok.surface)) {
        out.push_back(where + ": surface is not valid UTF-8");
        continue;
      }
      if (unicode::has_whitespace(tok.surface)) out.push_back(where + ": surface contains whitespace");
      if (!unicode::is_nfc(tok.surface)) out.push_back(where + ": surface is not NFC");
      if (tok.tag) {
        if (!Tagset::valid_label(*tok.tag)) {
          out.push_back(where + ": malformed tag '" + *tok.tag + "'");
        } else if (tagset && !tagset->contains(*tok.tag)) {
          out.push_back(where + ": tag '" + *tok.tag + "' not in tagset " + tagset->name());
        }
      }
    }
  }
  return out;
}

}  // namespace parcorp
