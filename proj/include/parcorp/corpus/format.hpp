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

// Line-oriented UTF-8 formats, LF line endings, no trailing whitespace.
//
// Raw file:
//   #LANG <code>
//   #DOMAIN <label>
//   <sentence-id>\t<text>            one per sentence
//
// Annotated file:
//   #LANG <code>
//   #DOMAIN <label>
//   #SID <sentence-id>
//   <surface>\t<tag or _>            one per token
//   <blank line>                     after every sentence
//
// Alignment file (records may repeat):
//   #SID <sentence-id>
//   #PAIR <src> <tgt>
//   <i>\t<j>                         one per link
//
// Tagset file:
//   #TAGSET <name>
//   <label>                          one per line, palette order

#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "parcorp/corpus/tokenize.hpp"
#include "parcorp/corpus/types.hpp"
#include "parcorp/util/strings.hpp"

namespace parcorp {

inline constexpr std::string_view kUntaggedMarker = "_";

namespace detail {

inline void require_utf8(std::string_view bytes) {
  if (!unicode::is_valid_utf8(bytes)) throw Error(ErrorCode::FormatError, "input is not valid UTF-8");
}

inline std::string_view header_value(std::string_view line, std::string_view key, std::size_t lineno) {
  const std::string prefix = "#" + std::string(key) + " ";
  if (!strings::starts_with(line, prefix) || line.size() == prefix.size()) {
    throw Error::at_line(ErrorCode::FormatError, lineno, "expected '" + prefix + "<value>'");
  }
  return line.substr(prefix.size());
}

template <typename T>
T parse_header_value(std::string_view line, std::string_view key, std::size_t lineno) {
  const auto value = header_value(line, key, lineno);
  try {
    return T(value);
  } catch (const Error& e) {
    throw Error::at_line(ErrorCode::FormatError, lineno, e.what());
  }
}

inline SentenceId parse_sid(std::string_view text, std::size_t lineno) {
  try {
    return SentenceId::parse(text);
  } catch (const Error& e) {
    throw Error::at_line(ErrorCode::FormatError, lineno, e.what());
  }
}

inline void check_order(const CorpusFile& file, const SentenceId& id, std::set<std::uint32_t>& seen,
                        std::size_t lineno) {
  if (id.domain() != file.domain) {
    throw Error(ErrorCode::IdDomainMismatch,
                "line " + std::to_string(lineno) + ": sentence " + id.str() +
                    " does not belong to domain " + file.domain.str(),
                id.str());
  }
  if (!seen.insert(id.serial()).second) {
    throw Error(ErrorCode::DuplicateId,
                "line " + std::to_string(lineno) + ": duplicate sentence id " + id.str(), id.str());
  }
  if (!file.sentences.empty() && file.sentences.back().id.serial() >= id.serial()) {
    throw Error::at_line(ErrorCode::FormatError, lineno,
                         "sentence ids must be strictly ascending at " + id.str());
  }
}

inline std::size_t parse_index(std::string_view text, std::size_t lineno) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size()) {
    throw Error::at_line(ErrorCode::FormatError, lineno, "expected a token index, got '" +
                                                             std::string(text) + "'");
  }
  return value;
}

}  // namespace detail

inline CorpusFile parse_raw_file(std::string_view bytes) {
  detail::require_utf8(bytes);
  const auto lines = strings::lines(bytes);
  if (lines.size() < 2) throw Error(ErrorCode::FormatError, "missing #LANG/#DOMAIN header");
  CorpusFile file{detail::parse_header_value<LanguageCode>(lines[0], "LANG", 1),
                  detail::parse_header_value<DomainLabel>(lines[1], "DOMAIN", 2),
                  {}};
  std::set<std::uint32_t> seen;
  for (std::size_t i = 2; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    const auto fields = strings::split(lines[i], '\t');
    if (fields.size() != 2) {
      throw Error::at_line(ErrorCode::FormatError, lineno, "expected '<id>\\t<text>'");
    }
    auto id = detail::parse_sid(fields[0], lineno);
    detail::check_order(file, id, seen, lineno);
    std::vector<Token> tokens;
    try {
      tokens = tokenize(fields[1]);
    } catch (const Error& e) {
      throw Error::at_line(ErrorCode::FormatError, lineno, e.what());
    }
    file.sentences.push_back({std::move(id), untagged(tokens)});
  }
  return file;
}

/// Raw form of a file: tags are dropped, surfaces joined by single spaces.
inline std::string serialize_raw_file(const CorpusFile& file) {
  std::string out = "#LANG " + file.language.str() + "\n#DOMAIN " + file.domain.str() + "\n";
  for (const auto& s : file.sentences) out += s.id.str() + "\t" + s.text() + "\n";
  return out;
}

inline std::string serialize_annotated_file(const CorpusFile& file) {
  std::string out = "#LANG " + file.language.str() + "\n#DOMAIN " + file.domain.str() + "\n";
  for (const auto& s : file.sentences) {
    out += "#SID " + s.id.str() + "\n";
    for (const auto& t : s.tokens) {
      out += t.surface;
      out += '\t';
      out += t.tag ? std::string_view(*t.tag) : kUntaggedMarker;
      out += '\n';
    }
    out += '\n';
  }
  return out;
}

/// Inverse of serialize_annotated_file. With a tagset, every tag must belong
/// to it (UnknownTag otherwise).
inline CorpusFile parse_annotated_file(std::string_view bytes, const Tagset* tagset = nullptr) {
  detail::require_utf8(bytes);
  if (!bytes.empty() && bytes.back() != '\n') {
    throw Error(ErrorCode::FormatError, "file must end with a newline");
  }
  const auto lines = strings::lines(bytes);
  if (lines.size() < 2) throw Error(ErrorCode::FormatError, "missing #LANG/#DOMAIN header");
  CorpusFile file{detail::parse_header_value<LanguageCode>(lines[0], "LANG", 1),
                  detail::parse_header_value<DomainLabel>(lines[1], "DOMAIN", 2),
                  {}};
  std::set<std::uint32_t> seen;
  std::optional<AnnotatedSentence> current;

  auto close_sentence = [&](std::size_t lineno) {
    if (current->tokens.empty()) {
      throw Error::at_line(ErrorCode::FormatError, lineno, "sentence " + current->id.str() + " has no tokens");
    }
    file.sentences.push_back(std::move(*current));
    current.reset();
  };

  for (std::size_t i = 2; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    const auto line = lines[i];
    if (!current) {
      if (line.empty()) throw Error::at_line(ErrorCode::FormatError, lineno, "unexpected blank line");
      auto id = detail::parse_sid(detail::header_value(line, "SID", lineno), lineno);
      detail::check_order(file, id, seen, lineno);
      current.emplace(AnnotatedSentence{std::move(id), {}});
      continue;
    }
    if (line.empty()) {
      close_sentence(lineno);
      continue;
    }
    const auto fields = strings::split(line, '\t');
    if (fields.size() != 2) {
      throw Error::at_line(ErrorCode::FormatError, lineno, "expected '<surface>\\t<tag>'");
    }
    if (fields[0].empty() || unicode::has_whitespace(fields[0])) {
      throw Error::at_line(ErrorCode::FormatError, lineno, "token surface empty or contains whitespace");
    }
    std::optional<std::string> tag;
    if (fields[1] != kUntaggedMarker) {
      if (!Tagset::valid_label(fields[1])) {
        throw Error::at_line(ErrorCode::FormatError, lineno, "malformed tag '" + std::string(fields[1]) + "'");
      }
      if (tagset && !tagset->contains(fields[1])) {
        Error e(ErrorCode::UnknownTag,
                "line " + std::to_string(lineno) + ": tag '" + std::string(fields[1]) +
                    "' is not in tagset " + tagset->name(),
                std::string(fields[1]));
        throw e;
      }
      tag = std::string(fields[1]);
    }
    current->tokens.push_back({unicode::nfc(fields[0]), std::move(tag)});
  }
  if (current) {
    throw Error::at_line(ErrorCode::FormatError, lines.size(),
                         "sentence " + current->id.str() + " is not terminated by a blank line");
  }
  return file;
}

inline std::string serialize_alignments(const std::vector<WordAlignment>& alignments) {
  std::string out;
  for (const auto& a : alignments) {
    out += "#SID " + a.id.str() + "\n#PAIR " + a.source.str() + " " + a.target.str() + "\n";
    for (const auto& [i, j] : a.links) out += std::to_string(i) + "\t" + std::to_string(j) + "\n";
  }
  return out;
}

inline std::vector<WordAlignment> parse_alignments(std::string_view bytes) {
  detail::require_utf8(bytes);
  const auto lines = strings::lines(bytes);
  std::vector<WordAlignment> out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    const auto line = lines[i];
    if (strings::starts_with(line, "#SID ")) {
      auto id = detail::parse_sid(detail::header_value(line, "SID", lineno), lineno);
      if (i + 1 >= lines.size()) throw Error::at_line(ErrorCode::FormatError, lineno + 1, "missing #PAIR line");
      const auto pair = strings::split(detail::header_value(lines[i + 1], "PAIR", lineno + 1), ' ');
      if (pair.size() != 2 || !LanguageCode::valid(pair[0]) || !LanguageCode::valid(pair[1])) {
        throw Error::at_line(ErrorCode::FormatError, lineno + 1, "expected '#PAIR <src> <tgt>'");
      }
      out.push_back({std::move(id), LanguageCode(pair[0]), LanguageCode(pair[1]), {}});
      ++i;
      continue;
    }
    if (out.empty()) throw Error::at_line(ErrorCode::FormatError, lineno, "link before any #SID record");
    const auto fields = strings::split(line, '\t');
    if (fields.size() != 2) throw Error::at_line(ErrorCode::FormatError, lineno, "expected '<i>\\t<j>'");
    out.back().links.emplace(detail::parse_index(fields[0], lineno), detail::parse_index(fields[1], lineno));
  }
  return out;
}

inline std::string serialize_tagset(const Tagset& tagset) {
  std::string out = "#TAGSET " + tagset.name() + "\n";
  for (const auto& label : tagset.labels()) out += label + "\n";
  return out;
}

inline Tagset parse_tagset(std::string_view bytes) {
  detail::require_utf8(bytes);
  const auto lines = strings::lines(bytes);
  if (lines.empty()) throw Error(ErrorCode::FormatError, "missing #TAGSET header");
  const auto name = detail::header_value(lines[0], "TAGSET", 1);
  std::vector<std::string> labels;
  for (std::size_t i = 1; i < lines.size(); ++i) labels.emplace_back(lines[i]);
  try {
    return Tagset(std::string(name), std::move(labels));
  } catch (const Error& e) {
    throw Error(ErrorCode::FormatError, e.what());
  }
}

}  // namespace parcorp
