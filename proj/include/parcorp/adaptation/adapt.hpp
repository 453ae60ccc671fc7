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

// Turning outside text into project files: clean it, cut it into sentences,
// number the sentences, and translate foreign tagsets.

#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "parcorp/corpus/format.hpp"
#include "parcorp/corpus/tokenize.hpp"
#include "parcorp/corpus/types.hpp"

namespace parcorp {

struct NormalizedText {
  std::string text;
  std::size_t replacements = 0;  // ill-formed UTF-8 sequences replaced by U+FFFD
};

/// Lossy UTF-8 decode, drop control characters other than LF and TAB, turn
/// every other whitespace character into a space, collapse space runs, NFC.
inline NormalizedText normalize_text(std::string_view bytes) {
  auto decoded = unicode::decode_utf8_lossy(bytes);
  std::string cleaned;
  cleaned.reserve(decoded.text.size());
  bool last_space = false;
  for (const auto& cp : unicode::code_points(decoded.text)) {
    const UChar32 c = cp.value;
    if (c == '\n' || c == '\t') {
      cleaned += static_cast<char>(c);
      last_space = false;
      continue;
    }
    if (unicode::is_control(c)) continue;
    if (unicode::is_whitespace(c)) {
      if (!last_space) cleaned += ' ';
      last_space = true;
      continue;
    }
    cleaned.append(decoded.text, cp.offset, cp.length);
    last_space = false;
  }
  return {unicode::nfc(cleaned), decoded.replacements};
}

inline bool is_sentence_terminator(UChar32 c) {
  return c == 0x0964 || c == 0x0965 || c == '.' || c == '!' || c == '?';
}

/// Cuts after every terminator that is followed by whitespace or the end of
/// the text. Segments are trimmed; empty ones are dropped.
inline std::vector<std::string> segment_sentences(std::string_view text) {
  const auto cps = unicode::code_points(text);
  std::vector<std::string> out;
  auto push = [&](std::size_t from, std::size_t to) {
    while (from < to && unicode::is_whitespace(cps[from].value)) ++from;
    while (to > from && unicode::is_whitespace(cps[to - 1].value)) --to;
    if (from == to) return;
    const auto begin = cps[from].offset;
    const auto end = cps[to - 1].offset + cps[to - 1].length;
    out.emplace_back(text.substr(begin, end - begin));
  };
  std::size_t start = 0;
  for (std::size_t i = 0; i < cps.size(); ++i) {
    if (!is_sentence_terminator(cps[i].value)) continue;
    if (i + 1 == cps.size() || unicode::is_whitespace(cps[i + 1].value)) {
      push(start, i + 1);
      start = i + 1;
    }
  }
  push(start, cps.size());
  return out;
}

/// Numbers sentences `<domain>-<start>`, `<domain>-<start+1>`, ... and
/// tokenizes them, untagged.
inline std::vector<AnnotatedSentence> assign_ids(const std::vector<std::string>& sentences,
                                                 const DomainLabel& domain, std::uint64_t start_serial) {
  if (start_serial < 1) throw Error(ErrorCode::InvalidArgument, "start serial must be >= 1");
  if (!sentences.empty() && start_serial + sentences.size() - 1 > kMaxSerial) {
    throw Error(ErrorCode::SerialOverflow, "serials would exceed " + std::to_string(kMaxSerial));
  }
  std::vector<AnnotatedSentence> out;
  out.reserve(sentences.size());
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    SentenceId id(domain, static_cast<std::uint32_t>(start_serial + i));
    out.push_back({std::move(id), untagged(tokenize(sentences[i]))});
  }
  return out;
}

/// Foreign tag -> project tag.
struct TagMapping {
  std::string source_tagset;
  std::map<std::string, std::string> entries;

  bool operator==(const TagMapping&) const = default;
};

/// `#FROM <tagset-name>` then `<foreign>\t<project-tag>` lines. Every image
/// must be in `project`.
inline TagMapping parse_tag_mapping(std::string_view bytes, const Tagset& project) {
  detail::require_utf8(bytes);
  const auto lines = strings::lines(bytes);
  if (lines.empty()) throw Error(ErrorCode::FormatError, "missing #FROM header");
  TagMapping mapping{std::string(detail::header_value(lines[0], "FROM", 1)), {}};
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = strings::split(lines[i], '\t');
    if (fields.size() != 2 || fields[0].empty()) {
      throw Error::at_line(ErrorCode::FormatError, i + 1, "expected '<foreign>\\t<project-tag>'");
    }
    if (!project.contains(fields[1])) {
      throw Error(ErrorCode::TagNotInTagset,
                  "line " + std::to_string(i + 1) + ": '" + std::string(fields[1]) +
                      "' is not in tagset " + project.name(),
                  std::string(fields[1]));
    }
    if (!mapping.entries.emplace(std::string(fields[0]), std::string(fields[1])).second) {
      throw Error::at_line(ErrorCode::FormatError, i + 1, "foreign tag mapped twice");
    }
  }
  return mapping;
}

inline std::string serialize_tag_mapping(const TagMapping& mapping) {
  std::string out = "#FROM " + mapping.source_tagset + "\n";
  for (const auto& [from, to] : mapping.entries) out += from + "\t" + to + "\n";
  return out;
}

/// Rewrites every present tag through `mapping`. A tag with no image is an
/// error naming its location; nothing is silently dropped.
inline CorpusFile map_foreign_tags(const CorpusFile& file, const TagMapping& mapping) {
  CorpusFile out = file;
  for (auto& sentence : out.sentences) {
    for (std::size_t i = 0; i < sentence.tokens.size(); ++i) {
      auto& tag = sentence.tokens[i].tag;
      if (!tag) continue;
      const auto hit = mapping.entries.find(*tag);
      if (hit == mapping.entries.end()) {
        throw Error(ErrorCode::UnmappedTag,
                    "tag '" + *tag + "' at " + sentence.id.str() + " token " + std::to_string(i) +
                        " has no mapping from " + mapping.source_tagset,
                    sentence.id.str() + "#" + std::to_string(i));
      }
      tag = hit->second;
    }
  }
  return out;
}

}  // namespace parcorp
