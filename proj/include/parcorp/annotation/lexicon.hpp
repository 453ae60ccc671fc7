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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "parcorp/corpus/format.hpp"
#include "parcorp/corpus/types.hpp"

namespace parcorp {

/// Per-language table of closed-class words (pronouns, postpositions,
/// conjunctions, quantifiers) used for automatic tagging.
///
/// `changed` remembers, for every surface ever touched, the version at which
/// it last changed and its state after that change (nullopt = deleted). It is
/// what makes version-delta synchronisation possible.
struct ClosedClassLexicon {
  struct Mark {
    std::uint64_t version = 0;
    std::optional<std::string> tag;

    bool operator==(const Mark&) const = default;
  };

  LanguageCode language;
  std::map<std::string, std::string> entries;
  std::uint64_t version = 0;
  std::map<std::string, Mark> changed;

  explicit ClosedClassLexicon(LanguageCode lang) : language(std::move(lang)) {}

  bool operator==(const ClosedClassLexicon&) const = default;
};

/// Upsert (tag set) or delete (tag nullopt) one entry. Every call, including
/// a re-add of an identical pair or a delete of a missing surface, produces
/// version + 1.
inline ClosedClassLexicon update_lexicon(const ClosedClassLexicon& lexicon, std::string_view surface,
                                         const std::optional<std::string>& tag, const Tagset& tagset) {
  const std::string key = unicode::nfc(surface);
  if (key.empty() || unicode::has_whitespace(key)) {
    throw Error(ErrorCode::InvalidArgument, "lexicon surface must be non-empty and whitespace-free", key);
  }
  if (tag && !tagset.contains(*tag)) {
    throw Error(ErrorCode::TagNotInTagset, "tag '" + *tag + "' is not in tagset " + tagset.name(), *tag);
  }
  ClosedClassLexicon next = lexicon;
  next.version = lexicon.version + 1;
  if (tag) {
    next.entries[key] = *tag;
  } else {
    next.entries.erase(key);
  }
  next.changed[key] = {next.version, tag};
  return next;
}

struct LexiconDelta {
  std::uint64_t version = 0;
  /// surface -> tag, or nullopt when the surface was removed.
  std::map<std::string, std::optional<std::string>> changes;

  bool operator==(const LexiconDelta&) const = default;
};

/// Everything changed after `since`. A client holding the lexicon at `since`
/// that applies the delta ends with exactly `lexicon.entries`. From version 0
/// the delta is the full lexicon with no removals.
inline LexiconDelta lexicon_delta(const ClosedClassLexicon& lexicon, std::uint64_t since) {
  LexiconDelta delta{lexicon.version, {}};
  for (const auto& [surface, mark] : lexicon.changed) {
    if (mark.version <= since) continue;
    if (since == 0 && !mark.tag) continue;
    delta.changes.emplace(surface, mark.tag);
  }
  return delta;
}

inline void apply_delta(std::map<std::string, std::string>& entries, const LexiconDelta& delta) {
  for (const auto& [surface, tag] : delta.changes) {
    if (tag) {
      entries[surface] = *tag;
    } else {
      entries.erase(surface);
    }
  }
}

/// `#LANG <code>` then `<surface>\t<tag>` lines in surface byte order.
inline std::string serialize_lexicon(const ClosedClassLexicon& lexicon) {
  std::string out = "#LANG " + lexicon.language.str() + "\n";
  for (const auto& [surface, tag] : lexicon.entries) out += surface + "\t" + tag + "\n";
  return out;
}

/// Loads a lexicon file as one update per line, so the result has
/// version == number of lines.
inline ClosedClassLexicon parse_lexicon(std::string_view bytes, const Tagset& tagset) {
  detail::require_utf8(bytes);
  const auto lines = strings::lines(bytes);
  if (lines.empty()) throw Error(ErrorCode::FormatError, "missing #LANG header");
  ClosedClassLexicon lexicon(detail::parse_header_value<LanguageCode>(lines[0], "LANG", 1));
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto fields = strings::split(lines[i], '\t');
    if (fields.size() != 2 || fields[0].empty()) {
      throw Error::at_line(ErrorCode::FormatError, i + 1, "expected '<surface>\\t<tag>'");
    }
    try {
      lexicon = update_lexicon(lexicon, fields[0], std::string(fields[1]), tagset);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::TagNotInTagset) throw;
      throw Error::at_line(ErrorCode::FormatError, i + 1, e.what());
    }
  }
  return lexicon;
}

}  // namespace parcorp
