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

// Project export as a tar archive.
//
// native:    manifest.json, files/<id>.ann, lexicons/<lang>.lex (+ version in
//            the manifest), dictionaries/<src>-<tgt>.dict, units.tsv.
//            Re-importable with read_import_bundle.
// columnar:  files/<id>.ann and units.tsv only.
//
// units.tsv lists every sentence id with the files holding it:
//   sid \t languages \t files \t missing
// `files` is "lang:fileId" joined by ','; `missing` names project languages
// with no version of the sentence.

#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "parcorp/admin/project.hpp"
#include "parcorp/service/archive.hpp"

namespace parcorp {

enum class ExportFormat { Native, Columnar };

inline ExportFormat parse_export_format(std::string_view s) {
  if (s.empty() || s == "native") return ExportFormat::Native;
  if (s == "columnar") return ExportFormat::Columnar;
  throw Error(ErrorCode::InvalidArgument, "format must be native or columnar");
}

inline std::string units_index(const Project& project) {
  std::map<SentenceId, std::map<LanguageCode, std::vector<std::string>>> index;
  for (const auto& [id, stored] : project.files()) {
    for (const auto& s : stored.file.sentences) index[s.id][stored.file.language].push_back(id);
  }
  std::string out = "sid\tlanguages\tfiles\tmissing\n";
  for (const auto& [sid, by_lang] : index) {
    std::vector<std::string> langs, files, missing;
    for (const auto& [lang, ids] : by_lang) {
      langs.push_back(lang.str());
      for (const auto& f : ids) files.push_back(lang.str() + ":" + f);
    }
    for (const auto& lang : project.config().languages) {
      if (!by_lang.count(lang)) missing.push_back(lang.str());
    }
    out += sid.str() + "\t" + strings::join(langs, ",") + "\t" + strings::join(files, ",") + "\t" +
           strings::join(missing, ",") + "\n";
  }
  return out;
}

inline std::string export_project(const Project& project, const Actor& actor, ExportFormat format) {
  if (!permits(actor.role, Action::Export)) throw Error(ErrorCode::NotAuthorized, "only the master admin exports");
  std::vector<tar::Entry> entries;
  Json manifest_files = Json::array();
  for (const auto& [id, stored] : project.files()) {
    entries.push_back({"files/" + id + ".ann", serialize_annotated_file(stored.file)});
    manifest_files.push_back({{"fileId", id},
                              {"language", stored.file.language.str()},
                              {"domain", stored.file.domain.str()},
                              {"sentences", stored.file.sentences.size()}});
  }
  entries.push_back({"units.tsv", units_index(project)});
  if (format == ExportFormat::Columnar) return tar::write(entries);

  Json lexicons = Json::array();
  for (const auto& [lang, lex] : project.lexicons()) {
    entries.push_back({"lexicons/" + lang.str() + ".lex", serialize_lexicon(lex)});
    lexicons.push_back({{"language", lang.str()}, {"version", lex.version}});
  }
  Json dictionaries = Json::array();
  for (const auto& [key, dict] : project.dictionaries()) {
    entries.push_back({"dictionaries/" + key + ".dict", serialize_dictionary(dict)});
    dictionaries.push_back(key);
  }
  const Json manifest = {{"format", "parcorp-native"},
                         {"version", 1},
                         {"config", codec::config(project.config())},
                         {"files", manifest_files},
                         {"lexicons", lexicons},
                         {"dictionaries", dictionaries}};
  entries.insert(entries.begin(), {"manifest.json", manifest.dump(2) + "\n"});
  return tar::write(entries);
}

/// Parses a native archive back into corpus content. Tags are checked
/// against `tagset`.
inline ImportBundle read_import_bundle(std::string_view archive, const Tagset& tagset) {
  std::map<std::string, std::string> entries;
  for (auto& e : tar::read(archive)) entries[e.name] = std::move(e.content);
  const auto m = entries.find("manifest.json");
  if (m == entries.end()) throw Error(ErrorCode::FormatError, "archive has no manifest.json");
  Json manifest;
  try {
    manifest = Json::parse(m->second);
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("bad manifest: ") + e.what());
  }
  if (manifest.value("format", "") != "parcorp-native") throw Error(ErrorCode::FormatError, "not a native export");

  auto member = [&](const std::string& name) -> const std::string& {
    const auto it = entries.find(name);
    if (it == entries.end()) throw Error(ErrorCode::FormatError, "archive lacks " + name, name);
    return it->second;
  };

  ImportBundle bundle;
  try {
    for (const auto& f : manifest.at("files")) {
      const auto id = f.at("fileId").get<std::string>();
      bundle.files.emplace_back(id, parse_annotated_file(member("files/" + id + ".ann"), &tagset));
    }
    for (const auto& l : manifest.at("lexicons")) {
      const auto lang = l.at("language").get<std::string>();
      auto lex = parse_lexicon(member("lexicons/" + lang + ".lex"), tagset);
      lex.version = l.at("version").get<std::uint64_t>();
      bundle.lexicons.push_back(std::move(lex));
    }
    for (const auto& d : manifest.at("dictionaries")) {
      bundle.dictionaries.push_back(load_dictionary(member("dictionaries/" + d.get<std::string>() + ".dict")));
    }
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("bad manifest: ") + e.what());
  }
  return bundle;
}

}  // namespace parcorp
