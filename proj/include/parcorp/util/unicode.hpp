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

// Thin UTF-8 helpers over ICU. Everything in parcorp keeps text as UTF-8
// std::string; ICU is only touched here.

#pragma once

#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/ustring.h>
#include <unicode/utf8.h>

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "parcorp/error.hpp"

namespace parcorp::unicode {

inline const icu::Normalizer2& nfc_instance() {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2* norm = icu::Normalizer2::getNFCInstance(status);
  if (U_FAILURE(status) || norm == nullptr) {
    throw Error(ErrorCode::InvalidValue, "ICU NFC normalizer unavailable");
  }
  return *norm;
}

inline bool is_valid_utf8(std::string_view text) {
  const auto* s = reinterpret_cast<const uint8_t*>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) return false;
  }
  return true;
}

/// NFC form of well-formed UTF-8 text. Throws InvalidValue on malformed input.
inline std::string nfc(std::string_view utf8) {
  if (!is_valid_utf8(utf8)) throw Error(ErrorCode::InvalidValue, "text is not valid UTF-8");
  bool ascii = true;
  for (unsigned char c : utf8) {
    if (c >= 0x80) {
      ascii = false;
      break;
    }
  }
  if (ascii) return std::string(utf8);

  const auto& norm = nfc_instance();
  const icu::UnicodeString source = icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size())));
  UErrorCode status = U_ZERO_ERROR;
  if (norm.isNormalized(source, status) && U_SUCCESS(status)) return std::string(utf8);
  status = U_ZERO_ERROR;
  const icu::UnicodeString normalized = norm.normalize(source, status);
  if (U_FAILURE(status)) throw Error(ErrorCode::InvalidValue, "NFC normalization failed");
  std::string out;
  normalized.toUTF8String(out);
  return out;
}

inline bool is_nfc(std::string_view utf8) { return nfc(utf8) == utf8; }

struct LossyDecode {
  std::string text;
  std::size_t replacements = 0;
};

/// Decodes arbitrary bytes as UTF-8, substituting U+FFFD for every ill-formed
/// subsequence and counting the substitutions.
inline LossyDecode decode_utf8_lossy(std::string_view bytes) {
  LossyDecode result;
  if (bytes.empty()) return result;
  std::vector<UChar> buffer(bytes.size() + 1);
  int32_t length = 0;
  int32_t substitutions = 0;
  UErrorCode status = U_ZERO_ERROR;
  u_strFromUTF8WithSub(buffer.data(), static_cast<int32_t>(buffer.size()), &length, bytes.data(),
                       static_cast<int32_t>(bytes.size()), 0xFFFD, &substitutions, &status);
  if (U_FAILURE(status)) throw Error(ErrorCode::InvalidValue, "UTF-8 decoding failed");
  icu::UnicodeString(buffer.data(), length).toUTF8String(result.text);
  result.replacements = static_cast<std::size_t>(substitutions);
  return result;
}

inline std::string encode(UChar32 cp) {
  std::string out;
  uint8_t buf[4];
  int32_t i = 0;
  UBool error = false;
  U8_APPEND(buf, i, 4, cp, error);
  if (error) throw Error(ErrorCode::InvalidValue, "invalid code point");
  out.append(reinterpret_cast<const char*>(buf), static_cast<std::size_t>(i));
  return out;
}

/// One decoded code point together with its byte span in the source.
struct CodePoint {
  UChar32 value;
  std::size_t offset;
  std::size_t length;
};

inline std::vector<CodePoint> code_points(std::string_view utf8) {
  std::vector<CodePoint> out;
  const auto* s = reinterpret_cast<const uint8_t*>(utf8.data());
  const auto length = static_cast<int32_t>(utf8.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0) throw Error(ErrorCode::InvalidValue, "text is not valid UTF-8");
    out.push_back({c, static_cast<std::size_t>(start), static_cast<std::size_t>(i - start)});
  }
  return out;
}

inline bool is_whitespace(UChar32 c) { return u_isUWhiteSpace(c) != 0; }

inline bool is_control(UChar32 c) { return u_charType(c) == U_CONTROL_CHAR; }

inline bool has_whitespace(std::string_view utf8) {
  for (const auto& cp : code_points(utf8)) {
    if (is_whitespace(cp.value)) return true;
  }
  return false;
}

}  // namespace parcorp::unicode
