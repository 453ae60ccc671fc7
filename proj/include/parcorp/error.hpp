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
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace parcorp {

/// Machine-readable failure kinds shared by every layer. The names are part
/// of the wire contract (error envelopes, CLI messages) so never renumber
/// them by reordering names; only append.
enum class ErrorCode {
  InvalidArgument,
  InvalidValue,
  EmptyInput,
  FormatError,
  DuplicateId,
  IdDomainMismatch,
  UnknownTag,
  ConflictingText,
  MissingLanguage,
  TagNotInTagset,
  IndexOutOfRange,
  EmptyEdit,
  NoChange,
  Unauthenticated,
  NotAuthorized,
  DuplicateUser,
  BadCredential,
  InactiveAccount,
  ValidationFailed,
  CapExceeded,
  AlreadyAssigned,
  AlreadyCompleted,
  LanguageMismatch,
  NoActiveAssignment,
  InvalidAssignee,
  IncompleteFile,
  NotFound,
  UnknownLanguage,
  SerialOverflow,
  UnmappedTag,
  TextMismatch,
  NoJointPositions,
  BindFailure,
  StoreUnavailable,
  StoreCorrupt,
};

inline constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidValue: return "InvalidValue";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::IdDomainMismatch: return "IdDomainMismatch";
    case ErrorCode::UnknownTag: return "UnknownTag";
    case ErrorCode::ConflictingText: return "ConflictingText";
    case ErrorCode::MissingLanguage: return "MissingLanguage";
    case ErrorCode::TagNotInTagset: return "TagNotInTagset";
    case ErrorCode::IndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::EmptyEdit: return "EmptyEdit";
    case ErrorCode::NoChange: return "NoChange";
    case ErrorCode::Unauthenticated: return "Unauthenticated";
    case ErrorCode::NotAuthorized: return "NotAuthorized";
    case ErrorCode::DuplicateUser: return "DuplicateUser";
    case ErrorCode::BadCredential: return "BadCredential";
    case ErrorCode::InactiveAccount: return "InactiveAccount";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::CapExceeded: return "CapExceeded";
    case ErrorCode::AlreadyAssigned: return "AlreadyAssigned";
    case ErrorCode::AlreadyCompleted: return "AlreadyCompleted";
    case ErrorCode::LanguageMismatch: return "LanguageMismatch";
    case ErrorCode::NoActiveAssignment: return "NoActiveAssignment";
    case ErrorCode::InvalidAssignee: return "InvalidAssignee";
    case ErrorCode::IncompleteFile: return "IncompleteFile";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::UnknownLanguage: return "UnknownLanguage";
    case ErrorCode::SerialOverflow: return "SerialOverflow";
    case ErrorCode::UnmappedTag: return "UnmappedTag";
    case ErrorCode::TextMismatch: return "TextMismatch";
    case ErrorCode::NoJointPositions: return "NoJointPositions";
    case ErrorCode::BindFailure: return "BindFailure";
    case ErrorCode::StoreUnavailable: return "StoreUnavailable";
    case ErrorCode::StoreCorrupt: return "StoreCorrupt";
  }
  return "Unknown";
}

/// The single exception type thrown by parcorp. `entity` names the object
/// the failure is about (a sentence id, a file id, a user id); `line` is set
/// by the file parsers; `details` carries per-item violations for
/// ValidationFailed.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string message, std::string entity = {})
      : std::runtime_error(std::move(message)), code_(code), entity_(std::move(entity)) {}

  static Error at_line(ErrorCode code, std::size_t line, std::string message) {
    Error e(code, "line " + std::to_string(line) + ": " + message);
    e.line_ = line;
    return e;
  }

  static Error with_details(ErrorCode code, std::string message, std::vector<std::string> details,
                            std::string entity = {}) {
    Error e(code, std::move(message), std::move(entity));
    e.details_ = std::move(details);
    return e;
  }

  ErrorCode code() const noexcept { return code_; }
  const std::string& entity() const noexcept { return entity_; }
  std::optional<std::size_t> line() const noexcept { return line_; }
  const std::vector<std::string>& details() const noexcept { return details_; }

 private:
  ErrorCode code_;
  std::string entity_;
  std::optional<std::size_t> line_;
  std::vector<std::string> details_;
};

}  // namespace parcorp
