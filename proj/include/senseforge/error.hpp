// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace senseforge {

enum class ErrorCode {
  InvalidArgument,
  FileNotFound,
  NotADatabase,
  NoSuchTable,
  IoError,
  ParseError,
  MissingField,
  InvalidRecord,
  DuplicateId,
  UnknownTableInSample,
  WrongFewShotCount,
  NotEnoughExamples,
  UnparsableSql,
  MissingDatabase,
  MissingPrediction,
  UnknownExample,
  NetworkError,
  AuthError,
  RateLimited,
  MissingSection,
  TrailingContent,
  GoldExecutionFailed,
  EmptySequence,
  NonFiniteInput,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure that crosses the library boundary is an Error carrying a
/// stable code; callers (the CLI in particular) switch on code(), not on
/// the message text.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace senseforge
