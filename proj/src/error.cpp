// Copyright 2026 The senseforge Authors
// SPDX-License-Identifier: Apache-2.0
#include "senseforge/error.hpp"

namespace senseforge {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::FileNotFound: return "FileNotFound";
    case ErrorCode::NotADatabase: return "NotADatabase";
    case ErrorCode::NoSuchTable: return "NoSuchTable";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::InvalidRecord: return "InvalidRecord";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::UnknownTableInSample: return "UnknownTableInSample";
    case ErrorCode::WrongFewShotCount: return "WrongFewShotCount";
    case ErrorCode::NotEnoughExamples: return "NotEnoughExamples";
    case ErrorCode::UnparsableSql: return "UnparsableSql";
    case ErrorCode::MissingDatabase: return "MissingDatabase";
    case ErrorCode::MissingPrediction: return "MissingPrediction";
    case ErrorCode::UnknownExample: return "UnknownExample";
    case ErrorCode::NetworkError: return "NetworkError";
    case ErrorCode::AuthError: return "AuthError";
    case ErrorCode::RateLimited: return "RateLimited";
    case ErrorCode::MissingSection: return "MissingSection";
    case ErrorCode::TrailingContent: return "TrailingContent";
    case ErrorCode::GoldExecutionFailed: return "GoldExecutionFailed";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::NonFiniteInput: return "NonFiniteInput";
  }
  return "Unknown";
}

}  // namespace senseforge
