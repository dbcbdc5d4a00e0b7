// Copyright 2026 The qosalloc Authors.
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

#include "qosalloc/error.hpp"

namespace qosalloc {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::WeightSumError: return "WeightSumError";
    case ErrorCode::ZeroWeightSum: return "ZeroWeightSum";
    case ErrorCode::OrderingError: return "OrderingError";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::OffsetOverflow: return "OffsetOverflow";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::BadVersion: return "BadVersion";
    case ErrorCode::DanglingPointer: return "DanglingPointer";
    case ErrorCode::UnterminatedList: return "UnterminatedList";
    case ErrorCode::Truncated: return "Truncated";
    case ErrorCode::InvalidRange: return "InvalidRange";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::RangeViolation: return "RangeViolation";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::MissingRangeEntry: return "MissingRangeEntry";
    case ErrorCode::UnknownFunctionType: return "UnknownFunctionType";
    case ErrorCode::EmptyImplementationList: return "EmptyImplementationList";
    case ErrorCode::NotInRepository: return "NotInRepository";
    case ErrorCode::DuplicateKey: return "DuplicateKey";
  }
  return "UnknownError";
}

}  // namespace qosalloc
