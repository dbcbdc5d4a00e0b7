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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace qosalloc {

enum class ErrorCode {
  WeightSumError,
  ZeroWeightSum,
  OrderingError,
  InvalidArgument,
  OffsetOverflow,
  BadMagic,
  BadVersion,
  DanglingPointer,
  UnterminatedList,
  Truncated,
  InvalidRange,
  SyntaxError,
  RangeViolation,
  LengthMismatch,
  MissingRangeEntry,
  UnknownFunctionType,
  EmptyImplementationList,
  NotInRepository,
  DuplicateKey,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every fault raised by the library carries a machine-checkable code.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Parse failure in the text source format; `line()` is 1-based.
class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t line, const std::string& what)
      : Error(ErrorCode::SyntaxError, "line " + std::to_string(line) + ": " + what), line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace qosalloc
