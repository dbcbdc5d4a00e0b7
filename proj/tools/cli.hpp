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

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qosalloc/case_base.hpp"
#include "qosalloc/generator.hpp"
#include "qosalloc/retrieval.hpp"

namespace qosalloc::cli {

enum ExitStatus : int {
  kSuccess = 0,
  kDataError = 1,
  kUsageError = 2,
  kInvariantFailure = 3,
};

/// Runs one command line (args[0] is the program name).
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct OracleCheckOptions {
  GenSpec spec;  // counts are per-trial upper bounds
  std::size_t trials = 1000;
  std::string image_path;  // when set, trials draw requests against this image
};

struct OracleCheckSummary {
  std::size_t trials = 0;
  std::size_t float_matches = 0;
  std::size_t argmax_checked = 0;
  std::size_t argmax_agreed = 0;
  double max_deviation = 0.0;
  std::vector<std::string> violations;  // each names its reproducer seed
};

/// Brute-force float oracle: scores every implementation of req's type by direct
/// per-attribute lookup and sorts by (similarity desc, impl_id asc).
std::vector<RetrievalResult> oracle_rank(const CaseBase& cb, const RangeTable& rt, const Request& req);

OracleCheckSummary oracle_check(const OracleCheckOptions& options);

}  // namespace qosalloc::cli
