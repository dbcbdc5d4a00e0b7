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

// Retrieval over the implementation tree: look up the requested function type,
// score each implementation with a two-cursor merge scan of the (sorted)
// request and implementation attribute lists, then select the most similar or
// the n best above a threshold.
//
// A requested attribute missing from an implementation contributes s_i = 0 and
// its weight still counts. Attributes the request does not mention are skipped.

#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "qosalloc/case_base.hpp"
#include "qosalloc/similarity.hpp"

namespace qosalloc {

enum class EngineKind { FloatReference, FixedQ16 };

/// Step counts standing in for cycle counts. words_read models reads of 16-bit
/// words from the packed case-base layout.
struct RetrievalStats {
  std::uint64_t words_read = 0;
  std::uint64_t comparisons = 0;
  std::uint64_t multiplications = 0;

  RetrievalStats& operator+=(const RetrievalStats& o) {
    words_read += o.words_read;
    comparisons += o.comparisons;
    multiplications += o.multiplications;
    return *this;
  }
};

/// Optional observer of one attribute-list scan: the cursor index after every move.
struct ScanTrace {
  std::vector<std::size_t> cursor_positions;
};

struct ImplementationScore {
  double similarity_f = 0.0;
  std::optional<SimilarityQ> similarity_q;  // set by the fixed engine
  RetrievalStats stats;                     // this implementation's attribute-list scan only
};

/// Throws MissingRangeEntry, OrderingError (request not ascending), RangeViolation.
ImplementationScore score_implementation(const ImplementationCase& impl, const Request& req,
                                         const RangeTable& rt, EngineKind engine,
                                         ScanTrace* trace = nullptr);

struct RetrievalResult {
  FunctionTypeId type_id;
  ImplId impl_id;
  double similarity_f = 0.0;                // for the fixed engine: similarity_q / 65536
  std::optional<SimilarityQ> similarity_q;

  friend bool operator==(const RetrievalResult&, const RetrievalResult&) = default;
};

struct MostSimilar {
  RetrievalResult best;
  RetrievalStats stats;
};

struct RankedResults {
  std::vector<RetrievalResult> results;
  RetrievalStats stats;
};

inline constexpr std::size_t kAllResults = std::numeric_limits<std::size_t>::max();

/// Ties go to the lowest impl_id. Throws UnknownFunctionType, EmptyImplementationList.
MostSimilar retrieve_most_similar(const CaseBase& cb, const RangeTable& rt, const Request& req,
                                  EngineKind engine);

/// Keeps results with similarity >= threshold, sorted descending (ties ascending by
/// impl_id), truncated to n. Throws UnknownFunctionType, InvalidArgument (threshold
/// outside [0, 1]).
RankedResults retrieve_n_best(const CaseBase& cb, const RangeTable& rt, const Request& req,
                              std::size_t n, double threshold, EngineKind engine);

}  // namespace qosalloc
