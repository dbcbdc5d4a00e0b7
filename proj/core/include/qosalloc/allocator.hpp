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

// Allocation manager on top of retrieval: drops candidates whose resource demand
// does not fit the current snapshot, picks the most similar feasible one, and
// issues a bypass token so repeated calls can skip retrieval after an
// availability check.

#include <cstdint>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "qosalloc/case_base.hpp"
#include "qosalloc/retrieval.hpp"

namespace qosalloc {

struct Demand {
  std::string device_class;
  std::uint64_t units = 0;

  friend bool operator==(const Demand&, const Demand&) = default;
};

using ImplKey = std::pair<FunctionTypeId, ImplId>;

/// Single-dimension capacity per device class. Implementations without a demand
/// record are feasible; a device class without a capacity record has capacity 0.
struct ResourceSnapshot {
  std::map<std::string, std::uint64_t, std::less<>> capacity;
  std::map<ImplKey, Demand> demand;

  bool feasible(FunctionTypeId type_id, ImplId impl_id) const;
};

/// Parses `capacity <class> <units>` / `demand <type_id> <impl_id> <class> <units>` lines
/// ('#' comments). Throws SyntaxError.
ResourceSnapshot parse_snapshot(std::string_view text);

struct BypassToken {
  FunctionTypeId type_id;
  ImplId impl_id;
  double similarity = 0.0;
  std::uint64_t sequence = 0;

  friend bool operator==(const BypassToken&, const BypassToken&) = default;
};

struct AllocationDecision {
  std::optional<RetrievalResult> chosen;
  std::vector<RetrievalResult> alternatives;  // feasible, ranked below chosen
  std::vector<ImplId> rejected_infeasible;    // in rank order
  std::optional<BypassToken> token;
  RetrievalStats stats;
};

enum class TokenStatus { Valid, Stale };

/// Valid iff the implementation still exists and its demand still fits.
TokenStatus check_token(const BypassToken& token, const CaseBase& cb, const ResourceSnapshot& snapshot);

/// Issues tokens with increasing sequence numbers and keeps a log of decisions.
/// Safe to share between threads.
class AllocationManager {
 public:
  /// No chosen result means nothing feasible passed the threshold; the caller may
  /// retry with relaxed constraints. Propagates retrieval errors.
  AllocationDecision allocate(const CaseBase& cb, const RangeTable& rt, const Request& req,
                              const ResourceSnapshot& snapshot, std::size_t n, double threshold,
                              EngineKind engine);

  std::vector<AllocationDecision> log() const;

 private:
  mutable std::mutex mutex_;
  std::uint64_t next_sequence_ = 1;
  std::vector<AllocationDecision> log_;
};

/// Maps implementation keys to opaque configuration-data references (bitstream
/// path, opcode blob URI, ...).
class ConfigRepository {
 public:
  ConfigRepository() = default;
  /// Throws Error(DuplicateKey) if a key repeats.
  explicit ConfigRepository(std::vector<std::pair<ImplKey, std::string>> entries);

  /// Throws Error(NotInRepository).
  const std::string& config_ref(FunctionTypeId type_id, ImplId impl_id) const;

  std::size_t size() const { return refs_.size(); }

 private:
  std::map<ImplKey, std::string> refs_;
};

}  // namespace qosalloc
