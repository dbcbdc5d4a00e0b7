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

// Domain types for the retrieval library: requests with weighted attribute
// constraints, the three-level implementation tree (function type ->
// implementation -> attribute list) and the per-attribute range table.
//
// Every ID sequence is kept strictly ascending. The retrieval scan depends on
// this to search each attribute list with a cursor that only moves forward.

#include <compare>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qosalloc {

/// 16-bit identifier. Zero is reserved as list terminator / null pointer.
template <class Tag>
struct Id {
  std::uint16_t value = 0;

  constexpr Id() = default;
  constexpr explicit Id(std::uint16_t v) : value(v) {}

  constexpr bool is_null() const { return value == 0; }
  friend constexpr auto operator<=>(Id, Id) = default;
};

using AttributeId = Id<struct AttributeIdTag>;
using FunctionTypeId = Id<struct FunctionTypeIdTag>;
using ImplId = Id<struct ImplIdTag>;

/// Every attribute kind (bitwidth, mode, rate, ...) is mapped onto a 16-bit integer.
using AttributeValue = std::uint16_t;

inline constexpr std::uint32_t kQ15One = 32768;
inline constexpr std::uint32_t kQ16One = 65536;

/// Attribute weight with an exact real view and a Q15 view (unit 32768).
///
/// Raw weights may exceed 1 until the request has been normalized by
/// validate_request(); after validation every weight lies in [0, 1].
class Weight {
 public:
  constexpr Weight() = default;
  /// Throws Error(InvalidArgument) for negative or non-finite values.
  explicit Weight(double real);

  static Weight from_q15(std::uint16_t q15);

  double real() const { return real_; }
  /// round-half-up(real * 32768); throws InvalidArgument if real > 1.
  std::uint16_t q15() const;

  friend bool operator==(const Weight&, const Weight&) = default;

 private:
  double real_ = 0.0;
};

struct RequestAttribute {
  AttributeId id;
  AttributeValue value = 0;
  Weight weight;

  friend bool operator==(const RequestAttribute&, const RequestAttribute&) = default;
};

struct Request {
  FunctionTypeId function_type;
  std::vector<RequestAttribute> attributes;

  friend bool operator==(const Request&, const Request&) = default;
};

struct CaseAttribute {
  AttributeId id;
  AttributeValue value = 0;

  friend bool operator==(const CaseAttribute&, const CaseAttribute&) = default;
};

struct ImplementationCase {
  ImplId impl_id;
  std::string target_label;  // documentation only; never used in similarity
  std::vector<CaseAttribute> attributes;

  friend bool operator==(const ImplementationCase&, const ImplementationCase&) = default;
};

struct FunctionTypeEntry {
  FunctionTypeId type_id;
  std::vector<ImplementationCase> implementations;

  friend bool operator==(const FunctionTypeEntry&, const FunctionTypeEntry&) = default;
};

struct CaseBase {
  std::vector<FunctionTypeEntry> entries;

  /// Linear lookup; nullptr if the type is absent.
  const FunctionTypeEntry* find(FunctionTypeId type_id) const;

  friend bool operator==(const CaseBase&, const CaseBase&) = default;
};

/// Reciprocal of (d_max + 1) in Q16, rounded half-up. Zero for d_max == 0,
/// where 65536 would not fit a 16-bit word and the value is never used.
constexpr std::uint16_t reciprocal_q16(std::uint16_t d_max) {
  if (d_max == 0) return 0;
  const std::uint32_t divisor = std::uint32_t{d_max} + 1;
  return static_cast<std::uint16_t>((kQ16One + divisor / 2) / divisor);
}

struct RangeEntry {
  AttributeId id;
  AttributeValue lower = 0;
  AttributeValue upper = 0;
  std::uint16_t d_max = 0;
  std::uint16_t recip_q16 = 0;

  /// Derives d_max and recip_q16. Throws Error(InvalidRange) if lower > upper.
  static RangeEntry make(AttributeId id, AttributeValue lower, AttributeValue upper);

  friend bool operator==(const RangeEntry&, const RangeEntry&) = default;
};

struct RangeTable {
  std::vector<RangeEntry> entries;

  /// Binary search; nullptr if the attribute has no entry.
  const RangeEntry* find(AttributeId id) const;

  friend bool operator==(const RangeTable&, const RangeTable&) = default;
};

struct Violation {
  enum class Kind { Ordering, DuplicateId, ReservedId, EmptyList, InvalidBounds, StaleDerived,
                    MissingRange, OutOfRange };
  Kind kind;
  std::string path;  // e.g. "type 1 / impl 2 / attr 4"
  std::string message;
};

std::string_view to_string(Violation::Kind kind) noexcept;

struct ValidationReport {
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
  std::size_t count(Violation::Kind kind) const;
};

struct CaseBaseCheckOptions {
  /// Implementation IDs need only be unique within a function type unless set.
  bool require_global_impl_ids = false;
};

ValidationReport validate_case_base(const CaseBase& cb, CaseBaseCheckOptions options = {});

/// Checks the table's own invariants and, if given, its coverage of the case-base and
/// requests: every referenced attribute has an entry whose bounds contain every value.
ValidationReport validate_range_table(const RangeTable& rt, const CaseBase* cb = nullptr,
                                      std::span<const Request> requests = {});

enum class WeightPolicy { Strict, Normalize };

/// Real-view tolerance on the weight sum under WeightPolicy::Strict.
inline constexpr double kWeightSumTolerance = 1.0 / 1024.0;

/// Strict: returns the request unchanged iff |sum(w) - 1| <= kWeightSumTolerance.
/// Normalize: rescales all weights by 1/sum(w).
/// Throws WeightSumError, ZeroWeightSum, OrderingError, or InvalidArgument (empty request,
/// null id, a weight above 1 after validation).
Request validate_request(const Request& req, WeightPolicy policy);

/// Accepted Q15 deviation of the weight sum from 32768: one unit per attribute.
bool q15_weight_sum_ok(const Request& req);

/// Global min/max of every observed value per attribute id, over case values and request
/// values alike. Order-insensitive in its inputs.
RangeTable build_range_table(std::span<const CaseBase> cbs, std::span<const Request> extra_requests);

}  // namespace qosalloc
