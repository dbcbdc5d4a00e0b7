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

#include "qosalloc/similarity.hpp"

#include <string>

#include "qosalloc/error.hpp"

namespace qosalloc {

namespace {

[[noreturn]] void range_violation(std::uint32_t d, std::uint32_t d_max) {
  throw Error(ErrorCode::RangeViolation,
              "distance " + std::to_string(d) + " exceeds d_max " + std::to_string(d_max));
}

}  // namespace

double local_similarity_f(AttributeValue x_a, AttributeValue x_b, std::uint32_t d_max) {
  const auto d = distance(x_a, x_b);
  if (d > d_max) range_violation(d, d_max);
  return 1.0 - static_cast<double>(d) / (1.0 + static_cast<double>(d_max));
}

SimilarityQ local_similarity_q(AttributeValue x_a, AttributeValue x_b, const RangeEntry& range) {
  const auto d = distance(x_a, x_b);
  if (d > range.d_max) range_violation(d, range.d_max);
  if (range.d_max == 0) return kQ16One;
  const std::uint32_t product = d * std::uint32_t{range.recip_q16};
  // Rounding the reciprocal up can push d * recip past 1.0 once d_max > ~400.
  return product >= kQ16One ? 0 : kQ16One - product;
}

double global_similarity_f(std::span<const double> s, std::span<const double> w) {
  if (s.size() != w.size()) throw Error(ErrorCode::LengthMismatch, "similarity/weight length mismatch");
  double sum = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) sum += w[i] * s[i];
  return sum;
}

SimilarityQ global_similarity_q(std::span<const SimilarityQ> s_q16, std::span<const std::uint16_t> w_q15) {
  if (s_q16.size() != w_q15.size()) {
    throw Error(ErrorCode::LengthMismatch, "similarity/weight length mismatch");
  }
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < s_q16.size(); ++i) {
    acc += (std::uint64_t{w_q15[i]} * s_q16[i]) >> 15;
  }
  return acc > kQ16One ? kQ16One : static_cast<SimilarityQ>(acc);
}

}  // namespace qosalloc
