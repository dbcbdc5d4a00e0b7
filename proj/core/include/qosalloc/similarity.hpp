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

// Local and global similarity, in a floating-point reference form and a
// 16-bit fixed-point form.
//
//   local:   s = 1 - d / (1 + d_max),  d = |x_a - x_b|   (Manhattan distance)
//   global:  S = sum_i w_i * s_i,      sum_i w_i = 1
//
// Fixed-point formats: similarities Q16 (1.0 == 65536, so the exact 1.0 needs a
// 32-bit register), weights Q15 (1.0 == 32768), reciprocal of (d_max + 1) Q16
// rounded half-up and stored in one 16-bit word. The fixed path multiplies by
// the stored reciprocal and never divides; products truncate.
//
// Error bounds of the fixed path against the exact rational value:
//   local:   |s_q16/65536 - s| <= d * 0.5/65536 + 1/65536
//   global:  additional amalgamation error <= (k + 1)/32768 for k attributes

#include <cstdint>
#include <span>

#include "qosalloc/case_base.hpp"

namespace qosalloc {

using SimilarityQ = std::uint32_t;  // [0, 65536]

constexpr std::uint32_t distance(AttributeValue a, AttributeValue b) {
  return a > b ? std::uint32_t{a} - b : std::uint32_t{b} - a;
}

/// Throws Error(RangeViolation) if |x_a - x_b| > d_max.
double local_similarity_f(AttributeValue x_a, AttributeValue x_b, std::uint32_t d_max);

/// Uses range.recip_q16 as stored. Throws Error(RangeViolation) if |x_a - x_b| > range.d_max.
SimilarityQ local_similarity_q(AttributeValue x_a, AttributeValue x_b, const RangeEntry& range);

/// Throws Error(LengthMismatch).
double global_similarity_f(std::span<const double> s, std::span<const double> w);

/// Sum of floor(w_q15 * s_q16 / 32768), clamped to [0, 65536]. Throws Error(LengthMismatch).
SimilarityQ global_similarity_q(std::span<const SimilarityQ> s_q16, std::span<const std::uint16_t> w_q15);

constexpr double to_real(SimilarityQ s) { return static_cast<double>(s) / kQ16One; }

/// Worst-case deviation of local_similarity_q from the exact value at distance d.
constexpr double local_error_bound(std::uint32_t d) { return (0.5 * d + 1.0) / kQ16One; }

/// Extra error the Q15/Q16 weighted sum may add over k attributes.
constexpr double amalgamation_error_bound(std::size_t k) {
  return static_cast<double>(k + 1) / kQ15One;
}

}  // namespace qosalloc
