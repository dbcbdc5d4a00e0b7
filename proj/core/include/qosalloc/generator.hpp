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

// Seeded random libraries for sizing studies and engine cross-checks.

#include <cstdint>
#include <random>

#include "qosalloc/case_base.hpp"
#include "qosalloc/source_format.hpp"

namespace qosalloc {

struct GenSpec {
  std::uint64_t seed = 1;
  std::size_t types = 15;
  std::size_t impls_per_type = 6;
  std::size_t attrs_per_impl = 10;
  std::uint32_t value_bound = 1024;
  /// Size of the shared attribute-id pool; 0 means attrs_per_impl + 2 so that requests
  /// regularly ask for attributes an implementation lacks.
  std::size_t attr_pool = 0;
  std::size_t requests = 0;

  std::size_t pool_size() const { return attr_pool == 0 ? attrs_per_impl + 2 : attr_pool; }
};

/// Throws Error(InvalidArgument) describing the first bad field.
void check_gen_spec(const GenSpec& spec);

/// Type ids 1..types, impl ids 1..impls_per_type, attrs_per_impl ids drawn from the pool.
CaseBase generate_case_base(const GenSpec& spec, std::mt19937_64& rng);

/// A request for one of cb's function types over a random nonempty subset (at most
/// max_attrs) of the attributes in `bounds`, values drawn inside each entry's bounds and
/// weights normalized to sum to 1.
Request generate_request(std::mt19937_64& rng, const CaseBase& cb, const RangeTable& bounds,
                         std::size_t max_attrs);

/// Case-base plus spec.requests requests; the range table is built from all of them.
/// Deterministic in spec.seed.
SourceDocument generate_library(const GenSpec& spec);

}  // namespace qosalloc
