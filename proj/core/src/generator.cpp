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

#include "qosalloc/generator.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "qosalloc/error.hpp"

namespace qosalloc {

namespace {

constexpr std::size_t kMaxId = 65535;

std::size_t uniform_index(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// k distinct ids from 1..pool, ascending.
std::vector<std::uint16_t> sample_ids(std::mt19937_64& rng, std::size_t pool, std::size_t k) {
  std::vector<std::uint16_t> all(pool);
  std::iota(all.begin(), all.end(), std::uint16_t{1});
  std::vector<std::uint16_t> out;
  out.reserve(k);
  std::sample(all.begin(), all.end(), std::back_inserter(out), static_cast<std::ptrdiff_t>(k), rng);
  return out;
}

}  // namespace

void check_gen_spec(const GenSpec& spec) {
  auto fail = [](const std::string& msg) { throw Error(ErrorCode::InvalidArgument, msg); };
  if (spec.types < 1 || spec.types > kMaxId) fail("types must lie in [1, 65535]");
  if (spec.impls_per_type < 1 || spec.impls_per_type > kMaxId) fail("impls_per_type must lie in [1, 65535]");
  if (spec.attrs_per_impl < 1) fail("attrs_per_impl must be at least 1");
  if (spec.value_bound > 65535) fail("value_bound must not exceed 65535");
  if (spec.pool_size() < spec.attrs_per_impl || spec.pool_size() > kMaxId) {
    fail("attr_pool must lie in [attrs_per_impl, 65535]");
  }
}

CaseBase generate_case_base(const GenSpec& spec, std::mt19937_64& rng) {
  check_gen_spec(spec);
  std::uniform_int_distribution<std::uint32_t> value(0, spec.value_bound);
  CaseBase cb;
  cb.entries.reserve(spec.types);
  for (std::size_t t = 1; t <= spec.types; ++t) {
    FunctionTypeEntry entry{FunctionTypeId(static_cast<std::uint16_t>(t)), {}};
    for (std::size_t i = 1; i <= spec.impls_per_type; ++i) {
      ImplementationCase impl;
      impl.impl_id = ImplId(static_cast<std::uint16_t>(i));
      for (const auto id : sample_ids(rng, spec.pool_size(), spec.attrs_per_impl)) {
        impl.attributes.push_back({AttributeId(id), static_cast<AttributeValue>(value(rng))});
      }
      entry.implementations.push_back(std::move(impl));
    }
    cb.entries.push_back(std::move(entry));
  }
  return cb;
}

Request generate_request(std::mt19937_64& rng, const CaseBase& cb, const RangeTable& bounds,
                         std::size_t max_attrs) {
  if (cb.entries.empty() || bounds.entries.empty() || max_attrs == 0) {
    throw Error(ErrorCode::InvalidArgument, "cannot draw a request from an empty library");
  }
  Request req;
  req.function_type = cb.entries[uniform_index(rng, 0, cb.entries.size() - 1)].type_id;

  const std::size_t k = uniform_index(rng, 1, std::min(max_attrs, bounds.entries.size()));
  std::vector<std::size_t> picks;
  std::vector<std::size_t> all(bounds.entries.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  std::sample(all.begin(), all.end(), std::back_inserter(picks), static_cast<std::ptrdiff_t>(k), rng);

  std::vector<double> raw;
  for (const auto p : picks) {
    const auto& e = bounds.entries[p];
    const auto v = std::uniform_int_distribution<std::uint32_t>(e.lower, e.upper)(rng);
    raw.push_back(static_cast<double>(uniform_index(rng, 1, 100)));
    req.attributes.push_back({e.id, static_cast<AttributeValue>(v), Weight(raw.back())});
  }
  return validate_request(req, WeightPolicy::Normalize);
}

SourceDocument generate_library(const GenSpec& spec) {
  check_gen_spec(spec);
  std::mt19937_64 rng(spec.seed);
  SourceDocument doc;
  doc.case_base = generate_case_base(spec, rng);

  RangeTable pool_bounds;
  for (std::size_t id = 1; id <= spec.pool_size(); ++id) {
    pool_bounds.entries.push_back(RangeEntry::make(AttributeId(static_cast<std::uint16_t>(id)), 0,
                                                   static_cast<AttributeValue>(spec.value_bound)));
  }
  for (std::size_t r = 0; r < spec.requests; ++r) {
    doc.requests.push_back(generate_request(rng, doc.case_base, pool_bounds, spec.attrs_per_impl));
  }
  const CaseBase* cbs = &doc.case_base;
  doc.ranges = build_range_table(std::span(cbs, 1), doc.requests);
  return doc;
}

}  // namespace qosalloc
