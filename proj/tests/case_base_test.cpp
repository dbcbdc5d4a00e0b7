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

#include "qosalloc/case_base.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "qosalloc/error.hpp"
#include "support/instances.hpp"
#include "support/table1.hpp"

namespace qosalloc {
namespace {

using testing::table1_case_base;
using testing::table1_ranges;
using testing::table1_request;

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

TEST(ValidateCaseBase, Table1IsValid) {
  EXPECT_TRUE(validate_case_base(table1_case_base()).ok());
}

TEST(ValidateCaseBase, DescendingAttributeIdsGiveOneOrderingViolation) {
  auto cb = table1_case_base();
  auto& attrs = cb.entries[0].implementations[1].attributes;
  attrs = {{AttributeId(4), 44}, {AttributeId(3), 1}};
  const auto report = validate_case_base(cb);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].kind, Violation::Kind::Ordering);
  EXPECT_EQ(report.violations[0].path, "type 1 / impl 2 / attr 3");
}

TEST(ValidateCaseBase, DuplicateImplIdGivesOneDuplicateViolation) {
  auto cb = table1_case_base();
  cb.entries[0].implementations[2].impl_id = ImplId(2);
  const auto report = validate_case_base(cb);
  ASSERT_EQ(report.violations.size(), 1u);
  EXPECT_EQ(report.violations[0].kind, Violation::Kind::DuplicateId);
}

TEST(ValidateCaseBase, ReservedAndEmpty) {
  CaseBase cb{{FunctionTypeEntry{FunctionTypeId(0), {}}}};
  const auto report = validate_case_base(cb);
  EXPECT_EQ(report.count(Violation::Kind::ReservedId), 1u);
  EXPECT_EQ(report.count(Violation::Kind::EmptyList), 1u);
}

TEST(ValidateCaseBase, GlobalImplIdsAreOptional) {
  auto cb = table1_case_base();
  auto second = cb.entries[0];
  second.type_id = FunctionTypeId(2);
  cb.entries.push_back(second);
  EXPECT_TRUE(validate_case_base(cb).ok());
  EXPECT_EQ(validate_case_base(cb, {.require_global_impl_ids = true}).count(Violation::Kind::DuplicateId), 3u);
}

TEST(ValidateRequest, StrictAcceptsThirds) {
  const auto req = table1_request();
  EXPECT_EQ(validate_request(req, WeightPolicy::Strict), req);
}

TEST(ValidateRequest, NormalizeRescalesUniformly) {
  auto req = table1_request();
  for (auto& a : req.attributes) a.weight = Weight(2.0);
  const auto out = validate_request(req, WeightPolicy::Normalize);
  for (const auto& a : out.attributes) EXPECT_DOUBLE_EQ(a.weight.real(), 1.0 / 3.0);
}

TEST(ValidateRequest, Errors) {
  Request short_sum{FunctionTypeId(1), {{AttributeId(1), 0, Weight(0.5)}, {AttributeId(2), 0, Weight(0.1)}}};
  EXPECT_EQ(code_of([&] { validate_request(short_sum, WeightPolicy::Strict); }), ErrorCode::WeightSumError);

  Request zeros{FunctionTypeId(1), {{AttributeId(1), 0, Weight(0.0)}}};
  EXPECT_EQ(code_of([&] { validate_request(zeros, WeightPolicy::Normalize); }), ErrorCode::ZeroWeightSum);

  Request unsorted{FunctionTypeId(1), {{AttributeId(3), 0, Weight(0.5)}, {AttributeId(1), 0, Weight(0.5)}}};
  EXPECT_EQ(code_of([&] { validate_request(unsorted, WeightPolicy::Strict); }), ErrorCode::OrderingError);

  Request empty{FunctionTypeId(1), {}};
  EXPECT_EQ(code_of([&] { validate_request(empty, WeightPolicy::Strict); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(code_of([] { Weight(-0.1); }), ErrorCode::InvalidArgument);
}

TEST(ValidateRequest, StrictToleranceEdge) {
  Request req{FunctionTypeId(1), {{AttributeId(1), 0, Weight(0.5)}, {AttributeId(2), 0, Weight(0.5 + 1.0 / 1024)}}};
  EXPECT_NO_THROW(validate_request(req, WeightPolicy::Strict));
  req.attributes[1].weight = Weight(0.5 + 1.0 / 512);
  EXPECT_THROW(validate_request(req, WeightPolicy::Strict), Error);
}

TEST(Weight, Q15View) {
  EXPECT_EQ(Weight(1.0 / 3.0).q15(), 10923);
  EXPECT_EQ(Weight(1.0).q15(), 32768);
  EXPECT_EQ(Weight(0.0).q15(), 0);
  EXPECT_THROW(Weight(1.5).q15(), Error);
  // Thirds round up and overshoot by one unit, inside the per-attribute tolerance.
  EXPECT_TRUE(q15_weight_sum_ok(table1_request()));
}

TEST(BuildRangeTable, Table1Attribute1) {
  const auto cb = table1_case_base();
  const auto req = table1_request();
  const auto rt = build_range_table(std::span(&cb, 1), std::span(&req, 1));
  const auto* e = rt.find(AttributeId(1));
  ASSERT_NE(e, nullptr);
  EXPECT_EQ(e->lower, 8);
  EXPECT_EQ(e->upper, 16);
  EXPECT_EQ(e->d_max, 8);
}

TEST(BuildRangeTable, Table1Attribute4DiffersFromDesignTable) {
  const auto cb = table1_case_base();
  const auto req = table1_request();
  const auto rt = build_range_table(std::span(&cb, 1), std::span(&req, 1));
  // 44 - 22 from the tree alone; the design-global table says 36.
  EXPECT_EQ(rt.find(AttributeId(4))->d_max, 22);
  EXPECT_EQ(table1_ranges().find(AttributeId(4))->d_max, 36);
}

TEST(BuildRangeTable, DegenerateRange) {
  CaseBase cb{{FunctionTypeEntry{FunctionTypeId(1), {ImplementationCase{ImplId(1), "", {{AttributeId(7), 5}}}}}}};
  const auto rt = build_range_table(std::span(&cb, 1), {});
  ASSERT_EQ(rt.entries.size(), 1u);
  EXPECT_EQ(rt.entries[0], (RangeEntry{AttributeId(7), 5, 5, 0, 0}));
}

TEST(RangeEntry, ReciprocalWords) {
  EXPECT_EQ(RangeEntry::make(AttributeId(4), 8, 44).recip_q16, 1771);
  EXPECT_EQ(RangeEntry::make(AttributeId(1), 8, 16).recip_q16, 7282);
  EXPECT_EQ(RangeEntry::make(AttributeId(1), 0, 1).recip_q16, 32768);
  EXPECT_EQ(RangeEntry::make(AttributeId(1), 0, 65535).recip_q16, 1);
  EXPECT_THROW(RangeEntry::make(AttributeId(1), 9, 8), Error);
}

TEST(RangeEntry, ReciprocalWithinHalfUnitForEveryDmax) {
  for (std::uint32_t d_max = 1; d_max <= 65535; ++d_max) {
    const auto r = reciprocal_q16(static_cast<std::uint16_t>(d_max));
    ASSERT_GE(r, 1);
    ASSERT_LE(r, 32768);
    // |r - 65536/(d_max+1)| <= 1/2, in integers.
    const std::int64_t diff = 2 * std::int64_t{r} * (d_max + 1) - 2 * 65536;
    ASSERT_LE(std::abs(diff), std::int64_t{d_max} + 1) << d_max;
  }
}

TEST(BuildRangeTable, OrderInsensitiveAndCovering) {
  testing::InstanceGenerator gen(7);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<CaseBase> cbs{gen.next().cb, gen.next().cb, gen.next().cb};
    std::vector<Request> reqs{gen.next().req, gen.next().req};
    const auto rt = build_range_table(cbs, reqs);

    std::shuffle(cbs.begin(), cbs.end(), gen.rng());
    std::shuffle(reqs.begin(), reqs.end(), gen.rng());
    ASSERT_EQ(build_range_table(cbs, reqs), rt);

    ASSERT_TRUE(validate_range_table(rt).ok());
    for (const auto& cb : cbs) ASSERT_TRUE(validate_range_table(rt, &cb, reqs).ok());
  }
}

TEST(ValidateRangeTable, FlagsStaleReciprocalAndCoverage) {
  auto rt = table1_ranges();
  rt.entries[2].recip_q16 = 1000;
  const auto cb = table1_case_base();
  EXPECT_EQ(validate_range_table(rt, &cb).count(Violation::Kind::StaleDerived), 1u);

  RangeTable narrow{{RangeEntry::make(AttributeId(1), 8, 15)}};
  const auto report = validate_range_table(narrow, &cb);
  EXPECT_EQ(report.count(Violation::Kind::OutOfRange), 2u);    // two impls at 16
  EXPECT_EQ(report.count(Violation::Kind::MissingRange), 6u);  // attributes 3 and 4
}

}  // namespace
}  // namespace qosalloc
