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

#include "qosalloc/retrieval.hpp"

#include <gtest/gtest.h>

#include <algorithm>

#include "qosalloc/error.hpp"
#include "support/instances.hpp"
#include "support/oracle.hpp"
#include "support/table1.hpp"

namespace qosalloc {
namespace {

using testing::table1_case_base;
using testing::table1_ranges;
using testing::table1_request;

constexpr double kFpga = 0.8528528528528528;  // (1 + 2/3 + 33/37) / 3
constexpr double kDsp = 0.963963963963964;    // (2 + 33/37) / 3
constexpr double kGp = 0.43043043043043044;   // (1/9 + 2/3 + 19/37) / 3

const ImplementationCase& impl_of(const CaseBase& cb, std::size_t k) { return cb.entries[0].implementations[k]; }

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorCode::InvalidArgument;
}

TEST(ScoreImplementation, Table1Float) {
  const auto cb = table1_case_base();
  const auto rt = table1_ranges();
  const auto req = table1_request();
  EXPECT_NEAR(score_implementation(impl_of(cb, 0), req, rt, EngineKind::FloatReference).similarity_f, kFpga, 1e-12);
  EXPECT_NEAR(score_implementation(impl_of(cb, 1), req, rt, EngineKind::FloatReference).similarity_f, kDsp, 1e-12);
  EXPECT_NEAR(score_implementation(impl_of(cb, 2), req, rt, EngineKind::FloatReference).similarity_f, kGp, 1e-12);
}

TEST(ScoreImplementation, Table1FixedWords) {
  const auto cb = table1_case_base();
  const auto rt = table1_ranges();
  const auto req = table1_request();
  // FPGA: 21845 + 14563 + 19484; DSP: 21845 + 21845 + 19484 (+1 each from 10923 > 32768/3);
  // GP: floor(10923*7280/32768) + floor(10923*43691/32768) + floor(10923*33658/32768).
  EXPECT_EQ(score_implementation(impl_of(cb, 0), req, rt, EngineKind::FixedQ16).similarity_q, 55894u);
  EXPECT_EQ(score_implementation(impl_of(cb, 1), req, rt, EngineKind::FixedQ16).similarity_q, 63176u);
  EXPECT_EQ(score_implementation(impl_of(cb, 2), req, rt, EngineKind::FixedQ16).similarity_q, 28209u);
}

TEST(ScoreImplementation, MissingAttributeScoresZero) {
  const Request req{FunctionTypeId(1), {{AttributeId(5), 3, Weight(1.0)}}};
  const RangeTable rt{{RangeEntry::make(AttributeId(5), 0, 10)}};
  const auto impl = impl_of(table1_case_base(), 0);
  EXPECT_EQ(score_implementation(impl, req, rt, EngineKind::FloatReference).similarity_f, 0.0);
  EXPECT_EQ(score_implementation(impl, req, rt, EngineKind::FixedQ16).similarity_q, 0u);
}

TEST(ScoreImplementation, Errors) {
  const auto impl = impl_of(table1_case_base(), 0);
  const Request req{FunctionTypeId(1), {{AttributeId(2), 3, Weight(1.0)}}};
  EXPECT_EQ(code_of([&] { score_implementation(impl, req, table1_ranges(), EngineKind::FloatReference); }),
            ErrorCode::MissingRangeEntry);

  const Request wide{FunctionTypeId(1), {{AttributeId(1), 40, Weight(1.0)}}};
  EXPECT_EQ(code_of([&] { score_implementation(impl, wide, table1_ranges(), EngineKind::FixedQ16); }),
            ErrorCode::RangeViolation);
}

TEST(RetrieveMostSimilar, Table1PicksDsp) {
  for (const auto engine : {EngineKind::FloatReference, EngineKind::FixedQ16}) {
    const auto out = retrieve_most_similar(table1_case_base(), table1_ranges(), table1_request(), engine);
    EXPECT_EQ(out.best.impl_id, ImplId(2));
    EXPECT_NEAR(out.best.similarity_f, 0.96, 0.01);
  }
}

TEST(RetrieveMostSimilar, IdentityIsOne) {
  const CaseBase cb{{FunctionTypeEntry{FunctionTypeId(4), {ImplementationCase{ImplId(9), "", {{AttributeId(1), 16}, {AttributeId(3), 1}}}}}}};
  const Request req{FunctionTypeId(4), {{AttributeId(1), 16, Weight(0.5)}, {AttributeId(3), 1, Weight(0.5)}}};
  const auto out = retrieve_most_similar(cb, table1_ranges(), req, EngineKind::FloatReference);
  EXPECT_EQ(out.best.impl_id, ImplId(9));
  EXPECT_EQ(out.best.similarity_f, 1.0);
  EXPECT_EQ(retrieve_most_similar(cb, table1_ranges(), req, EngineKind::FixedQ16).best.similarity_q, 65536u);
}

TEST(RetrieveMostSimilar, Errors) {
  auto req = table1_request();
  req.function_type = FunctionTypeId(99);
  EXPECT_EQ(code_of([&] { retrieve_most_similar(table1_case_base(), table1_ranges(), req, EngineKind::FloatReference); }),
            ErrorCode::UnknownFunctionType);
  EXPECT_EQ(code_of([&] { retrieve_n_best(table1_case_base(), table1_ranges(), req, 3, 0.0, EngineKind::FixedQ16); }),
            ErrorCode::UnknownFunctionType);

  const CaseBase empty{{FunctionTypeEntry{FunctionTypeId(1), {}}}};
  EXPECT_EQ(code_of([&] { retrieve_most_similar(empty, table1_ranges(), table1_request(), EngineKind::FloatReference); }),
            ErrorCode::EmptyImplementationList);
}

TEST(RetrieveMostSimilar, TiesGoToLowestImplId) {
  auto cb = table1_case_base();
  cb.entries[0].implementations[0].attributes = cb.entries[0].implementations[1].attributes;  // FPGA == DSP
  for (const auto engine : {EngineKind::FloatReference, EngineKind::FixedQ16}) {
    EXPECT_EQ(retrieve_most_similar(cb, table1_ranges(), table1_request(), engine).best.impl_id, ImplId(1));
    const auto ranked = retrieve_n_best(cb, table1_ranges(), table1_request(), 2, 0.0, engine).results;
    EXPECT_EQ(ranked[0].impl_id, ImplId(1));
    EXPECT_EQ(ranked[1].impl_id, ImplId(2));
  }
}

TEST(RetrieveNBest, Table1Ranking) {
  const auto out = retrieve_n_best(table1_case_base(), table1_ranges(), table1_request(), 3, 0.0,
                                   EngineKind::FloatReference);
  ASSERT_EQ(out.results.size(), 3u);
  EXPECT_EQ(out.results[0].impl_id, ImplId(2));
  EXPECT_EQ(out.results[1].impl_id, ImplId(1));
  EXPECT_EQ(out.results[2].impl_id, ImplId(3));
  EXPECT_NEAR(out.results[0].similarity_f, 0.96, 0.005);
  EXPECT_NEAR(out.results[1].similarity_f, 0.85, 0.005);
  EXPECT_NEAR(out.results[2].similarity_f, 0.43, 0.005);
}

TEST(RetrieveNBest, ThresholdRejectsLowMatch) {
  for (const auto engine : {EngineKind::FloatReference, EngineKind::FixedQ16}) {
    const auto out = retrieve_n_best(table1_case_base(), table1_ranges(), table1_request(), 3, 0.5, engine);
    ASSERT_EQ(out.results.size(), 2u);
    EXPECT_EQ(out.results[0].impl_id, ImplId(2));
    EXPECT_EQ(out.results[1].impl_id, ImplId(1));
  }
  // Keep if >= threshold.
  const auto at = retrieve_n_best(table1_case_base(), table1_ranges(), table1_request(), 3, kFpga,
                                  EngineKind::FloatReference);
  EXPECT_EQ(at.results.size(), 2u);
}

TEST(RetrieveNBest, ZeroAndBadThreshold) {
  EXPECT_TRUE(retrieve_n_best(table1_case_base(), table1_ranges(), table1_request(), 0, 0.0,
                              EngineKind::FloatReference).results.empty());
  EXPECT_EQ(code_of([] { retrieve_n_best(table1_case_base(), table1_ranges(), table1_request(), 3, 1.5,
                                         EngineKind::FloatReference); }),
            ErrorCode::InvalidArgument);
}

TEST(Properties, FloatEngineMatchesBruteForceOracle) {
  testing::InstanceGenerator gen(1);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto inst = gen.next();
    const auto expected = testing::brute_force_rank(inst.cb, inst.rt, inst.req);
    const auto got = retrieve_n_best(inst.cb, inst.rt, inst.req, kAllResults, 0.0, EngineKind::FloatReference).results;
    ASSERT_EQ(got.size(), expected.size());
    for (std::size_t k = 0; k < got.size(); ++k) {
      ASSERT_EQ(got[k].impl_id, expected[k].impl_id) << "trial " << trial;
      ASSERT_NEAR(got[k].similarity_f, expected[k].similarity, 1e-12);
    }
  }
}

TEST(Properties, LinearScan) {
  testing::InstanceGenerator gen(2);
  for (int trial = 0; trial < 500; ++trial) {
    const auto inst = gen.next();
    for (const auto& impl : inst.cb.find(inst.req.function_type)->implementations) {
      for (const auto engine : {EngineKind::FloatReference, EngineKind::FixedQ16}) {
        ScanTrace trace;
        const auto score = score_implementation(impl, inst.req, inst.rt, engine, &trace);
        ASSERT_LE(score.stats.words_read, 2 * impl.attributes.size() + 2);
        EXPECT_LE(score.stats.words_read, 2 * impl.attributes.size() + 1) << "scan reads past the terminator";
        ASSERT_TRUE(std::is_sorted(trace.cursor_positions.begin(), trace.cursor_positions.end()));
        ASSERT_TRUE(std::adjacent_find(trace.cursor_positions.begin(), trace.cursor_positions.end()) ==
                    trace.cursor_positions.end());
        ASSERT_LE(trace.cursor_positions.size(), impl.attributes.size());
      }
    }
  }
}

TEST(Properties, MissingAttributeCountsWeightWithZeroSimilarity) {
  testing::InstanceGenerator gen(3);
  int exercised = 0;
  for (int trial = 0; trial < 500; ++trial) {
    const auto inst = gen.next();
    for (const auto& impl : inst.cb.find(inst.req.function_type)->implementations) {
      for (const auto& want : inst.req.attributes) {
        const bool present = std::any_of(impl.attributes.begin(), impl.attributes.end(),
                                         [&](const CaseAttribute& a) { return a.id == want.id; });
        if (present) continue;
        ++exercised;
        // Supplying the missing attribute with the requested value adds exactly w_i * 1.
        auto completed = impl;
        completed.attributes.push_back({want.id, want.value});
        std::sort(completed.attributes.begin(), completed.attributes.end(),
                  [](const CaseAttribute& a, const CaseAttribute& b) { return a.id < b.id; });
        const double before = score_implementation(impl, inst.req, inst.rt, EngineKind::FloatReference).similarity_f;
        const double after = score_implementation(completed, inst.req, inst.rt, EngineKind::FloatReference).similarity_f;
        ASSERT_NEAR(after - before, want.weight.real(), 1e-12);
      }
    }
  }
  EXPECT_GT(exercised, 100);
}

TEST(Properties, ThresholdAndNMonotone) {
  testing::InstanceGenerator gen(4);
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = gen.next();
    for (const auto engine : {EngineKind::FloatReference, EngineKind::FixedQ16}) {
      auto prev = retrieve_n_best(inst.cb, inst.rt, inst.req, kAllResults, 0.0, engine).results;
      for (double t = 0.1; t <= 1.0; t += 0.1) {
        const auto cur = retrieve_n_best(inst.cb, inst.rt, inst.req, kAllResults, t, engine).results;
        ASSERT_LE(cur.size(), prev.size());
        ASSERT_TRUE(std::equal(cur.begin(), cur.end(), prev.begin()));
        prev = cur;
      }
      const auto all = retrieve_n_best(inst.cb, inst.rt, inst.req, kAllResults, 0.0, engine).results;
      for (std::size_t n = 0; n <= all.size(); ++n) {
        const auto head = retrieve_n_best(inst.cb, inst.rt, inst.req, n, 0.0, engine).results;
        ASSERT_EQ(head.size(), n);
        ASSERT_TRUE(std::equal(head.begin(), head.end(), all.begin()));
      }
    }
  }
}

TEST(Properties, PermutationInvariance) {
  testing::InstanceGenerator gen(5);
  for (int trial = 0; trial < 300; ++trial) {
    const auto inst = gen.next();
    const auto expected = retrieve_n_best(inst.cb, inst.rt, inst.req, kAllResults, 0.0, EngineKind::FixedQ16).results;
    auto shuffled = inst.cb;
    for (auto& e : shuffled.entries) std::shuffle(e.implementations.begin(), e.implementations.end(), gen.rng());
    // Sort-normalize as a loader would before validation.
    for (auto& e : shuffled.entries) {
      std::sort(e.implementations.begin(), e.implementations.end(),
                [](const ImplementationCase& a, const ImplementationCase& b) { return a.impl_id < b.impl_id; });
    }
    ASSERT_EQ(retrieve_n_best(shuffled, inst.rt, inst.req, kAllResults, 0.0, EngineKind::FixedQ16).results, expected);
    // Unsorted implementation lists still rank identically: selection sorts by score.
    for (auto& e : shuffled.entries) std::shuffle(e.implementations.begin(), e.implementations.end(), gen.rng());
    ASSERT_EQ(retrieve_n_best(shuffled, inst.rt, inst.req, kAllResults, 0.0, EngineKind::FixedQ16).results, expected);
  }
}

TEST(Properties, FixedFloatArgmaxAgreementAboveGap) {
  testing::InstanceGenerator gen(6);
  int checked = 0;
  for (int trial = 0; trial < 2000; ++trial) {
    const auto inst = gen.next();
    const auto ranked = testing::brute_force_rank(inst.cb, inst.rt, inst.req);
    if (ranked.size() > 1 && ranked[0].similarity - ranked[1].similarity <= 1.0 / 256) continue;
    ++checked;
    ASSERT_EQ(retrieve_most_similar(inst.cb, inst.rt, inst.req, EngineKind::FixedQ16).best.impl_id, ranked[0].impl_id)
        << "trial " << trial;
  }
  EXPECT_GT(checked, 1000);
}

// Known limit of the gap condition: near-zero similarities on wide ranges. Here
// d = 810 and d_max = 813: the float engine scores 4/814 ~ 0.0049 (a gap above
// 2^-8 over the implementation lacking the attribute), while 810 * round(65536/814)
// exceeds 65536 and the fixed value clamps to 0, tying both candidates.
TEST(Properties, FixedFloatCanDisagreeWhenAllScoresAreNearZero) {
  const CaseBase cb{{FunctionTypeEntry{FunctionTypeId(2),
                                       {ImplementationCase{ImplId(1), "", {{AttributeId(5), 677}}},
                                        ImplementationCase{ImplId(6), "", {{AttributeId(10), 1022}}}}}}};
  const RangeTable rt{{RangeEntry::make(AttributeId(5), 30, 999), RangeEntry::make(AttributeId(10), 209, 1022)}};
  const Request req{FunctionTypeId(2), {{AttributeId(10), 212, Weight(1.0)}}};

  const auto f = retrieve_most_similar(cb, rt, req, EngineKind::FloatReference).best;
  const auto q = retrieve_most_similar(cb, rt, req, EngineKind::FixedQ16).best;
  EXPECT_EQ(f.impl_id, ImplId(6));
  EXPECT_GT(f.similarity_f, 1.0 / 256);
  EXPECT_EQ(q.similarity_q, 0u);
  EXPECT_EQ(q.impl_id, ImplId(1));
  EXPECT_LE(f.similarity_f - q.similarity_f, local_error_bound(810));
}

}  // namespace
}  // namespace qosalloc
