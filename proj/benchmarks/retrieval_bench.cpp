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


#include <benchmark/benchmark.h>

#include "qosalloc/codec.hpp"
#include "qosalloc/generator.hpp"
#include "qosalloc/retrieval.hpp"

namespace {

using namespace qosalloc;

// 15 types x 6 implementations x 10 attributes, one 10-attribute request.
const SourceDocument& library() {
  static const SourceDocument doc = generate_library(
      GenSpec{.seed = 7, .types = 15, .impls_per_type = 6, .attrs_per_impl = 10, .requests = 1});
  return doc;
}

void BM_MostSimilar(benchmark::State& state, EngineKind engine) {
  const auto& doc = library();
  std::uint64_t words = 0;
  for (auto _ : state) {
    const auto r = retrieve_most_similar(doc.case_base, doc.ranges, doc.requests.front(), engine);
    words += r.stats.words_read;
    benchmark::DoNotOptimize(r);
  }
  state.counters["words/query"] = benchmark::Counter(static_cast<double>(words), benchmark::Counter::kAvgIterations);
}
BENCHMARK_CAPTURE(BM_MostSimilar, float, EngineKind::FloatReference);
BENCHMARK_CAPTURE(BM_MostSimilar, fixed, EngineKind::FixedQ16);

void BM_NBest(benchmark::State& state) {
  const auto& doc = library();
  const auto n = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(retrieve_n_best(doc.case_base, doc.ranges, doc.requests.front(), n, 0.0,
                                             EngineKind::FixedQ16));
  }
}
BENCHMARK(BM_NBest)->Arg(1)->Arg(3)->Arg(6);

void BM_Pack(benchmark::State& state) {
  const auto& doc = library();
  for (auto _ : state) benchmark::DoNotOptimize(pack_case_base(doc.case_base, doc.ranges));
}
BENCHMARK(BM_Pack);

void BM_Unpack(benchmark::State& state) {
  const auto image = pack_case_base(library().case_base, library().ranges);
  for (auto _ : state) benchmark::DoNotOptimize(unpack_case_base(image));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * image.size_bytes()));
}
BENCHMARK(BM_Unpack);

}  // namespace

BENCHMARK_MAIN();
