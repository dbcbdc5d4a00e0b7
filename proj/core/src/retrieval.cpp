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

#include <algorithm>
#include <string>

#include "qosalloc/error.hpp"

namespace qosalloc {

namespace {

// Range entries for each requested attribute, found with one forward pass over the
// sorted range table.
std::vector<const RangeEntry*> resolve_ranges(const Request& req, const RangeTable& rt,
                                              RetrievalStats& stats) {
  std::vector<const RangeEntry*> out;
  out.reserve(req.attributes.size());
  std::size_t cursor = 0;
  for (std::size_t k = 0; k < req.attributes.size(); ++k) {
    const AttributeId want = req.attributes[k].id;
    if (k > 0 && !(req.attributes[k - 1].id < want)) {
      throw Error(ErrorCode::OrderingError, "request attributes are not strictly ascending");
    }
    while (cursor < rt.entries.size()) {
      ++stats.words_read;
      ++stats.comparisons;
      if (!(rt.entries[cursor].id < want)) break;
      ++cursor;
    }
    if (cursor == rt.entries.size() || rt.entries[cursor].id != want) {
      throw Error(ErrorCode::MissingRangeEntry,
                  "requested attribute " + std::to_string(want.value) + " has no range entry");
    }
    stats.words_read += 3;  // lower, upper, reciprocal
    out.push_back(&rt.entries[cursor]);
  }
  return out;
}

ImplementationScore score_resolved(const ImplementationCase& impl, const Request& req,
                                   const std::vector<const RangeEntry*>& ranges, EngineKind engine,
                                   ScanTrace* trace) {
  ImplementationScore score;
  RetrievalStats& stats = score.stats;
  const auto& attrs = impl.attributes;
  const std::size_t k = req.attributes.size();

  std::vector<double> s_f(k, 0.0);
  std::vector<double> w_f(k, 0.0);
  std::vector<SimilarityQ> s_q(k, 0);
  std::vector<std::uint16_t> w_q(k, 0);

  // The id word under the cursor is read once per entry; the terminator is read
  // once when the cursor reaches it.
  std::size_t cursor = 0;
  bool loaded = false;
  auto load = [&] {
    if (!loaded) {
      ++stats.words_read;
      loaded = true;
    }
  };
  auto advance = [&] {
    ++cursor;
    loaded = false;
    if (trace != nullptr) trace->cursor_positions.push_back(cursor);
  };

  for (std::size_t i = 0; i < k; ++i) {
    const auto& want = req.attributes[i];
    w_f[i] = want.weight.real();
    if (engine == EngineKind::FixedQ16) w_q[i] = want.weight.q15();

    while (true) {
      load();
      if (cursor == attrs.size()) break;
      ++stats.comparisons;
      if (!(attrs[cursor].id < want.id)) break;
      advance();
    }
    if (cursor == attrs.size() || attrs[cursor].id != want.id) continue;  // missing: s_i = 0

    ++stats.words_read;  // value word
    const RangeEntry& range = *ranges[i];
    if (engine == EngineKind::FixedQ16) {
      s_q[i] = local_similarity_q(want.value, attrs[cursor].value, range);
    } else {
      s_f[i] = local_similarity_f(want.value, attrs[cursor].value, range.d_max);
    }
    stats.multiplications += 2;  // reciprocal scaling and weighting
    advance();
  }

  if (engine == EngineKind::FixedQ16) {
    score.similarity_q = global_similarity_q(s_q, w_q);
    score.similarity_f = to_real(*score.similarity_q);
  } else {
    score.similarity_f = global_similarity_f(s_f, w_f);
  }
  return score;
}

const FunctionTypeEntry& find_type(const CaseBase& cb, FunctionTypeId type_id, RetrievalStats& stats) {
  for (const auto& entry : cb.entries) {
    stats.words_read += 2;
    ++stats.comparisons;
    if (entry.type_id == type_id) return entry;
    if (type_id < entry.type_id) break;
  }
  throw Error(ErrorCode::UnknownFunctionType,
              "function type " + std::to_string(type_id.value) + " can not be served");
}

bool ranks_before(const RetrievalResult& a, const RetrievalResult& b) {
  if (a.similarity_q && b.similarity_q && *a.similarity_q != *b.similarity_q) {
    return *a.similarity_q > *b.similarity_q;
  }
  if (!a.similarity_q && a.similarity_f != b.similarity_f) return a.similarity_f > b.similarity_f;
  return a.impl_id < b.impl_id;
}

std::vector<RetrievalResult> score_all(const FunctionTypeEntry& entry, const Request& req,
                                       const RangeTable& rt, EngineKind engine, RetrievalStats& stats) {
  const auto ranges = resolve_ranges(req, rt, stats);
  std::vector<RetrievalResult> out;
  out.reserve(entry.implementations.size());
  for (const auto& impl : entry.implementations) {
    stats.words_read += 2;  // impl id and attribute-list pointer
    const auto score = score_resolved(impl, req, ranges, engine, nullptr);
    stats += score.stats;
    out.push_back({entry.type_id, impl.impl_id, score.similarity_f, score.similarity_q});
  }
  ++stats.words_read;  // implementation-list terminator
  return out;
}

}  // namespace

ImplementationScore score_implementation(const ImplementationCase& impl, const Request& req,
                                         const RangeTable& rt, EngineKind engine, ScanTrace* trace) {
  RetrievalStats range_stats;
  const auto ranges = resolve_ranges(req, rt, range_stats);
  return score_resolved(impl, req, ranges, engine, trace);
}

MostSimilar retrieve_most_similar(const CaseBase& cb, const RangeTable& rt, const Request& req,
                                  EngineKind engine) {
  MostSimilar out;
  const auto& entry = find_type(cb, req.function_type, out.stats);
  if (entry.implementations.empty()) {
    throw Error(ErrorCode::EmptyImplementationList,
                "function type " + std::to_string(entry.type_id.value) + " has no implementations");
  }
  const auto scored = score_all(entry, req, rt, engine, out.stats);
  out.best = scored.front();
  for (const auto& r : scored) {
    ++out.stats.comparisons;
    if (ranks_before(r, out.best)) out.best = r;
  }
  return out;
}

RankedResults retrieve_n_best(const CaseBase& cb, const RangeTable& rt, const Request& req,
                              std::size_t n, double threshold, EngineKind engine) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "threshold must lie in [0, 1]");
  }
  RankedResults out;
  const auto& entry = find_type(cb, req.function_type, out.stats);
  auto scored = score_all(entry, req, rt, engine, out.stats);

  std::erase_if(scored, [&](const RetrievalResult& r) { return r.similarity_f < threshold; });
  std::sort(scored.begin(), scored.end(), ranks_before);
  if (scored.size() > n) scored.resize(n);
  out.results = std::move(scored);
  return out;
}

}  // namespace qosalloc
