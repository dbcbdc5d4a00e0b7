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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cli.hpp"
#include "qosalloc/codec.hpp"
#include "qosalloc/error.hpp"

namespace qosalloc::cli {

namespace {

constexpr double kFloatTolerance = 1e-12;
constexpr double kArgmaxGap = 1.0 / 256.0;

struct OracleScore {
  ImplId impl_id;
  double similarity = 0.0;
  double fixed_bound = 0.0;  // admissible |fixed - float| for this implementation
};

// Deliberately naive: unsorted lookups, direct division.
std::vector<OracleScore> oracle_scores(const CaseBase& cb, const RangeTable& rt, const Request& req) {
  const auto type = std::find_if(cb.entries.begin(), cb.entries.end(),
                                 [&](const FunctionTypeEntry& e) { return e.type_id == req.function_type; });
  if (type == cb.entries.end()) throw Error(ErrorCode::UnknownFunctionType, "oracle: unknown type");

  std::vector<OracleScore> out;
  for (const auto& impl : type->implementations) {
    OracleScore score{impl.impl_id, 0.0, amalgamation_error_bound(req.attributes.size())};
    for (const auto& want : req.attributes) {
      const auto range = std::find_if(rt.entries.begin(), rt.entries.end(),
                                      [&](const RangeEntry& e) { return e.id == want.id; });
      if (range == rt.entries.end()) throw Error(ErrorCode::MissingRangeEntry, "oracle: no range");
      const auto have = std::find_if(impl.attributes.begin(), impl.attributes.end(),
                                     [&](const CaseAttribute& a) { return a.id == want.id; });
      if (have == impl.attributes.end()) continue;
      const double d = std::abs(static_cast<double>(want.value) - static_cast<double>(have->value));
      const double d_max = static_cast<double>(range->upper) - static_cast<double>(range->lower);
      score.similarity += want.weight.real() * (1.0 - d / (1.0 + d_max));
      score.fixed_bound += (want.weight.real() + 0.5 / kQ15One) * local_error_bound(static_cast<std::uint32_t>(d));
    }
    out.push_back(score);
  }
  std::sort(out.begin(), out.end(), [](const OracleScore& a, const OracleScore& b) {
    if (a.similarity != b.similarity) return a.similarity > b.similarity;
    return a.impl_id < b.impl_id;
  });
  return out;
}

std::pair<CaseBase, RangeTable> load_image(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidArgument, "cannot read " + path);
  const std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return unpack_case_base(PackedImage{from_bytes(bytes)});
}

}  // namespace

std::vector<RetrievalResult> oracle_rank(const CaseBase& cb, const RangeTable& rt, const Request& req) {
  std::vector<RetrievalResult> out;
  for (const auto& s : oracle_scores(cb, rt, req)) {
    out.push_back({req.function_type, s.impl_id, s.similarity, std::nullopt});
  }
  return out;
}

OracleCheckSummary oracle_check(const OracleCheckOptions& options) {
  check_gen_spec(options.spec);
  OracleCheckSummary summary;

  std::optional<std::pair<CaseBase, RangeTable>> image;
  if (!options.image_path.empty()) image = load_image(options.image_path);

  for (std::size_t t = 0; t < options.trials; ++t) {
    const std::uint64_t seed = options.spec.seed + t;
    std::mt19937_64 rng(seed);
    auto violation = [&](const std::string& what) {
      std::ostringstream msg;
      msg << "seed " << seed << ": " << what;
      summary.violations.push_back(msg.str());
    };

    CaseBase cb;
    RangeTable rt;
    Request req;
    if (image) {
      cb = image->first;
      rt = image->second;
      req = generate_request(rng, cb, rt, options.spec.attrs_per_impl);
    } else {
      GenSpec trial = options.spec;
      trial.types = std::uniform_int_distribution<std::size_t>(1, options.spec.types)(rng);
      trial.impls_per_type = std::uniform_int_distribution<std::size_t>(1, options.spec.impls_per_type)(rng);
      trial.attrs_per_impl = std::uniform_int_distribution<std::size_t>(1, options.spec.attrs_per_impl)(rng);
      trial.attr_pool = options.spec.pool_size();
      cb = generate_case_base(trial, rng);
      RangeTable pool;
      for (std::size_t id = 1; id <= trial.pool_size(); ++id) {
        pool.entries.push_back(RangeEntry::make(AttributeId(static_cast<std::uint16_t>(id)), 0,
                                                static_cast<AttributeValue>(trial.value_bound)));
      }
      req = generate_request(rng, cb, pool, trial.attrs_per_impl);
      rt = build_range_table(std::span(&cb, 1), std::span(&req, 1));
    }
    ++summary.trials;

    const auto expected = oracle_scores(cb, rt, req);
    const auto floats = retrieve_n_best(cb, rt, req, kAllResults, 0.0, EngineKind::FloatReference).results;
    const auto fixed = retrieve_n_best(cb, rt, req, kAllResults, 0.0, EngineKind::FixedQ16).results;

    bool float_ok = floats.size() == expected.size();
    for (std::size_t k = 0; float_ok && k < floats.size(); ++k) {
      float_ok = floats[k].impl_id == expected[k].impl_id &&
                 std::abs(floats[k].similarity_f - expected[k].similarity) <= kFloatTolerance;
    }
    if (float_ok) {
      ++summary.float_matches;
    } else {
      violation("float engine disagrees with the brute-force oracle");
    }

    for (const auto& f : fixed) {
      const auto ref = std::find_if(expected.begin(), expected.end(),
                                    [&](const OracleScore& s) { return s.impl_id == f.impl_id; });
      const double dev = std::abs(f.similarity_f - ref->similarity);
      summary.max_deviation = std::max(summary.max_deviation, dev);
      if (dev > ref->fixed_bound) {
        std::ostringstream msg;
        msg << "impl " << f.impl_id.value << " fixed deviation " << dev << " exceeds bound " << ref->fixed_bound;
        violation(msg.str());
      }
    }

    const bool gap_holds =
        expected.size() == 1 || (expected.size() > 1 && expected[0].similarity - expected[1].similarity > kArgmaxGap);
    if (gap_holds) {
      ++summary.argmax_checked;
      const auto best_fixed = retrieve_most_similar(cb, rt, req, EngineKind::FixedQ16).best.impl_id;
      if (best_fixed == expected[0].impl_id) {
        ++summary.argmax_agreed;
      } else {
        violation("fixed engine picks impl " + std::to_string(best_fixed.value) + ", float picks " +
                  std::to_string(expected[0].impl_id.value));
      }
    }
  }
  return summary;
}

}  // namespace qosalloc::cli
