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

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "qosalloc/error.hpp"

namespace qosalloc {

Weight::Weight(double real) : real_(real) {
  if (!std::isfinite(real) || real < 0.0) {
    throw Error(ErrorCode::InvalidArgument, "weight must be finite and non-negative");
  }
}

Weight Weight::from_q15(std::uint16_t q15) {
  Weight w;
  w.real_ = static_cast<double>(q15) / kQ15One;
  return w;
}

std::uint16_t Weight::q15() const {
  if (real_ > 1.0) throw Error(ErrorCode::InvalidArgument, "weight above 1 has no Q15 form");
  return static_cast<std::uint16_t>(std::floor(real_ * kQ15One + 0.5));
}

const FunctionTypeEntry* CaseBase::find(FunctionTypeId type_id) const {
  for (const auto& entry : entries) {
    if (entry.type_id == type_id) return &entry;
  }
  return nullptr;
}

RangeEntry RangeEntry::make(AttributeId id, AttributeValue lower, AttributeValue upper) {
  if (lower > upper) {
    throw Error(ErrorCode::InvalidRange,
                "attribute " + std::to_string(id.value) + ": lower bound above upper bound");
  }
  RangeEntry e;
  e.id = id;
  e.lower = lower;
  e.upper = upper;
  e.d_max = static_cast<std::uint16_t>(upper - lower);
  e.recip_q16 = reciprocal_q16(e.d_max);
  return e;
}

const RangeEntry* RangeTable::find(AttributeId id) const {
  auto it = std::lower_bound(entries.begin(), entries.end(), id,
                             [](const RangeEntry& e, AttributeId key) { return e.id < key; });
  if (it == entries.end() || it->id != id) return nullptr;
  return &*it;
}

std::string_view to_string(Violation::Kind kind) noexcept {
  switch (kind) {
    case Violation::Kind::Ordering: return "ordering";
    case Violation::Kind::DuplicateId: return "duplicate id";
    case Violation::Kind::ReservedId: return "reserved id";
    case Violation::Kind::EmptyList: return "empty list";
    case Violation::Kind::InvalidBounds: return "invalid bounds";
    case Violation::Kind::StaleDerived: return "stale derived value";
    case Violation::Kind::MissingRange: return "missing range";
    case Violation::Kind::OutOfRange: return "out of range";
  }
  return "unknown";
}

std::size_t ValidationReport::count(Violation::Kind kind) const {
  return static_cast<std::size_t>(std::count_if(violations.begin(), violations.end(),
                                                [kind](const Violation& v) { return v.kind == kind; }));
}

namespace {

std::string type_path(FunctionTypeId t) { return "type " + std::to_string(t.value); }

std::string impl_path(FunctionTypeId t, ImplId i) {
  return type_path(t) + " / impl " + std::to_string(i.value);
}

// Flags null ids, duplicates and descending neighbours in one ID sequence.
template <class Seq, class GetId>
void check_ids(const Seq& seq, GetId get_id, const std::string& path, std::string_view what,
               ValidationReport& report) {
  for (std::size_t k = 0; k < seq.size(); ++k) {
    const auto id = get_id(seq[k]);
    const std::string here = path.empty() ? std::string(what) + " " + std::to_string(id.value)
                                          : path + " / " + std::string(what) + " " +
                                                std::to_string(id.value);
    if (id.is_null()) {
      report.violations.push_back({Violation::Kind::ReservedId, here, "id 0 is reserved"});
    }
    if (k == 0) continue;
    const auto prev = get_id(seq[k - 1]);
    if (id == prev) {
      report.violations.push_back({Violation::Kind::DuplicateId, here, "id appears twice"});
    } else if (id < prev) {
      report.violations.push_back({Violation::Kind::Ordering, here,
                                   "follows " + std::string(what) + " " + std::to_string(prev.value)});
    }
  }
}

}  // namespace

ValidationReport validate_case_base(const CaseBase& cb, CaseBaseCheckOptions options) {
  ValidationReport report;
  check_ids(cb.entries, [](const FunctionTypeEntry& e) { return e.type_id; }, "", "type", report);

  std::set<ImplId> global_ids;
  for (const auto& entry : cb.entries) {
    const auto tpath = type_path(entry.type_id);
    if (entry.implementations.empty()) {
      report.violations.push_back({Violation::Kind::EmptyList, tpath, "no implementations"});
    }
    check_ids(entry.implementations, [](const ImplementationCase& c) { return c.impl_id; }, tpath,
              "impl", report);
    for (const auto& impl : entry.implementations) {
      check_ids(impl.attributes, [](const CaseAttribute& a) { return a.id; },
                impl_path(entry.type_id, impl.impl_id), "attr", report);
      if (options.require_global_impl_ids && !global_ids.insert(impl.impl_id).second) {
        report.violations.push_back({Violation::Kind::DuplicateId,
                                     impl_path(entry.type_id, impl.impl_id),
                                     "implementation id is not globally unique"});
      }
    }
  }
  return report;
}

ValidationReport validate_range_table(const RangeTable& rt, const CaseBase* cb,
                                      std::span<const Request> requests) {
  ValidationReport report;
  check_ids(rt.entries, [](const RangeEntry& e) { return e.id; }, "", "range", report);
  for (const auto& e : rt.entries) {
    const std::string path = "range " + std::to_string(e.id.value);
    if (e.lower > e.upper) {
      report.violations.push_back({Violation::Kind::InvalidBounds, path, "lower above upper"});
      continue;
    }
    if (e.d_max != e.upper - e.lower) {
      report.violations.push_back({Violation::Kind::StaleDerived, path, "d_max != upper - lower"});
    }
    if (e.recip_q16 != reciprocal_q16(e.d_max)) {
      report.violations.push_back({Violation::Kind::StaleDerived, path,
                                   "recip_q16 " + std::to_string(e.recip_q16) + " != expected " +
                                       std::to_string(reciprocal_q16(e.d_max))});
    }
  }

  auto check_value = [&](AttributeId id, AttributeValue value, const std::string& path) {
    const RangeEntry* e = rt.find(id);
    if (e == nullptr) {
      report.violations.push_back({Violation::Kind::MissingRange, path, "no range entry"});
    } else if (value < e->lower || value > e->upper) {
      report.violations.push_back({Violation::Kind::OutOfRange, path,
                                   "value " + std::to_string(value) + " outside [" +
                                       std::to_string(e->lower) + ", " + std::to_string(e->upper) + "]"});
    }
  };

  if (cb != nullptr) {
    for (const auto& entry : cb->entries) {
      for (const auto& impl : entry.implementations) {
        for (const auto& a : impl.attributes) {
          check_value(a.id, a.value,
                      impl_path(entry.type_id, impl.impl_id) + " / attr " + std::to_string(a.id.value));
        }
      }
    }
  }
  for (std::size_t r = 0; r < requests.size(); ++r) {
    for (const auto& a : requests[r].attributes) {
      check_value(a.id, a.value,
                  "request " + std::to_string(r) + " / want " + std::to_string(a.id.value));
    }
  }
  return report;
}

Request validate_request(const Request& req, WeightPolicy policy) {
  if (req.attributes.empty()) {
    throw Error(ErrorCode::InvalidArgument, "request has no attributes");
  }
  if (req.function_type.is_null()) {
    throw Error(ErrorCode::InvalidArgument, "function type id 0 is reserved");
  }
  double sum = 0.0;
  for (std::size_t k = 0; k < req.attributes.size(); ++k) {
    const auto& a = req.attributes[k];
    if (a.id.is_null()) throw Error(ErrorCode::InvalidArgument, "attribute id 0 is reserved");
    if (k > 0 && !(req.attributes[k - 1].id < a.id)) {
      throw Error(ErrorCode::OrderingError,
                  "request attribute " + std::to_string(a.id.value) + " is not strictly ascending");
    }
    sum += a.weight.real();
  }

  if (policy == WeightPolicy::Strict) {
    if (std::abs(sum - 1.0) > kWeightSumTolerance) {
      throw Error(ErrorCode::WeightSumError, "weights sum to " + std::to_string(sum));
    }
    for (const auto& a : req.attributes) {
      if (a.weight.real() > 1.0) throw Error(ErrorCode::InvalidArgument, "weight above 1");
    }
    return req;
  }

  if (sum <= 0.0) throw Error(ErrorCode::ZeroWeightSum, "cannot normalize zero weights");
  Request out = req;
  for (auto& a : out.attributes) a.weight = Weight(std::min(1.0, a.weight.real() / sum));
  return out;
}

bool q15_weight_sum_ok(const Request& req) {
  std::int64_t sum = 0;
  for (const auto& a : req.attributes) sum += a.weight.q15();
  const auto dev = sum - static_cast<std::int64_t>(kQ15One);
  return (dev < 0 ? -dev : dev) <= static_cast<std::int64_t>(req.attributes.size());
}

RangeTable build_range_table(std::span<const CaseBase> cbs, std::span<const Request> extra_requests) {
  std::map<AttributeId, std::pair<AttributeValue, AttributeValue>> bounds;
  auto observe = [&](AttributeId id, AttributeValue v) {
    auto [it, inserted] = bounds.try_emplace(id, v, v);
    if (!inserted) {
      it->second.first = std::min(it->second.first, v);
      it->second.second = std::max(it->second.second, v);
    }
  };
  for (const auto& cb : cbs) {
    for (const auto& entry : cb.entries) {
      for (const auto& impl : entry.implementations) {
        for (const auto& a : impl.attributes) observe(a.id, a.value);
      }
    }
  }
  for (const auto& req : extra_requests) {
    for (const auto& a : req.attributes) observe(a.id, a.value);
  }

  RangeTable rt;
  rt.entries.reserve(bounds.size());
  for (const auto& [id, lu] : bounds) rt.entries.push_back(RangeEntry::make(id, lu.first, lu.second));
  return rt;
}

}  // namespace qosalloc
