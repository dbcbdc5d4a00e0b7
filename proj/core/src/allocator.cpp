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

#include "qosalloc/allocator.hpp"

#include <algorithm>
#include <charconv>
#include <sstream>

#include "qosalloc/error.hpp"

namespace qosalloc {

bool ResourceSnapshot::feasible(FunctionTypeId type_id, ImplId impl_id) const {
  const auto d = demand.find({type_id, impl_id});
  if (d == demand.end()) return true;
  const auto c = capacity.find(d->second.device_class);
  const std::uint64_t available = c == capacity.end() ? 0 : c->second;
  return d->second.units <= available;
}

namespace {

template <class T>
T parse_uint(const std::string& tok, std::size_t line, const char* what) {
  T v{};
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw SyntaxError(line, std::string(what) + " '" + tok + "' is not an unsigned integer");
  }
  return v;
}

}  // namespace

ResourceSnapshot parse_snapshot(std::string_view text) {
  ResourceSnapshot snap;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    std::istringstream ls(line);
    std::vector<std::string> toks;
    for (std::string t; ls >> t;) toks.push_back(t);
    if (toks.empty()) continue;

    if (toks[0] == "capacity" && toks.size() == 3) {
      snap.capacity[toks[1]] = parse_uint<std::uint64_t>(toks[2], line_no, "capacity");
    } else if (toks[0] == "demand" && toks.size() == 5) {
      const auto type_id = parse_uint<std::uint16_t>(toks[1], line_no, "type id");
      const auto impl_id = parse_uint<std::uint16_t>(toks[2], line_no, "impl id");
      if (type_id == 0 || impl_id == 0) throw SyntaxError(line_no, "id 0 is reserved");
      snap.demand[{FunctionTypeId(type_id), ImplId(impl_id)}] =
          Demand{toks[3], parse_uint<std::uint64_t>(toks[4], line_no, "demand")};
    } else {
      throw SyntaxError(line_no, "expected 'capacity <class> <units>' or "
                                 "'demand <type_id> <impl_id> <class> <units>'");
    }
  }
  return snap;
}

TokenStatus check_token(const BypassToken& token, const CaseBase& cb, const ResourceSnapshot& snapshot) {
  const FunctionTypeEntry* entry = cb.find(token.type_id);
  if (entry == nullptr) return TokenStatus::Stale;
  const bool exists = std::any_of(entry->implementations.begin(), entry->implementations.end(),
                                  [&](const ImplementationCase& c) { return c.impl_id == token.impl_id; });
  if (!exists) return TokenStatus::Stale;
  return snapshot.feasible(token.type_id, token.impl_id) ? TokenStatus::Valid : TokenStatus::Stale;
}

AllocationDecision AllocationManager::allocate(const CaseBase& cb, const RangeTable& rt, const Request& req,
                                               const ResourceSnapshot& snapshot, std::size_t n,
                                               double threshold, EngineKind engine) {
  auto ranked = retrieve_n_best(cb, rt, req, n, threshold, engine);

  AllocationDecision decision;
  decision.stats = ranked.stats;
  for (auto& r : ranked.results) {
    if (!snapshot.feasible(r.type_id, r.impl_id)) {
      decision.rejected_infeasible.push_back(r.impl_id);
    } else if (!decision.chosen) {
      decision.chosen = r;
    } else {
      decision.alternatives.push_back(r);
    }
  }

  std::lock_guard lock(mutex_);
  if (decision.chosen) {
    decision.token = BypassToken{decision.chosen->type_id, decision.chosen->impl_id,
                                 decision.chosen->similarity_f, next_sequence_++};
  }
  log_.push_back(decision);
  return decision;
}

std::vector<AllocationDecision> AllocationManager::log() const {
  std::lock_guard lock(mutex_);
  return log_;
}

ConfigRepository::ConfigRepository(std::vector<std::pair<ImplKey, std::string>> entries) {
  for (auto& [key, ref] : entries) {
    if (!refs_.emplace(key, std::move(ref)).second) {
      throw Error(ErrorCode::DuplicateKey, "repository key (" + std::to_string(key.first.value) + ", " +
                                               std::to_string(key.second.value) + ") repeats");
    }
  }
}

const std::string& ConfigRepository::config_ref(FunctionTypeId type_id, ImplId impl_id) const {
  const auto it = refs_.find({type_id, impl_id});
  if (it == refs_.end()) {
    throw Error(ErrorCode::NotInRepository, "no configuration data for (" + std::to_string(type_id.value) +
                                                ", " + std::to_string(impl_id.value) + ")");
  }
  return it->second;
}

}  // namespace qosalloc
