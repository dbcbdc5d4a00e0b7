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

// Line-based text source for case-bases, range tables and requests.
//
//   # comment
//   type <type_id>
//   impl <impl_id> [label]
//   attr <id> <value>              (inside an impl)
//   range <id> <lower> <upper>
//   request <type_id>
//   want <id> <value> <weight>     (inside a request; weight as decimal or p/q)
//
// Parsing keeps the order given in the text. Ordering and coverage problems are
// reported by validate_case_base() / validate_request(), not by the parser.

#include <string>
#include <string_view>
#include <vector>

#include "qosalloc/case_base.hpp"

namespace qosalloc {

struct SourceDocument {
  CaseBase case_base;
  RangeTable ranges;
  std::vector<Request> requests;

  friend bool operator==(const SourceDocument&, const SourceDocument&) = default;
};

/// Throws SyntaxError carrying the 1-based line number.
SourceDocument parse_source(std::string_view text);

std::string emit_source(const SourceDocument& doc);

}  // namespace qosalloc
