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

#include "qosalloc/source_format.hpp"

#include <charconv>
#include <limits>
#include <sstream>

#include "qosalloc/error.hpp"

namespace qosalloc {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
    const auto start = pos;
    while (pos < s.size() && s[pos] != ' ' && s[pos] != '\t') ++pos;
    if (pos > start) out.push_back(s.substr(start, pos - start));
  }
  return out;
}

std::uint16_t parse_word(std::string_view tok, std::size_t line, const char* what, bool nonzero) {
  unsigned long v = 0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw SyntaxError(line, std::string(what) + " '" + std::string(tok) + "' is not an unsigned integer");
  }
  if (v > std::numeric_limits<std::uint16_t>::max()) {
    throw SyntaxError(line, std::string(what) + " " + std::string(tok) + " exceeds 65535");
  }
  if (nonzero && v == 0) throw SyntaxError(line, std::string(what) + " 0 is reserved");
  return static_cast<std::uint16_t>(v);
}

double parse_number(std::string_view tok, std::size_t line) {
  double v = 0.0;
  const auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc() || p != tok.data() + tok.size()) {
    throw SyntaxError(line, "weight '" + std::string(tok) + "' is not a number");
  }
  return v;
}

Weight parse_weight(std::string_view tok, std::size_t line) {
  double v = 0.0;
  if (const auto slash = tok.find('/'); slash != std::string_view::npos) {
    const double num = parse_number(tok.substr(0, slash), line);
    const double den = parse_number(tok.substr(slash + 1), line);
    if (den == 0.0) throw SyntaxError(line, "weight has zero denominator");
    v = num / den;
  } else {
    v = parse_number(tok, line);
  }
  if (!(v >= 0.0) || v == std::numeric_limits<double>::infinity()) {
    throw SyntaxError(line, "weight must be finite and non-negative");
  }
  return Weight(v);
}

void expect_args(const std::vector<std::string_view>& toks, std::size_t n, std::size_t line) {
  if (toks.size() != n + 1) {
    throw SyntaxError(line, "'" + std::string(toks[0]) + "' takes " + std::to_string(n) + " argument(s)");
  }
}

std::string format_weight(double w) {
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, w);
  return std::string(buf, p);
}

}  // namespace

SourceDocument parse_source(std::string_view text) {
  SourceDocument doc;
  FunctionTypeEntry* type = nullptr;
  ImplementationCase* impl = nullptr;
  Request* request = nullptr;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto toks = split_ws(line);
    const auto kw = toks[0];

    if (kw == "type") {
      expect_args(toks, 1, line_no);
      doc.case_base.entries.push_back({FunctionTypeId(parse_word(toks[1], line_no, "type id", true)), {}});
      type = &doc.case_base.entries.back();
      impl = nullptr;
      request = nullptr;
    } else if (kw == "impl") {
      if (toks.size() < 2) throw SyntaxError(line_no, "'impl' needs an implementation id");
      if (type == nullptr) throw SyntaxError(line_no, "'impl' outside a 'type' block");
      ImplementationCase c;
      c.impl_id = ImplId(parse_word(toks[1], line_no, "impl id", true));
      if (toks.size() > 2) {
        const auto label_start = static_cast<std::size_t>(toks[2].data() - line.data());
        c.target_label = std::string(trim(line.substr(label_start)));
      }
      type->implementations.push_back(std::move(c));
      impl = &type->implementations.back();
    } else if (kw == "attr") {
      expect_args(toks, 2, line_no);
      if (impl == nullptr) throw SyntaxError(line_no, "'attr' outside an 'impl' block");
      impl->attributes.push_back({AttributeId(parse_word(toks[1], line_no, "attribute id", true)),
                                  parse_word(toks[2], line_no, "attribute value", false)});
    } else if (kw == "range") {
      expect_args(toks, 3, line_no);
      const AttributeId id(parse_word(toks[1], line_no, "attribute id", true));
      const auto lower = parse_word(toks[2], line_no, "lower bound", false);
      const auto upper = parse_word(toks[3], line_no, "upper bound", false);
      if (lower > upper) throw SyntaxError(line_no, "lower bound above upper bound");
      doc.ranges.entries.push_back(RangeEntry::make(id, lower, upper));
    } else if (kw == "request") {
      expect_args(toks, 1, line_no);
      doc.requests.push_back({FunctionTypeId(parse_word(toks[1], line_no, "type id", true)), {}});
      request = &doc.requests.back();
      type = nullptr;
      impl = nullptr;
    } else if (kw == "want") {
      expect_args(toks, 3, line_no);
      if (request == nullptr) throw SyntaxError(line_no, "'want' outside a 'request' block");
      request->attributes.push_back({AttributeId(parse_word(toks[1], line_no, "attribute id", true)),
                                     parse_word(toks[2], line_no, "attribute value", false),
                                     parse_weight(toks[3], line_no)});
    } else {
      throw SyntaxError(line_no, "unknown keyword '" + std::string(kw) + "'");
    }
  }
  return doc;
}

std::string emit_source(const SourceDocument& doc) {
  std::ostringstream out;
  for (const auto& entry : doc.case_base.entries) {
    out << "type " << entry.type_id.value << '\n';
    for (const auto& impl : entry.implementations) {
      out << "  impl " << impl.impl_id.value;
      if (!impl.target_label.empty()) out << ' ' << impl.target_label;
      out << '\n';
      for (const auto& a : impl.attributes) out << "    attr " << a.id.value << ' ' << a.value << '\n';
    }
  }
  for (const auto& e : doc.ranges.entries) {
    out << "range " << e.id.value << ' ' << e.lower << ' ' << e.upper << '\n';
  }
  for (const auto& req : doc.requests) {
    out << "request " << req.function_type.value << '\n';
    for (const auto& a : req.attributes) {
      out << "  want " << a.id.value << ' ' << a.value << ' ' << format_weight(a.weight.real()) << '\n';
    }
  }
  return out.str();
}

}  // namespace qosalloc
