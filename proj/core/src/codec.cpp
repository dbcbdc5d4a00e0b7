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

#include "qosalloc/codec.hpp"

#include <limits>
#include <string>

#include "qosalloc/error.hpp"

namespace qosalloc {

namespace {

constexpr std::size_t kMaxWords = std::numeric_limits<std::uint16_t>::max();

std::uint16_t offset_word(std::size_t offset) {
  if (offset > kMaxWords) {
    throw Error(ErrorCode::OffsetOverflow, "offset " + std::to_string(offset) + " exceeds pointer range");
  }
  return static_cast<std::uint16_t>(offset);
}

// Bounds-checked cursor over one NULL-terminated list of fixed-size blocks.
class ListReader {
 public:
  ListReader(std::span<const std::uint16_t> words, std::size_t start, std::size_t block, const char* what)
      : words_(words), pos_(start), block_(block), what_(what) {
    if (start == 0 || start >= words.size()) {
      throw Error(ErrorCode::DanglingPointer,
                  std::string(what) + " pointer " + std::to_string(start) + " outside image");
    }
  }

  // Returns false at the terminator; otherwise the block starting at the id word.
  bool next(std::span<const std::uint16_t>& block) {
    if (pos_ >= words_.size()) {
      throw Error(ErrorCode::UnterminatedList, std::string(what_) + " list runs past end of image");
    }
    if (words_[pos_] == 0) return false;
    if (pos_ + block_ > words_.size()) {
      throw Error(ErrorCode::UnterminatedList, std::string(what_) + " block truncated");
    }
    block = words_.subspan(pos_, block_);
    pos_ += block_;
    return true;
  }

 private:
  std::span<const std::uint16_t> words_;
  std::size_t pos_;
  std::size_t block_;
  const char* what_;
};

template <class IdT>
void require_ascending(IdT prev, IdT id, const char* what) {
  if (!prev.is_null() && !(prev < id)) {
    throw Error(ErrorCode::OrderingError,
                std::string(what) + " id " + std::to_string(id.value) + " not strictly ascending");
  }
}

}  // namespace

ImageLayout image_layout(const CaseBase& cb, const RangeTable& rt) {
  ImageLayout layout;
  layout.header = kImageHeaderWords;
  layout.type_list = 2 * cb.entries.size() + 1;
  for (const auto& entry : cb.entries) {
    layout.impl_lists += 2 * entry.implementations.size() + 1;
    for (const auto& impl : entry.implementations) layout.attr_lists += 2 * impl.attributes.size() + 1;
  }
  layout.range_table = 4 * rt.entries.size() + 1;
  return layout;
}

PackedImage pack_case_base(const CaseBase& cb, const RangeTable& rt) {
  const ImageLayout layout = image_layout(cb, rt);
  if (layout.total_words() > kMaxWords) {
    throw Error(ErrorCode::OffsetOverflow,
                "image needs " + std::to_string(layout.total_words()) + " words");
  }

  PackedImage img;
  auto& w = img.words;
  w.reserve(layout.total_words());
  w.resize(kImageHeaderWords + layout.type_list, 0);
  w[0] = kImageMagic;
  w[1] = kImageVersion;
  w[2] = offset_word(kImageHeaderWords);

  // Breadth-first: type list, then every implementation list, then every attribute list.
  std::vector<std::size_t> impl_list_at(cb.entries.size());
  for (std::size_t t = 0; t < cb.entries.size(); ++t) {
    impl_list_at[t] = w.size();
    w[kImageHeaderWords + 2 * t] = cb.entries[t].type_id.value;
    w[kImageHeaderWords + 2 * t + 1] = offset_word(w.size());
    w.resize(w.size() + 2 * cb.entries[t].implementations.size() + 1, 0);
  }
  for (std::size_t t = 0; t < cb.entries.size(); ++t) {
    const auto& impls = cb.entries[t].implementations;
    for (std::size_t i = 0; i < impls.size(); ++i) {
      w[impl_list_at[t] + 2 * i] = impls[i].impl_id.value;
      w[impl_list_at[t] + 2 * i + 1] = offset_word(w.size());
      for (const auto& a : impls[i].attributes) {
        w.push_back(a.id.value);
        w.push_back(a.value);
      }
      w.push_back(0);
    }
  }

  w[3] = offset_word(w.size());
  for (const auto& e : rt.entries) {
    w.push_back(e.id.value);
    w.push_back(e.lower);
    w.push_back(e.upper);
    w.push_back(e.recip_q16);
  }
  w.push_back(0);
  return img;
}

std::pair<CaseBase, RangeTable> unpack_case_base(const PackedImage& img) {
  const std::span<const std::uint16_t> w(img.words);
  if (w.size() < kImageHeaderWords) throw Error(ErrorCode::Truncated, "image shorter than its header");
  if (w[0] != kImageMagic) throw Error(ErrorCode::BadMagic, "not a case-base image");
  if (w[1] != kImageVersion) {
    throw Error(ErrorCode::BadVersion, "unsupported image version " + std::to_string(w[1]));
  }

  CaseBase cb;
  if (w[2] != 0) {
    ListReader types(w, w[2], 2, "type");
    std::span<const std::uint16_t> tb;
    FunctionTypeId prev_type;
    while (types.next(tb)) {
      FunctionTypeEntry entry;
      entry.type_id = FunctionTypeId(tb[0]);
      require_ascending(prev_type, entry.type_id, "type");
      prev_type = entry.type_id;

      ListReader impls(w, tb[1], 2, "implementation");
      std::span<const std::uint16_t> ib;
      ImplId prev_impl;
      while (impls.next(ib)) {
        ImplementationCase impl;
        impl.impl_id = ImplId(ib[0]);
        require_ascending(prev_impl, impl.impl_id, "implementation");
        prev_impl = impl.impl_id;

        ListReader attrs(w, ib[1], 2, "attribute");
        std::span<const std::uint16_t> ab;
        AttributeId prev_attr;
        while (attrs.next(ab)) {
          const AttributeId id(ab[0]);
          require_ascending(prev_attr, id, "attribute");
          prev_attr = id;
          impl.attributes.push_back({id, ab[1]});
        }
        entry.implementations.push_back(std::move(impl));
      }
      cb.entries.push_back(std::move(entry));
    }
  }

  RangeTable rt;
  if (w[3] != 0) {
    ListReader ranges(w, w[3], 4, "range");
    std::span<const std::uint16_t> rb;
    AttributeId prev;
    while (ranges.next(rb)) {
      const AttributeId id(rb[0]);
      require_ascending(prev, id, "range");
      prev = id;
      // The stored reciprocal is authoritative and kept verbatim.
      RangeEntry e = RangeEntry::make(id, rb[1], rb[2]);
      e.recip_q16 = rb[3];
      rt.entries.push_back(e);
    }
  }
  return {std::move(cb), std::move(rt)};
}

PackedRequest pack_request(const Request& req) {
  if (req.attributes.empty()) throw Error(ErrorCode::InvalidArgument, "cannot pack an empty request");
  PackedRequest out;
  out.words.reserve(2 + 3 * req.attributes.size());
  out.words.push_back(req.function_type.value);
  for (const auto& a : req.attributes) {
    if (a.id.is_null()) throw Error(ErrorCode::InvalidArgument, "attribute id 0 is reserved");
    out.words.push_back(a.id.value);
    out.words.push_back(a.value);
    out.words.push_back(a.weight.q15());
  }
  out.words.push_back(0);
  return out;
}

Request unpack_request(std::span<const std::uint16_t> words) {
  if (words.empty()) throw Error(ErrorCode::UnterminatedList, "empty request image");
  Request req;
  req.function_type = FunctionTypeId(words[0]);
  std::size_t pos = 1;
  AttributeId prev;
  while (true) {
    if (pos >= words.size()) throw Error(ErrorCode::UnterminatedList, "request list has no terminator");
    if (words[pos] == 0) break;
    if (pos + 3 > words.size()) throw Error(ErrorCode::UnterminatedList, "request block truncated");
    const AttributeId id(words[pos]);
    require_ascending(prev, id, "request attribute");
    prev = id;
    req.attributes.push_back({id, words[pos + 1], Weight::from_q15(words[pos + 2])});
    pos += 3;
  }
  return req;
}

std::vector<std::uint8_t> to_bytes(std::span<const std::uint16_t> words) {
  std::vector<std::uint8_t> bytes;
  bytes.reserve(words.size() * 2);
  for (const auto word : words) {
    bytes.push_back(static_cast<std::uint8_t>(word & 0xFF));
    bytes.push_back(static_cast<std::uint8_t>(word >> 8));
  }
  return bytes;
}

std::vector<std::uint16_t> from_bytes(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % 2 != 0) throw Error(ErrorCode::Truncated, "odd byte count in word stream");
  std::vector<std::uint16_t> words(bytes.size() / 2);
  for (std::size_t k = 0; k < words.size(); ++k) {
    words[k] = static_cast<std::uint16_t>(bytes[2 * k] | (bytes[2 * k + 1] << 8));
  }
  return words;
}

}  // namespace qosalloc
