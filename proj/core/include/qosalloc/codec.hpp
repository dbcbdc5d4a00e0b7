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

// Packed 16-bit word images of the case-base, range table and request.
//
// Case-base image (.qcb), all offsets in words from the start of the image:
//
//   [0] 0x5143 magic   [1] version   [2] tree root   [3] range table (0 = absent)
//   tree root   -> (type_id, ptr)* 0          ptr -> implementation list
//   impl list   -> (impl_id, ptr)* 0          ptr -> attribute list
//   attr list   -> (attr_id, value)* 0
//   range table -> (attr_id, lower, upper, recip_q16)* 0
//
// A list ends at the first 0x0000 word found in an ID position; values,
// weights and bounds may legally be 0. Request images (.qrq) carry no header:
//
//   type_id (attr_id, value, weight_q15)* 0
//
// On disk every word is stored little-endian.

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "qosalloc/case_base.hpp"

namespace qosalloc {

inline constexpr std::uint16_t kImageMagic = 0x5143;  // "QC"
inline constexpr std::uint16_t kImageVersion = 1;
inline constexpr std::size_t kImageHeaderWords = 4;

struct PackedImage {
  std::vector<std::uint16_t> words;

  std::size_t size_bytes() const { return words.size() * 2; }
  friend bool operator==(const PackedImage&, const PackedImage&) = default;
};

struct PackedRequest {
  std::vector<std::uint16_t> words;

  std::size_t size_bytes() const { return words.size() * 2; }
  friend bool operator==(const PackedRequest&, const PackedRequest&) = default;
};

/// Word counts of each section of a packed case-base image.
struct ImageLayout {
  std::size_t header = 0;
  std::size_t type_list = 0;
  std::size_t impl_lists = 0;
  std::size_t attr_lists = 0;
  std::size_t range_table = 0;

  std::size_t total_words() const { return header + type_list + impl_lists + attr_lists + range_table; }
  std::size_t total_bytes() const { return 2 * total_words(); }
};

/// Section sizes the packer will produce, computed without packing.
ImageLayout image_layout(const CaseBase& cb, const RangeTable& rt);

/// Throws Error(OffsetOverflow) when the image would exceed 65535 words.
PackedImage pack_case_base(const CaseBase& cb, const RangeTable& rt);

/// Inverse of pack_case_base (target labels are not encoded and come back empty).
/// Throws BadMagic, BadVersion, DanglingPointer, UnterminatedList, OrderingError, InvalidRange.
std::pair<CaseBase, RangeTable> unpack_case_base(const PackedImage& img);

/// Throws InvalidArgument for an empty request or a weight above 1.
PackedRequest pack_request(const Request& req);

/// Throws UnterminatedList, OrderingError.
Request unpack_request(std::span<const std::uint16_t> words);

std::vector<std::uint8_t> to_bytes(std::span<const std::uint16_t> words);
/// Throws Error(Truncated) for an odd byte count.
std::vector<std::uint16_t> from_bytes(std::span<const std::uint8_t> bytes);

}  // namespace qosalloc
