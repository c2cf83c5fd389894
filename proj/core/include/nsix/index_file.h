// Copyright 2026-present the nsix authors
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

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "nsix/inverted_index.h"

namespace nsix {

// On-disk layout, all integers and doubles little-endian:
//
//   "NSIX" | u32 version | u64 doc_count | u64 feature_count
//   doc_count x { str file_name | f64 l1 | f64 l2 | f64 l2_squared
//                 | u64 n | n x { str feature_id | f64 s } }
//   feature_count x { str feature_id | u64 n
//                     | n x { u64 doc_id | f64 s | f64 c | f64 ss } }
//   u32 crc32 of every preceding byte
//
// where str is a u32 byte length followed by UTF-8 bytes. Label words are
// ingestion metadata and are not stored.
inline constexpr std::uint32_t kIndexFormatVersion = 1;

std::vector<std::uint8_t> serialize_index(const InvertedIndex& index);

/// Throws Error(kFormatError) on bad magic, version mismatch, truncation,
/// checksum failure or structurally inconsistent content.
InvertedIndex deserialize_index(std::span<const std::uint8_t> bytes);

/// Throws Error(kIoError) when the file cannot be written.
void save_index(const InvertedIndex& index, const std::filesystem::path& path);

InvertedIndex load_index(const std::filesystem::path& path);

}  // namespace nsix
