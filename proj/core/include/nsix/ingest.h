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

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "nsix/inverted_index.h"
#include "nsix/sparse_vector.h"

namespace nsix {

// Ingestion files are JSON Lines, one document per line:
//
//   {"f": "<file name>", "s": {"<feature id>": {"w": "<word>", "s": <score>}, ...}}
//
// "w" is optional. Derived statistics (c, ss) are never read from input.

/// Upper bound on the summed weights of one ingested vector.
inline constexpr double kMaxIngestMass = 1.0 + 1e-6;

struct IngestRecord {
    std::size_t line = 0;  // 1-based
    std::string file_name;
    SparseVector features;
    Labels labels;
};

/// Parses one line. Errors carry the line number in their message:
/// kFormatError for malformed JSON / schema, kInvalidVector for negative or
/// non-finite scores, kFormatError when the summed mass exceeds kMaxIngestMass.
IngestRecord parse_ingest_line(std::string_view line, std::size_t line_no);

/// Calls fn for every non-blank line of the stream.
void for_each_ingest_record(std::istream& in, const std::function<void(IngestRecord&&)>& fn);

std::vector<IngestRecord> read_ingest_file(const std::filesystem::path& path);

/// Single JSON line (no trailing newline) with keys in sorted order.
std::string format_ingest_line(const std::string& file_name, const SparseVector& features,
                               const Labels& labels = {});

/// Indexes every record of the file; errors are re-raised with their code
/// and the offending line number.
InvertedIndex build_index_from_file(const std::filesystem::path& path, IndexOptions options = {});

}  // namespace nsix
