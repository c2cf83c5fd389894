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
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "nsix/sparse_vector.h"

namespace nsix {

using DocId = std::uint64_t;

/// Per-feature statistics of one document: raw score s, L2-normalized score
/// c = s / ||y||, and squared score ss = s * s.
struct Posting {
    DocId doc_id;
    double s;
    double c;
    double ss;

    friend bool operator==(const Posting&, const Posting&) = default;
};

using PostingList = std::vector<Posting>;
using Labels = std::map<FeatureId, std::string>;

struct DocumentRecord {
    DocId doc_id = 0;
    std::string file_name;
    SparseVector features;  // positive weights only
    VectorNorms norms;
    Labels labels;  // optional display words, not persisted
};

struct IndexStats {
    std::uint64_t doc_count = 0;
    std::uint64_t distinct_features = 0;
    std::uint64_t total_postings = 0;
    double mean_postings_per_document = 0.0;

    friend bool operator==(const IndexStats&, const IndexStats&) = default;
};

struct IndexOptions {
    /// Keep only the strongest N features of each document at ingestion.
    std::optional<std::size_t> max_features;
};

/// Append-only inverted index plus document store. doc ids are assigned in
/// insertion order; every posting list is strictly ascending by doc id.
/// Not synchronized: build from one thread, then share read-only.
class InvertedIndex {
public:
    explicit InvertedIndex(IndexOptions options = {});

    /// Reassembles an index from stored parts without recomputing anything.
    /// Throws Error(kFormatError) if the parts are structurally inconsistent.
    static InvertedIndex from_parts(std::vector<DocumentRecord> documents,
                                    std::map<FeatureId, PostingList> postings);

    /// Stores the document with precomputed norms and appends one (s, c, ss)
    /// posting per positive feature. Throws kZeroVector when no weight is
    /// positive, kDuplicateFile when file_name is already indexed.
    DocId add_document(std::string file_name, const SparseVector& features, Labels labels = {});

    std::size_t doc_count() const noexcept { return documents_.size(); }

    /// Throws Error(kUnknownDocument) for an id outside [0, doc_count).
    const DocumentRecord& document(DocId id) const;

    std::span<const DocumentRecord> documents() const noexcept { return documents_; }

    /// nullptr when the feature occurs in no document.
    const PostingList* find_postings(const FeatureId& feature) const;

    const std::map<FeatureId, PostingList>& postings() const noexcept { return postings_; }

    std::optional<DocId> find_document(std::string_view file_name) const;

    const IndexOptions& options() const noexcept { return options_; }

private:
    IndexOptions options_;
    std::vector<DocumentRecord> documents_;
    std::map<FeatureId, PostingList> postings_;
    std::unordered_map<std::string, DocId> by_file_name_;
};

IndexStats index_stats(const InvertedIndex& index) noexcept;

}  // namespace nsix
