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

#include "nsix/inverted_index.h"

#include <algorithm>

#include "nsix/error.h"

namespace nsix {

InvertedIndex::InvertedIndex(IndexOptions options) : options_(options) {
    if (options_.max_features && *options_.max_features == 0) {
        throw Error(ErrorCode::kInvalidParams, "max_features must be >= 1");
    }
}

DocId InvertedIndex::add_document(std::string file_name, const SparseVector& features,
                                  Labels labels) {
    if (!features.has_positive_weight()) {
        throw Error(ErrorCode::kZeroVector, "document '" + file_name + "' has no positive weight");
    }
    if (by_file_name_.contains(file_name)) {
        throw Error(ErrorCode::kDuplicateFile, "file '" + file_name + "' is already indexed");
    }

    SparseVector stored = drop_zeros(features);
    if (options_.max_features) {
        stored = truncate_top_m(stored, *options_.max_features);
    }

    const DocId id = documents_.size();
    const VectorNorms norms = compute_norms(stored);
    for (const auto& e : stored) {
        postings_[e.feature].push_back({id, e.weight, e.weight / norms.l2, e.weight * e.weight});
    }
    std::erase_if(labels, [&](const auto& kv) { return !stored.weight(kv.first).has_value(); });

    by_file_name_.emplace(file_name, id);
    documents_.push_back({id, std::move(file_name), std::move(stored), norms, std::move(labels)});
    return id;
}

InvertedIndex InvertedIndex::from_parts(std::vector<DocumentRecord> documents,
                                        std::map<FeatureId, PostingList> postings) {
    auto fail = [](const std::string& what) { throw Error(ErrorCode::kFormatError, what); };

    InvertedIndex index;
    std::uint64_t expected_postings = 0;
    for (std::size_t i = 0; i < documents.size(); ++i) {
        auto& doc = documents[i];
        if (doc.doc_id != i) {
            fail("document table out of order at entry " + std::to_string(i));
        }
        if (doc.features.empty()) {
            fail("document '" + doc.file_name + "' has no features");
        }
        if (!index.by_file_name_.emplace(doc.file_name, doc.doc_id).second) {
            fail("duplicate file name '" + doc.file_name + "'");
        }
        expected_postings += doc.features.size();
    }

    std::uint64_t seen_postings = 0;
    for (const auto& [feature, list] : postings) {
        if (list.empty()) {
            fail("empty posting list for feature '" + feature.str() + "'");
        }
        for (std::size_t i = 0; i < list.size(); ++i) {
            const auto& p = list[i];
            if (p.doc_id >= documents.size()) {
                fail("posting references unknown document " + std::to_string(p.doc_id));
            }
            if (i > 0 && list[i - 1].doc_id >= p.doc_id) {
                fail("posting list for '" + feature.str() + "' is not strictly ascending");
            }
            auto s = documents[p.doc_id].features.weight(feature);
            if (!s || *s != p.s) {
                fail("posting for '" + feature.str() + "' disagrees with document " +
                     std::to_string(p.doc_id));
            }
        }
        seen_postings += list.size();
    }
    if (seen_postings != expected_postings) {
        fail("posting count does not match document features");
    }

    index.documents_ = std::move(documents);
    index.postings_ = std::move(postings);
    return index;
}

const DocumentRecord& InvertedIndex::document(DocId id) const {
    if (id >= documents_.size()) {
        throw Error(ErrorCode::kUnknownDocument, "no document with id " + std::to_string(id));
    }
    return documents_[id];
}

const PostingList* InvertedIndex::find_postings(const FeatureId& feature) const {
    auto it = postings_.find(feature);
    return it == postings_.end() ? nullptr : &it->second;
}

std::optional<DocId> InvertedIndex::find_document(std::string_view file_name) const {
    auto it = by_file_name_.find(std::string(file_name));
    if (it == by_file_name_.end()) {
        return std::nullopt;
    }
    return it->second;
}

IndexStats index_stats(const InvertedIndex& index) noexcept {
    IndexStats stats;
    stats.doc_count = index.doc_count();
    stats.distinct_features = index.postings().size();
    for (const auto& [feature, list] : index.postings()) {
        stats.total_postings += list.size();
    }
    if (stats.doc_count > 0) {
        stats.mean_postings_per_document =
            static_cast<double>(stats.total_postings) / static_cast<double>(stats.doc_count);
    }
    return stats;
}

}  // namespace nsix
