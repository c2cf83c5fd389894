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
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nsix/inverted_index.h"
#include "nsix/scoring.h"
#include "nsix/sparse_vector.h"

namespace nsix {

enum class CandidateMode {
    kExhaustive,     // every document is scored (match_all)
    kPostingDriven,  // only documents sharing at least one query feature
};

inline constexpr std::size_t kDefaultTopK = 100;

struct QuerySpec {
    SparseVector vector;
    ScoringMethod method;
    std::size_t top_k = kDefaultTopK;
    /// Keep only the m strongest query features before anything else runs.
    std::optional<std::size_t> feature_number;
    CandidateMode candidate_mode = CandidateMode::kExhaustive;
};

struct SearchHit {
    DocId doc_id;
    std::string file_name;
    double score;  // higher is better for every method

    friend bool operator==(const SearchHit&, const SearchHit&) = default;
};

struct SearchStats {
    std::uint64_t postings_traversed = 0;
    std::uint64_t accumulator_updates = 0;
    std::uint64_t candidates_scored = 0;
};

/// True when restricting candidates to posting-matched documents cannot
/// change the ranking of positive-score documents. Manhattan and Euclid
/// assign well-defined scores to documents sharing no feature, so posting
/// mode only ranks a subset for them.
bool posting_mode_is_exact(MethodKind kind) noexcept;

/// Runs one query. Term-at-a-time accumulation over the query's posting
/// lists, per-candidate norm adjustment, then top-k selection ordered by
/// score descending and doc id ascending.
///
/// dot+cos runs a dot search with top_k = rerank_k, re-ranks that window by
/// exact cosine and returns its top_k prefix.
///
/// Throws kEmptyIndex, kZeroVector (query has no positive weight after
/// truncation) and kInvalidParams (top_k or rerank_k of 0).
std::vector<SearchHit> search(const InvertedIndex& index, const QuerySpec& query,
                              SearchStats* stats = nullptr);

struct ExplainTerm {
    FeatureId feature;
    double query_weight;
    double doc_value;  // c for cos, s otherwise
    double contribution;
};

struct NormTerm {
    std::string name;
    double value;
};

/// Additive breakdown of one document's score: the contributions of the
/// shared features plus the norm terms sum to `score`.
struct Explanation {
    DocId doc_id = 0;
    MethodKind method = MethodKind::kDot;
    std::vector<ExplainTerm> terms;
    std::vector<NormTerm> norm_terms;
    double score = 0.0;
    /// Manhattan distance, or exact Euclidean distance, when applicable.
    std::optional<double> distance;
};

/// dot+cos is explained as exact cosine. Throws kUnknownDocument.
Explanation explain(const InvertedIndex& index, const QuerySpec& query, DocId doc_id);

/// The query as the engine sees it: zero weights dropped, then truncated to
/// feature_number. Throws kZeroVector if nothing positive remains.
SparseVector prepare_query(const QuerySpec& query);

}  // namespace nsix
