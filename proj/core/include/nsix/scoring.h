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

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "nsix/inverted_index.h"
#include "nsix/sparse_vector.h"

namespace nsix {

enum class MethodKind {
    kDot,
    kCosineExact,
    kCosineIndexed,
    kManhattan,
    kEuclid,
    kDotThenCosRerank,
};

inline constexpr std::size_t kDefaultRerankK = 100;

struct ScoringMethod {
    MethodKind kind = MethodKind::kCosineIndexed;
    std::size_t rerank_k = kDefaultRerankK;  // only read by kDotThenCosRerank

    static ScoringMethod dot_then_cos(std::size_t k) { return {MethodKind::kDotThenCosRerank, k}; }

    friend bool operator==(const ScoringMethod&, const ScoringMethod&) = default;
};

/// Short names as used on the command line and in reports:
/// dot, cos-exact, cos, l1, l2, dot+cos.
std::string_view method_name(MethodKind kind) noexcept;

/// Accepts the names above; std::nullopt for anything else.
std::optional<MethodKind> parse_method(std::string_view name) noexcept;

/// Row order of the evaluation tables.
inline constexpr MethodKind kReportMethodOrder[] = {
    MethodKind::kDot,           MethodKind::kManhattan,   MethodKind::kEuclid,
    MethodKind::kCosineIndexed, MethodKind::kCosineExact, MethodKind::kDotThenCosRerank,
};

/// A query weight paired with the matching document statistic (s or c)
/// for one feature present in both vectors.
struct SharedTerm {
    double query;
    double doc;
};

struct ScoredDoc {
    DocId doc_id;
    double score;

    friend bool operator==(const ScoredDoc&, const ScoredDoc&) = default;
};

/// Ranking order used everywhere: score descending, then doc id ascending.
/// Scores are compared exactly.
inline bool ranks_before(double score_a, DocId id_a, double score_b, DocId id_b) noexcept {
    if (score_a != score_b) {
        return score_a > score_b;
    }
    return id_a < id_b;
}

inline bool ranks_before(const ScoredDoc& a, const ScoredDoc& b) noexcept {
    return ranks_before(a.score, a.doc_id, b.score, b.doc_id);
}

// Per-feature accumulation terms. Each method sums one of these over the
// features shared by query and document, then applies its finalizer.

inline double dot_term(double x, double y) noexcept { return x * y; }

inline double manhattan_term(double x, double y) noexcept { return std::abs(x - y) - x - y; }

/// Manhattan complement: 2 - d. Two nonnegative vectors with mass <= 1
/// each are at most 2 apart, so the score is >= 0 for softmax-like inputs.
inline constexpr double kManhattanComplement = 2.0;

/// ||x||_1 + ||y||_1 + sum over shared features of (|x_i - y_i| - x_i - y_i).
inline double finish_manhattan_distance(double shared_sum, double query_l1,
                                        double doc_l1) noexcept {
    return query_l1 + doc_l1 + shared_sum;
}

/// -(||y||^2 - 2 x.y); ranks like ascending Euclidean distance since the
/// dropped ||x||^2 is constant for a query.
inline double euclid_rank_score(double dot_xy, double doc_l2_squared) noexcept {
    return -(doc_l2_squared - 2.0 * dot_xy);
}

enum class DistanceKind { kManhattan, kEuclidRank };

/// Higher-is-better score for a distance. Manhattan maps d to 2 - d with no
/// clamping; the Euclid rank value is already oriented and passes through.
inline double distance_to_score(double d, DistanceKind kind) noexcept {
    return kind == DistanceKind::kManhattan ? kManhattanComplement - d : d;
}

/// Recovers ||x - y|| from the rank score for display.
inline double euclid_distance_from_rank(double rank_score, double query_l2_squared) noexcept {
    const double squared = query_l2_squared - rank_score;
    return squared > 0.0 ? std::sqrt(squared) : 0.0;
}

double score_dot(const SparseVector& x, const SparseVector& y) noexcept;

/// x.y / (||x|| ||y||). Throws Error(kZeroVector) if either norm is 0.
double score_cosine_exact(const SparseVector& x, const SparseVector& y);

/// Sum of x_i * c_i where c_i are the document's L2-normalized weights;
/// equals cos(x, y) * ||x||.
double score_cosine_indexed(std::span<const SharedTerm> terms) noexcept;

/// Exact ||x - y||_1 from the shared raw weights and both L1 norms.
double manhattan_distance(std::span<const SharedTerm> shared, double query_l1,
                          double doc_l1) noexcept;

/// Shared features of x and y in FeatureId order, with y's raw weights.
std::vector<SharedTerm> shared_terms(const SparseVector& x, const SparseVector& y);

/// Re-scores the first min(k_rerank, |candidates|) dot-ranked candidates by
/// exact cosine and re-sorts them; everything past the window is dropped.
std::vector<ScoredDoc> rerank_by_exact_cosine(const InvertedIndex& index, const SparseVector& query,
                                              std::span<const ScoredDoc> candidates,
                                              std::size_t k_rerank);

}  // namespace nsix
