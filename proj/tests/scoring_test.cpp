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

#include "nsix/scoring.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nsix/error.h"
#include "test_util.h"

namespace nsix {
namespace {

constexpr std::size_t kDim = 40;

TEST(ScoringTest, MethodNamesRoundTrip) {
    for (MethodKind kind : kReportMethodOrder) {
        EXPECT_EQ(parse_method(method_name(kind)), kind);
    }
    EXPECT_EQ(method_name(MethodKind::kCosineIndexed), "cos");
    EXPECT_EQ(method_name(MethodKind::kManhattan), "l1");
    EXPECT_EQ(method_name(MethodKind::kEuclid), "l2");
    EXPECT_EQ(method_name(MethodKind::kDotThenCosRerank), "dot+cos");
    EXPECT_FALSE(parse_method("cosine").has_value());
    EXPECT_FALSE(parse_method("").has_value());
}

TEST(ScoringTest, RanksBefore) {
    EXPECT_TRUE(ranks_before(0.5, 9, 0.4, 1));
    EXPECT_TRUE(ranks_before(0.5, 1, 0.5, 2));
    EXPECT_FALSE(ranks_before(0.5, 2, 0.5, 2));
    EXPECT_FALSE(ranks_before(0.4, 1, 0.5, 9));
}

TEST(ScoringTest, KernelsMatchDenseDefinitions) {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 2000; ++trial) {
        const auto x = testing::random_vector(rng, kDim, 12);
        const auto y = testing::random_vector(rng, kDim, 12);
        const auto dx = testing::to_dense(x, kDim);
        const auto dy = testing::to_dense(y, kDim);

        EXPECT_NEAR(score_dot(x, y), testing::dense_score(MethodKind::kDot, dx, dy), 1e-14);
        EXPECT_NEAR(score_cosine_exact(x, y),
                    testing::dense_score(MethodKind::kCosineExact, dx, dy), 1e-12);

        const auto shared = shared_terms(x, y);
        double l1_dense = 0.0;
        for (std::size_t i = 0; i < kDim; ++i) {
            l1_dense += std::abs(dx[i] - dy[i]);
        }
        EXPECT_NEAR(manhattan_distance(shared, l1_norm(x), l1_norm(y)), l1_dense, 1e-12);

        std::vector<SharedTerm> normalized;
        for (const auto& t : shared) {
            normalized.push_back({t.query, t.doc / l2_norm(y)});
        }
        EXPECT_NEAR(score_cosine_indexed(normalized), score_cosine_exact(x, y) * l2_norm(x), 1e-12);
    }
}

TEST(ScoringTest, SharedTermsFollowFeatureOrder) {
    const auto x = SparseVector::of({{"a", 0.1}, {"c", 0.2}, {"d", 0.3}});
    const auto y = SparseVector::of({{"b", 0.4}, {"c", 0.5}, {"d", 0.6}});
    const auto shared = shared_terms(x, y);
    ASSERT_EQ(shared.size(), 2u);
    EXPECT_EQ(shared[0].query, 0.2);
    EXPECT_EQ(shared[0].doc, 0.5);
    EXPECT_EQ(shared[1].query, 0.3);
    EXPECT_EQ(shared[1].doc, 0.6);
    EXPECT_TRUE(shared_terms(x, SparseVector{}).empty());
}

TEST(ScoringTest, CosineOfZeroVectorThrows) {
    const auto x = SparseVector::of({{"a", 0.1}});
    EXPECT_THROW(score_cosine_exact(x, SparseVector{}), Error);
    EXPECT_THROW(score_cosine_exact(SparseVector::of({{"a", 0.0}}), x), Error);
}

TEST(ScoringTest, ManhattanComplement) {
    EXPECT_EQ(distance_to_score(0.0, DistanceKind::kManhattan), 2.0);
    EXPECT_EQ(distance_to_score(2.0, DistanceKind::kManhattan), 0.0);
    // no clamping: mass above 1 yields a negative score instead of a tie
    EXPECT_LT(distance_to_score(2.5, DistanceKind::kManhattan),
              distance_to_score(2.25, DistanceKind::kManhattan));
    EXPECT_EQ(distance_to_score(-0.3, DistanceKind::kEuclidRank), -0.3);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 2.0);
    for (int i = 0; i < 10000; ++i) {
        const double a = u(rng);
        const double b = u(rng);
        if (a < b) {
            ASSERT_GT(distance_to_score(a, DistanceKind::kManhattan),
                      distance_to_score(b, DistanceKind::kManhattan));
        }
    }
}

TEST(ScoringTest, EuclidRankScoreRecoversDistance) {
    std::mt19937_64 rng(8);
    for (int i = 0; i < 500; ++i) {
        const auto x = testing::random_vector(rng, kDim, 10);
        const auto y = testing::random_vector(rng, kDim, 10);
        const auto dx = testing::to_dense(x, kDim);
        const auto dy = testing::to_dense(y, kDim);
        double sq = 0.0;
        for (std::size_t k = 0; k < kDim; ++k) {
            sq += (dx[k] - dy[k]) * (dx[k] - dy[k]);
        }
        const double rank = euclid_rank_score(score_dot(x, y), compute_norms(y).l2_squared);
        EXPECT_NEAR(euclid_distance_from_rank(rank, compute_norms(x).l2_squared), std::sqrt(sq),
                    1e-7);
    }
}

TEST(ScoringTest, RerankWindow) {
    InvertedIndex index;
    index.add_document("peaked", SparseVector::of({{"a", 0.9}, {"b", 0.05}}));
    index.add_document("diffuse", SparseVector::of({{"a", 0.3}, {"c", 0.3}, {"d", 0.3}}));
    index.add_document("self", SparseVector::of({{"a", 0.2}, {"c", 0.2}}));
    const auto q = SparseVector::of({{"a", 0.2}, {"c", 0.2}});
    std::vector<ScoredDoc> candidates;
    for (DocId d = 0; d < 3; ++d) {
        candidates.push_back({d, score_dot(q, index.document(d).features)});
    }
    std::sort(candidates.begin(), candidates.end(),
              [](const auto& a, const auto& b) { return ranks_before(a, b); });
    ASSERT_EQ(candidates[0].doc_id, 0u);

    const auto full = rerank_by_exact_cosine(index, q, candidates, 10);
    ASSERT_EQ(full.size(), 3u);
    EXPECT_EQ(full[0].doc_id, 2u);
    EXPECT_NEAR(full[0].score, 1.0, 1e-12);

    const auto window = rerank_by_exact_cosine(index, q, candidates, 1);
    ASSERT_EQ(window.size(), 1u);
    EXPECT_EQ(window[0].doc_id, 0u);
}

}  // namespace
}  // namespace nsix
