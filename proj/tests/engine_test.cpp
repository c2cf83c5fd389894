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

#include "nsix/engine.h"

#include <gtest/gtest.h>

#include <random>
#include <thread>

#include "nsix/error.h"
#include "test_util.h"

namespace nsix {
namespace {

constexpr std::size_t kDim = 60;

constexpr MethodKind kSingleStage[] = {MethodKind::kDot, MethodKind::kCosineIndexed,
                                       MethodKind::kCosineExact, MethodKind::kManhattan,
                                       MethodKind::kEuclid};

QuerySpec spec(const SparseVector& v, MethodKind kind, std::size_t top_k = kDefaultTopK,
               CandidateMode mode = CandidateMode::kExhaustive) {
    QuerySpec q;
    q.vector = v;
    q.method.kind = kind;
    q.top_k = top_k;
    q.candidate_mode = mode;
    return q;
}

class EngineTest : public ::testing::Test {
protected:
    void SetUp() override {
        std::mt19937_64 rng(77);
        for (int i = 0; i < 150; ++i) {
            docs_.push_back(testing::random_vector(rng, kDim, 12));
        }
        docs_.push_back(docs_[10]);  // exact duplicate vector
        index_ = testing::index_of(docs_);
        for (const auto& d : docs_) {
            dense_.push_back(testing::to_dense(d, kDim));
        }
        for (int i = 0; i < 20; ++i) {
            queries_.push_back(i % 2 ? docs_[i * 7] : testing::random_vector(rng, kDim, 15));
        }
    }

    std::vector<SparseVector> docs_;
    std::vector<std::vector<double>> dense_;
    std::vector<SparseVector> queries_;
    InvertedIndex index_;
};

TEST_F(EngineTest, MatchesDenseOracle) {
    for (MethodKind kind : kSingleStage) {
        for (const auto& q : queries_) {
            const auto hits = search(index_, spec(q, kind, index_.doc_count()));
            const auto oracle = testing::dense_ranking(kind, dense_, testing::to_dense(q, kDim));
            ASSERT_EQ(hits.size(), oracle.size());
            for (std::size_t r = 0; r < hits.size(); ++r) {
                ASSERT_EQ(hits[r].doc_id, oracle[r].doc_id) << method_name(kind) << " rank " << r;
                ASSERT_NEAR(hits[r].score, oracle[r].score, 1e-9);
                ASSERT_EQ(hits[r].file_name, index_.document(hits[r].doc_id).file_name);
            }
        }
    }
}

TEST_F(EngineTest, DuplicateDocumentsTieByDocId) {
    // dot is not maximized by the query itself, so only the others apply
    for (MethodKind kind : {MethodKind::kCosineIndexed, MethodKind::kCosineExact,
                            MethodKind::kManhattan, MethodKind::kEuclid}) {
        const auto hits = search(index_, spec(docs_[10], kind, 2));
        ASSERT_EQ(hits.size(), 2u);
        EXPECT_EQ(hits[0].doc_id, 10u) << method_name(kind);
        EXPECT_EQ(hits[1].doc_id, 150u) << method_name(kind);
        EXPECT_EQ(hits[0].score, hits[1].score);
    }
}

TEST_F(EngineTest, TopKIsPrefixOfFullRanking) {
    for (MethodKind kind : kSingleStage) {
        const auto full = search(index_, spec(queries_[3], kind, 1000));
        EXPECT_EQ(full.size(), index_.doc_count());
        for (std::size_t k : {1u, 5u, 37u}) {
            const auto top = search(index_, spec(queries_[3], kind, k));
            ASSERT_EQ(top.size(), k);
            EXPECT_TRUE(std::equal(top.begin(), top.end(), full.begin()));
        }
    }
}

TEST_F(EngineTest, PostingModeEqualsExhaustiveForDotAndCosine) {
    for (MethodKind kind :
         {MethodKind::kDot, MethodKind::kCosineIndexed, MethodKind::kCosineExact}) {
        ASSERT_TRUE(posting_mode_is_exact(kind));
        for (const auto& q : queries_) {
            const auto all = search(index_, spec(q, kind, 1000));
            const auto posting = search(index_, spec(q, kind, 1000, CandidateMode::kPostingDriven));
            std::vector<SearchHit> positive;
            for (const auto& h : all) {
                if (h.score > 0.0) {
                    positive.push_back(h);
                }
            }
            ASSERT_EQ(posting, positive) << method_name(kind);
        }
    }
    EXPECT_FALSE(posting_mode_is_exact(MethodKind::kManhattan));
    EXPECT_FALSE(posting_mode_is_exact(MethodKind::kEuclid));
}

TEST_F(EngineTest, PostingModeForDistancesRanksSharedSubset) {
    for (MethodKind kind : {MethodKind::kManhattan, MethodKind::kEuclid}) {
        const auto& q = queries_[5];
        const auto all = search(index_, spec(q, kind, 1000));
        const auto posting = search(index_, spec(q, kind, 1000, CandidateMode::kPostingDriven));
        std::vector<SearchHit> shared;
        for (const auto& h : all) {
            if (!shared_terms(q, index_.document(h.doc_id).features).empty()) {
                shared.push_back(h);
            }
        }
        EXPECT_EQ(posting, shared);
    }
}

TEST_F(EngineTest, InstrumentationCountsPostings) {
    for (const auto& q : queries_) {
        std::uint64_t expected = 0;
        std::set<DocId> touched;
        for (const auto& e : q) {
            if (const auto* list = index_.find_postings(e.feature)) {
                expected += list->size();
                for (const auto& p : *list) {
                    touched.insert(p.doc_id);
                }
            }
        }
        SearchStats stats;
        search(index_, spec(q, MethodKind::kCosineIndexed, 10, CandidateMode::kPostingDriven),
               &stats);
        EXPECT_EQ(stats.postings_traversed, expected);
        EXPECT_EQ(stats.accumulator_updates, expected);
        EXPECT_EQ(stats.candidates_scored, touched.size());

        SearchStats exhaustive;
        search(index_, spec(q, MethodKind::kManhattan, 10), &exhaustive);
        EXPECT_EQ(exhaustive.accumulator_updates, expected);
        EXPECT_EQ(exhaustive.candidates_scored, index_.doc_count());
    }
}

TEST_F(EngineTest, FeatureNumberTruncatesQuery) {
    for (MethodKind kind : kSingleStage) {
        for (std::size_t m : {1u, 3u, 100u}) {
            auto q = spec(queries_[0], kind, 20);
            q.feature_number = m;
            const auto truncated = search(index_, q);
            const auto manual = search(index_, spec(truncate_top_m(queries_[0], m), kind, 20));
            EXPECT_EQ(truncated, manual);
        }
    }
}

TEST_F(EngineTest, RerankWithWideWindowEqualsExactCosine) {
    for (const auto& q : queries_) {
        auto rerank = spec(q, MethodKind::kDotThenCosRerank, 1000);
        rerank.method.rerank_k = index_.doc_count();
        EXPECT_EQ(search(index_, rerank), search(index_, spec(q, MethodKind::kCosineExact, 1000)));
    }
}

TEST_F(EngineTest, RerankReturnsTopKOfWindow) {
    auto q = spec(queries_[1], MethodKind::kDotThenCosRerank, 5);
    q.method.rerank_k = 20;
    const auto hits = search(index_, q);
    ASSERT_EQ(hits.size(), 5u);
    const auto dot = search(index_, spec(queries_[1], MethodKind::kDot, 20));
    for (const auto& h : hits) {
        EXPECT_TRUE(std::any_of(dot.begin(), dot.end(),
                                [&](const SearchHit& d) { return d.doc_id == h.doc_id; }));
    }
    q.method.rerank_k = 3;
    EXPECT_EQ(search(index_, q).size(), 3u);
}

TEST_F(EngineTest, ExplanationSumsToScore) {
    for (MethodKind kind : kSingleStage) {
        for (const auto& q : queries_) {
            const auto hits = search(index_, spec(q, kind, 15));
            for (const auto& h : hits) {
                const auto ex = explain(index_, spec(q, kind), h.doc_id);
                double sum = 0.0;
                for (const auto& t : ex.terms) {
                    sum += t.contribution;
                }
                for (const auto& n : ex.norm_terms) {
                    sum += n.value;
                }
                EXPECT_NEAR(sum, h.score, 1e-12) << method_name(kind);
                EXPECT_NEAR(ex.score, h.score, 1e-12);
                EXPECT_EQ(ex.distance.has_value(),
                          kind == MethodKind::kManhattan || kind == MethodKind::kEuclid);
            }
        }
    }
    EXPECT_THROW(explain(index_, spec(queries_[0], MethodKind::kDot), 9999), Error);
}

TEST_F(EngineTest, QueryFeaturesAbsentFromIndex) {
    const auto q = SparseVector::of({{"zzz_unknown", 0.4}});
    const auto hits = search(index_, spec(q, MethodKind::kCosineIndexed, 3));
    ASSERT_EQ(hits.size(), 3u);
    EXPECT_EQ(hits[0].score, 0.0);
    EXPECT_EQ(hits[0].doc_id, 0u);
    EXPECT_TRUE(
        search(index_, spec(q, MethodKind::kDot, 3, CandidateMode::kPostingDriven)).empty());
}

TEST_F(EngineTest, ConcurrentSearchesAgree) {
    const auto expected = search(index_, spec(queries_[2], MethodKind::kManhattan, 50));
    std::vector<std::jthread> threads;
    std::atomic<int> mismatches{0};
    for (int t = 0; t < 4; ++t) {
        threads.emplace_back([&] {
            for (int i = 0; i < 50; ++i) {
                if (search(index_, spec(queries_[2], MethodKind::kManhattan, 50)) != expected) {
                    ++mismatches;
                }
            }
        });
    }
    threads.clear();
    EXPECT_EQ(mismatches.load(), 0);
}

TEST(EngineErrorsTest, InvalidQueries) {
    auto code = [](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            return e.code();
        }
        return ErrorCode::kInvalidParams;
    };
    InvertedIndex empty;
    const auto v = SparseVector::of({{"a", 0.5}});
    EXPECT_EQ(code([&] { search(empty, spec(v, MethodKind::kDot)); }), ErrorCode::kEmptyIndex);

    InvertedIndex index;
    index.add_document("a", v);
    EXPECT_EQ(code([&] { search(index, spec(SparseVector{}, MethodKind::kDot)); }),
              ErrorCode::kZeroVector);
    EXPECT_EQ(code([&] {
                  search(index, spec(SparseVector::of({{"a", 0.0}}), MethodKind::kCosineExact));
              }),
              ErrorCode::kZeroVector);
    EXPECT_THROW(search(index, spec(v, MethodKind::kDot, 0)), Error);
    auto rerank = spec(v, MethodKind::kDotThenCosRerank);
    rerank.method.rerank_k = 0;
    EXPECT_THROW(search(index, rerank), Error);
    auto zero_m = spec(v, MethodKind::kDot);
    zero_m.feature_number = 0;
    EXPECT_THROW(search(index, zero_m), Error);
}

}  // namespace
}  // namespace nsix
