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

#include <algorithm>

#include "nsix/error.h"

namespace nsix {
namespace {

// Dense per-thread accumulator; only the touched slots are reset after a
// search, so posting-driven cost stays proportional to the postings read.
class Accumulator {
public:
    void prepare(std::size_t doc_count) {
        if (values_.size() < doc_count) {
            values_.resize(doc_count, 0.0);
            seen_.resize(doc_count, 0);
        }
    }
    void add(DocId doc, double v) {
        if (!seen_[doc]) {
            seen_[doc] = 1;
            touched_.push_back(doc);
        }
        values_[doc] += v;
    }
    double value(DocId doc) const { return values_[doc]; }
    const std::vector<DocId>& touched() const { return touched_; }
    void reset() {
        for (DocId d : touched_) {
            values_[d] = 0.0;
            seen_[d] = 0;
        }
        touched_.clear();
    }

private:
    std::vector<double> values_;
    std::vector<std::uint8_t> seen_;
    std::vector<DocId> touched_;
};

struct AccumulatorLease {
    explicit AccumulatorLease(std::size_t doc_count) { acc.prepare(doc_count); }
    ~AccumulatorLease() { acc.reset(); }
    static thread_local Accumulator acc;
};
thread_local Accumulator AccumulatorLease::acc;

double posting_term(MethodKind kind, double x, const Posting& p) noexcept {
    switch (kind) {
        case MethodKind::kCosineIndexed:
            return dot_term(x, p.c);
        case MethodKind::kManhattan:
            return manhattan_term(x, p.s);
        default:
            return dot_term(x, p.s);
    }
}

double finalize(MethodKind kind, double acc, const VectorNorms& q, const VectorNorms& d) noexcept {
    switch (kind) {
        case MethodKind::kCosineExact:
            return acc / (q.l2 * d.l2);
        case MethodKind::kManhattan:
            return distance_to_score(finish_manhattan_distance(acc, q.l1, d.l1),
                                     DistanceKind::kManhattan);
        case MethodKind::kEuclid:
            return distance_to_score(euclid_rank_score(acc, d.l2_squared),
                                     DistanceKind::kEuclidRank);
        default:
            return acc;
    }
}

std::vector<ScoredDoc> select_top_k(std::vector<ScoredDoc> scored, std::size_t k) {
    auto cmp = [](const ScoredDoc& a, const ScoredDoc& b) { return ranks_before(a, b); };
    if (k < scored.size()) {
        std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k),
                          scored.end(), cmp);
        scored.resize(k);
    } else {
        std::sort(scored.begin(), scored.end(), cmp);
    }
    return scored;
}

std::vector<ScoredDoc> run_single_pass(const InvertedIndex& index, const SparseVector& query,
                                       MethodKind kind, CandidateMode mode, std::size_t top_k,
                                       SearchStats& stats) {
    const std::size_t n = index.doc_count();
    AccumulatorLease lease(n);
    auto& acc = AccumulatorLease::acc;

    for (const auto& e : query) {
        const PostingList* list = index.find_postings(e.feature);
        if (list == nullptr) {
            continue;
        }
        stats.postings_traversed += list->size();
        for (const Posting& p : *list) {
            acc.add(p.doc_id, posting_term(kind, e.weight, p));
            ++stats.accumulator_updates;
        }
    }

    const VectorNorms qn = compute_norms(query);
    const auto docs = index.documents();
    std::vector<ScoredDoc> scored;
    auto score_one = [&](DocId d) {
        scored.push_back({d, finalize(kind, acc.value(d), qn, docs[d].norms)});
    };
    if (mode == CandidateMode::kExhaustive) {
        scored.reserve(n);
        for (DocId d = 0; d < n; ++d) {
            score_one(d);
        }
    } else {
        scored.reserve(acc.touched().size());
        for (DocId d : acc.touched()) {
            score_one(d);
        }
    }
    stats.candidates_scored += scored.size();
    return select_top_k(std::move(scored), top_k);
}

void validate(const InvertedIndex& index, const QuerySpec& query) {
    if (index.doc_count() == 0) {
        throw Error(ErrorCode::kEmptyIndex, "index has no documents");
    }
    if (query.top_k == 0) {
        throw Error(ErrorCode::kInvalidParams, "top_k must be >= 1");
    }
    if (query.method.kind == MethodKind::kDotThenCosRerank && query.method.rerank_k == 0) {
        throw Error(ErrorCode::kInvalidParams, "rerank window must be >= 1");
    }
}

}  // namespace

bool posting_mode_is_exact(MethodKind kind) noexcept {
    return kind != MethodKind::kManhattan && kind != MethodKind::kEuclid;
}

SparseVector prepare_query(const QuerySpec& query) {
    SparseVector v = drop_zeros(query.vector);
    if (query.feature_number) {
        v = truncate_top_m(v, *query.feature_number);
    }
    if (v.empty()) {
        throw Error(ErrorCode::kZeroVector, "query has no positive weight");
    }
    return v;
}

std::vector<SearchHit> search(const InvertedIndex& index, const QuerySpec& query,
                              SearchStats* stats) {
    validate(index, query);
    const SparseVector q = prepare_query(query);

    SearchStats local;
    std::vector<ScoredDoc> ranked;
    if (query.method.kind == MethodKind::kDotThenCosRerank) {
        const std::size_t window = query.method.rerank_k;
        auto first =
            run_single_pass(index, q, MethodKind::kDot, query.candidate_mode, window, local);
        ranked = rerank_by_exact_cosine(index, q, first, window);
        if (ranked.size() > query.top_k) {
            ranked.resize(query.top_k);
        }
    } else {
        ranked =
            run_single_pass(index, q, query.method.kind, query.candidate_mode, query.top_k, local);
    }
    if (stats != nullptr) {
        *stats = local;
    }

    std::vector<SearchHit> hits;
    hits.reserve(ranked.size());
    for (const auto& r : ranked) {
        hits.push_back({r.doc_id, index.document(r.doc_id).file_name, r.score});
    }
    return hits;
}

Explanation explain(const InvertedIndex& index, const QuerySpec& query, DocId doc_id) {
    const DocumentRecord& doc = index.document(doc_id);
    const SparseVector q = prepare_query(query);
    const VectorNorms qn = compute_norms(q);
    MethodKind kind = query.method.kind;
    if (kind == MethodKind::kDotThenCosRerank) {
        kind = MethodKind::kCosineExact;
    }

    Explanation out;
    out.doc_id = doc_id;
    out.method = query.method.kind;

    double acc = 0.0;
    auto qi = q.begin();
    auto di = doc.features.begin();
    while (qi != q.end() && di != doc.features.end()) {
        if (qi->feature < di->feature) {
            ++qi;
            continue;
        }
        if (di->feature < qi->feature) {
            ++di;
            continue;
        }
        const double s = di->weight;
        const double c = s / doc.norms.l2;
        const double x = qi->weight;
        ExplainTerm t{qi->feature, x, s, 0.0};
        switch (kind) {
            case MethodKind::kCosineIndexed:
                t.doc_value = c;
                t.contribution = dot_term(x, c);
                acc += t.contribution;
                break;
            case MethodKind::kCosineExact:
                acc += dot_term(x, s);
                t.contribution = dot_term(x, s) / (qn.l2 * doc.norms.l2);
                break;
            case MethodKind::kManhattan:
                acc += manhattan_term(x, s);
                t.contribution = -manhattan_term(x, s);
                break;
            case MethodKind::kEuclid:
                acc += dot_term(x, s);
                t.contribution = 2.0 * dot_term(x, s);
                break;
            default:
                t.contribution = dot_term(x, s);
                acc += t.contribution;
                break;
        }
        out.terms.push_back(std::move(t));
        ++qi;
        ++di;
    }

    out.score = finalize(kind, acc, qn, doc.norms);
    if (kind == MethodKind::kManhattan) {
        out.norm_terms = {
            {"complement", kManhattanComplement}, {"query_l1", -qn.l1}, {"doc_l1", -doc.norms.l1}};
        out.distance = finish_manhattan_distance(acc, qn.l1, doc.norms.l1);
    } else if (kind == MethodKind::kEuclid) {
        out.norm_terms = {{"doc_l2_squared", -doc.norms.l2_squared}};
        out.distance = euclid_distance_from_rank(out.score, qn.l2_squared);
    }
    return out;
}

}  // namespace nsix
