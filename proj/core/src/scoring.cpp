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

#include <algorithm>

#include "nsix/error.h"

namespace nsix {

std::string_view method_name(MethodKind kind) noexcept {
    switch (kind) {
        case MethodKind::kDot:
            return "dot";
        case MethodKind::kCosineExact:
            return "cos-exact";
        case MethodKind::kCosineIndexed:
            return "cos";
        case MethodKind::kManhattan:
            return "l1";
        case MethodKind::kEuclid:
            return "l2";
        case MethodKind::kDotThenCosRerank:
            return "dot+cos";
    }
    return "?";
}

std::optional<MethodKind> parse_method(std::string_view name) noexcept {
    for (MethodKind kind : kReportMethodOrder) {
        if (method_name(kind) == name) {
            return kind;
        }
    }
    return std::nullopt;
}

double score_dot(const SparseVector& x, const SparseVector& y) noexcept {
    double sum = 0.0;
    auto xi = x.begin();
    auto yi = y.begin();
    while (xi != x.end() && yi != y.end()) {
        if (xi->feature < yi->feature) {
            ++xi;
        } else if (yi->feature < xi->feature) {
            ++yi;
        } else {
            sum += dot_term(xi->weight, yi->weight);
            ++xi;
            ++yi;
        }
    }
    return sum;
}

double score_cosine_exact(const SparseVector& x, const SparseVector& y) {
    const double nx = l2_norm(x);
    const double ny = l2_norm(y);
    if (!(nx > 0.0) || !(ny > 0.0)) {
        throw Error(ErrorCode::kZeroVector, "cosine of a zero vector is undefined");
    }
    return score_dot(x, y) / (nx * ny);
}

double score_cosine_indexed(std::span<const SharedTerm> terms) noexcept {
    double sum = 0.0;
    for (const auto& t : terms) {
        sum += dot_term(t.query, t.doc);
    }
    return sum;
}

double manhattan_distance(std::span<const SharedTerm> shared, double query_l1,
                          double doc_l1) noexcept {
    double sum = 0.0;
    for (const auto& t : shared) {
        sum += manhattan_term(t.query, t.doc);
    }
    return finish_manhattan_distance(sum, query_l1, doc_l1);
}

std::vector<SharedTerm> shared_terms(const SparseVector& x, const SparseVector& y) {
    std::vector<SharedTerm> out;
    auto xi = x.begin();
    auto yi = y.begin();
    while (xi != x.end() && yi != y.end()) {
        if (xi->feature < yi->feature) {
            ++xi;
        } else if (yi->feature < xi->feature) {
            ++yi;
        } else {
            out.push_back({xi->weight, yi->weight});
            ++xi;
            ++yi;
        }
    }
    return out;
}

std::vector<ScoredDoc> rerank_by_exact_cosine(const InvertedIndex& index, const SparseVector& query,
                                              std::span<const ScoredDoc> candidates,
                                              std::size_t k_rerank) {
    const std::size_t window = std::min(k_rerank, candidates.size());
    std::vector<ScoredDoc> out;
    out.reserve(window);
    for (const auto& c : candidates.first(window)) {
        out.push_back({c.doc_id, score_cosine_exact(query, index.document(c.doc_id).features)});
    }
    std::sort(out.begin(), out.end(),
              [](const ScoredDoc& a, const ScoredDoc& b) { return ranks_before(a, b); });
    return out;
}

}  // namespace nsix
