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

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include "nsix/inverted_index.h"
#include "nsix/scoring.h"
#include "nsix/sparse_vector.h"

namespace nsix::testing {

/// Scratch directory removed on destruction.
class TempDir {
public:
    TempDir() {
        static std::uint64_t counter = 0;
        std::random_device rd;
        path_ = std::filesystem::temp_directory_path() /
                ("nsix_test_" + std::to_string(rd()) + "_" + std::to_string(counter++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

inline std::string feature_name(std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "f%05zu", i);
    return buf;
}

/// Random vector over features [0, dim): between 1 and max_nnz distinct
/// features, independent uniform weights rescaled to a random total mass in
/// [min_mass, 1].
inline SparseVector random_vector(std::mt19937_64& rng, std::size_t dim, std::size_t max_nnz,
                                  double min_mass = 0.2) {
    std::uniform_int_distribution<std::size_t> nnz_dist(1, std::min(dim, max_nnz));
    const std::size_t nnz = nnz_dist(rng);
    std::vector<std::size_t> ids(dim);
    std::iota(ids.begin(), ids.end(), 0);
    std::shuffle(ids.begin(), ids.end(), rng);
    std::uniform_real_distribution<double> w(0.01, 1.0);
    std::vector<double> weights(nnz);
    double sum = 0.0;
    for (auto& x : weights) {
        x = w(rng);
        sum += x;
    }
    const double mass = std::uniform_real_distribution<double>(min_mass, 1.0)(rng);
    std::vector<SparseVector::Entry> entries;
    for (std::size_t i = 0; i < nnz; ++i) {
        entries.push_back({FeatureId(feature_name(ids[i])), weights[i] / sum * mass});
    }
    return SparseVector::from_entries(std::move(entries));
}

/// Dense copy of v over features [0, dim), indexed by the number in the
/// feature name produced by feature_name().
inline std::vector<double> to_dense(const SparseVector& v, std::size_t dim) {
    std::vector<double> out(dim, 0.0);
    for (const auto& e : v) {
        out.at(std::stoul(e.feature.str().substr(1))) = e.weight;
    }
    return out;
}

/// Brute-force scores straight from the definitions, oriented so that
/// higher is better. One pass yields every method.
struct DenseScores {
    double dot;
    double cos_exact;
    double cos_indexed;  // sum of x_i * (y_i / ||y||)
    double manhattan;    // 2 - ||x - y||_1
    double euclid;       // ||x||^2 - ||x - y||^2 = 2 x.y - ||y||^2

    double of(MethodKind kind) const {
        switch (kind) {
            case MethodKind::kDot:
                return dot;
            case MethodKind::kCosineExact:
            case MethodKind::kDotThenCosRerank:
                return cos_exact;
            case MethodKind::kCosineIndexed:
                return cos_indexed;
            case MethodKind::kManhattan:
                return manhattan;
            case MethodKind::kEuclid:
                return euclid;
        }
        return 0.0;
    }
};

inline DenseScores dense_scores(const std::vector<double>& x, const std::vector<double>& y) {
    double dot = 0.0;
    double xx = 0.0;
    double yy = 0.0;
    double l1 = 0.0;
    double l2sq = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        dot += x[i] * y[i];
        xx += x[i] * x[i];
        yy += y[i] * y[i];
        l1 += std::abs(x[i] - y[i]);
        l2sq += (x[i] - y[i]) * (x[i] - y[i]);
    }
    // indexed cosine: each document weight is normalized before the product
    const double y_norm = std::sqrt(yy);
    double cos_indexed = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        cos_indexed += x[i] * (y[i] / y_norm);
    }
    return {dot, dot / (std::sqrt(xx) * y_norm), cos_indexed, 2.0 - l1, xx - l2sq};
}

inline double dense_score(MethodKind kind, const std::vector<double>& x,
                          const std::vector<double>& y) {
    return dense_scores(x, y).of(kind);
}

struct OracleHit {
    DocId doc_id;
    double score;
};

/// Documents ordered by score descending, then doc id ascending.
inline std::vector<OracleHit> rank_by_score(const std::vector<double>& scores) {
    std::vector<OracleHit> out;
    for (std::size_t d = 0; d < scores.size(); ++d) {
        out.push_back({d, scores[d]});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const OracleHit& a, const OracleHit& b) { return a.score > b.score; });
    return out;
}

/// Full ranking of every document by dense scores, score descending then
/// doc id ascending.
inline std::vector<OracleHit> dense_ranking(MethodKind kind,
                                            const std::vector<std::vector<double>>& docs,
                                            const std::vector<double>& query) {
    std::vector<OracleHit> out;
    for (std::size_t d = 0; d < docs.size(); ++d) {
        out.push_back({d, dense_score(kind, query, docs[d])});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const OracleHit& a, const OracleHit& b) { return a.score > b.score; });
    return out;
}

inline InvertedIndex index_of(const std::vector<SparseVector>& docs) {
    InvertedIndex index;
    for (std::size_t i = 0; i < docs.size(); ++i) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "img_%05zu.jpg", i);
        index.add_document(buf, docs[i]);
    }
    return index;
}

}  // namespace nsix::testing
