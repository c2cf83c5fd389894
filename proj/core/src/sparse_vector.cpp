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

#include "nsix/sparse_vector.h"

#include <algorithm>
#include <cmath>

#include "nsix/error.h"

namespace nsix {

FeatureId::FeatureId(std::string id) : id_(std::move(id)) {
    if (id_.empty()) {
        throw Error(ErrorCode::kInvalidVector, "feature id must not be empty");
    }
}

SparseVector SparseVector::from_entries(std::vector<Entry> entries) {
    for (const auto& e : entries) {
        if (!std::isfinite(e.weight) || e.weight < 0.0) {
            throw Error(ErrorCode::kInvalidVector,
                        "weight of feature '" + e.feature.str() + "' must be finite and >= 0");
        }
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.feature < b.feature; });
    auto dup =
        std::adjacent_find(entries.begin(), entries.end(),
                           [](const Entry& a, const Entry& b) { return a.feature == b.feature; });
    if (dup != entries.end()) {
        throw Error(ErrorCode::kInvalidVector, "duplicate feature '" + dup->feature.str() + "'");
    }
    return SparseVector(std::move(entries));
}

SparseVector SparseVector::of(std::initializer_list<std::pair<std::string_view, double>> entries) {
    std::vector<Entry> out;
    out.reserve(entries.size());
    for (const auto& [id, w] : entries) {
        out.push_back({FeatureId(std::string(id)), w});
    }
    return from_entries(std::move(out));
}

std::optional<double> SparseVector::weight(const FeatureId& feature) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), feature,
                               [](const Entry& e, const FeatureId& f) { return e.feature < f; });
    if (it == entries_.end() || it->feature != feature) {
        return std::nullopt;
    }
    return it->weight;
}

bool SparseVector::has_positive_weight() const noexcept {
    return std::any_of(entries_.begin(), entries_.end(),
                       [](const Entry& e) { return e.weight > 0.0; });
}

double l1_norm(const SparseVector& v) noexcept {
    double sum = 0.0;
    for (const auto& e : v) {
        sum += e.weight;
    }
    return sum;
}

double l2_norm(const SparseVector& v) noexcept { return compute_norms(v).l2; }

VectorNorms compute_norms(const SparseVector& v) noexcept {
    VectorNorms n;
    for (const auto& e : v) {
        n.l1 += e.weight;
        n.l2_squared += e.weight * e.weight;
    }
    n.l2 = std::sqrt(n.l2_squared);
    return n;
}

SparseVector normalize_l2(const SparseVector& v) {
    const double norm = l2_norm(v);
    if (!(norm > 0.0)) {
        throw Error(ErrorCode::kZeroVector, "cannot normalize a vector without positive weight");
    }
    std::vector<SparseVector::Entry> out(v.begin(), v.end());
    for (auto& e : out) {
        e.weight /= norm;
    }
    return SparseVector::from_entries(std::move(out));
}

SparseVector truncate_top_m(const SparseVector& v, std::size_t m) {
    if (m == 0) {
        throw Error(ErrorCode::kInvalidParams, "feature number must be >= 1");
    }
    if (m >= v.size()) {
        return v;
    }
    std::vector<SparseVector::Entry> out(v.begin(), v.end());
    // entries are already in FeatureId order, so a stable sort by weight
    // keeps the smaller id first among equal weights
    std::stable_sort(out.begin(), out.end(),
                     [](const auto& a, const auto& b) { return a.weight > b.weight; });
    out.erase(out.begin() + static_cast<std::ptrdiff_t>(m), out.end());
    return SparseVector::from_entries(std::move(out));
}

SparseVector drop_zeros(const SparseVector& v) {
    std::vector<SparseVector::Entry> out;
    out.reserve(v.size());
    std::copy_if(v.begin(), v.end(), std::back_inserter(out),
                 [](const auto& e) { return e.weight != 0.0; });
    return SparseVector::from_entries(std::move(out));
}

}  // namespace nsix
