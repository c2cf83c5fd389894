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

#include <compare>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nsix {

/// Opaque feature token, e.g. a WordNet synset id such as "n02123045".
/// Never empty; ordered lexicographically by bytes.
class FeatureId {
public:
    explicit FeatureId(std::string id);

    const std::string& str() const noexcept { return id_; }

    friend auto operator<=>(const FeatureId&, const FeatureId&) = default;
    friend bool operator==(const FeatureId&, const FeatureId&) = default;

private:
    std::string id_;
};

/// Sparse nonnegative feature vector, e.g. a softmax output truncated to its
/// strongest components. Entries are kept sorted by FeatureId with no
/// duplicates; every weight is finite and >= 0.
class SparseVector {
public:
    struct Entry {
        FeatureId feature;
        double weight;

        friend bool operator==(const Entry&, const Entry&) = default;
    };

    SparseVector() = default;

    /// Sorts by feature id and validates. Throws Error(kInvalidVector) on a
    /// duplicate feature or a negative / non-finite weight.
    static SparseVector from_entries(std::vector<Entry> entries);

    static SparseVector of(std::initializer_list<std::pair<std::string_view, double>> entries);

    std::span<const Entry> entries() const noexcept { return entries_; }
    auto begin() const noexcept { return entries_.begin(); }
    auto end() const noexcept { return entries_.end(); }
    std::size_t size() const noexcept { return entries_.size(); }
    bool empty() const noexcept { return entries_.empty(); }
    const Entry& operator[](std::size_t i) const { return entries_[i]; }

    std::optional<double> weight(const FeatureId& feature) const;

    bool has_positive_weight() const noexcept;

    friend bool operator==(const SparseVector&, const SparseVector&) = default;

private:
    explicit SparseVector(std::vector<Entry> sorted) : entries_(std::move(sorted)) {}

    std::vector<Entry> entries_;
};

struct VectorNorms {
    double l1 = 0.0;
    double l2 = 0.0;
    double l2_squared = 0.0;

    friend bool operator==(const VectorNorms&, const VectorNorms&) = default;
};

double l1_norm(const SparseVector& v) noexcept;

double l2_norm(const SparseVector& v) noexcept;

/// l2 is derived as sqrt(l2_squared) so the two agree to rounding.
VectorNorms compute_norms(const SparseVector& v) noexcept;

/// Unit vector y / ||y||. Throws Error(kZeroVector) when v has no positive weight.
SparseVector normalize_l2(const SparseVector& v);

/// Keeps the m largest weights (ties resolved toward the smaller FeatureId),
/// returned in canonical FeatureId order. m must be >= 1.
SparseVector truncate_top_m(const SparseVector& v, std::size_t m);

/// Copy of v without zero-weight entries.
SparseVector drop_zeros(const SparseVector& v);

}  // namespace nsix

template <>
struct std::hash<nsix::FeatureId> {
    std::size_t operator()(const nsix::FeatureId& id) const noexcept {
        return std::hash<std::string>{}(id.str());
    }
};
