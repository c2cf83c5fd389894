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

#include "nsix/metrics.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "nsix/error.h"

namespace nsix {

double average_precision(std::span<const std::string> ranked,
                         const std::set<std::string>& relevant) {
    if (relevant.empty()) {
        throw Error(ErrorCode::kEmptyRelevantSet, "query has no relevant documents");
    }
    std::set<std::string> found;
    double sum = 0.0;
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        if (relevant.contains(ranked[i]) && found.insert(ranked[i]).second) {
            sum += static_cast<double>(found.size()) / static_cast<double>(i + 1);
        }
    }
    return sum / static_cast<double>(relevant.size());
}

double mean_average_precision(std::span<const double> average_precisions) {
    if (average_precisions.empty()) {
        throw Error(ErrorCode::kEmptyList, "no average precision values");
    }
    const double sum = std::accumulate(average_precisions.begin(), average_precisions.end(), 0.0);
    return sum / static_cast<double>(average_precisions.size());
}

double percentile_nearest_rank(std::span<const double> samples, double fraction) {
    if (samples.empty()) {
        throw Error(ErrorCode::kEmptyList, "no samples");
    }
    std::vector<double> sorted(samples.begin(), samples.end());
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(fraction * n));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

LatencySummary latency_report(std::span<const double> samples_s) {
    if (samples_s.empty()) {
        throw Error(ErrorCode::kEmptyList, "no latency samples");
    }
    LatencySummary out;
    out.samples = samples_s.size();
    out.mean_s = std::accumulate(samples_s.begin(), samples_s.end(), 0.0) /
                 static_cast<double>(samples_s.size());
    out.p50_s = percentile_nearest_rank(samples_s, 0.50);
    out.p95_s = percentile_nearest_rank(samples_s, 0.95);
    return out;
}

namespace {

std::vector<double> average_ranks(std::span<const double> v) {
    std::vector<std::size_t> order(v.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> ranks(v.size());
    for (std::size_t i = 0; i < order.size();) {
        std::size_t j = i;
        while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) {
            ++j;
        }
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t k = i; k <= j; ++k) {
            ranks[order[k]] = r;
        }
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman_rho(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size() || a.size() < 2) {
        throw Error(ErrorCode::kInvalidParams, "spearman needs two equal-length series of >= 2");
    }
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    const double n = static_cast<double>(a.size());
    const double ma = std::accumulate(ra.begin(), ra.end(), 0.0) / n;
    const double mb = std::accumulate(rb.begin(), rb.end(), 0.0) / n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    if (va == 0.0 || vb == 0.0) {
        return 0.0;
    }
    return cov / std::sqrt(va * vb);
}

}  // namespace nsix
