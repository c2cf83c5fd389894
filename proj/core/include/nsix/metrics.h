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
#include <set>
#include <span>
#include <string>

namespace nsix {

/// Mean over relevant items of precision at the rank of each relevant hit;
/// relevant items missing from the ranking contribute 0. A relevant name
/// that repeats in `ranked` counts only at its first position.
/// Throws Error(kEmptyRelevantSet).
double average_precision(std::span<const std::string> ranked,
                         const std::set<std::string>& relevant);

/// Throws Error(kEmptyList).
double mean_average_precision(std::span<const double> average_precisions);

struct LatencySummary {
    double mean_s = 0.0;
    double p50_s = 0.0;
    double p95_s = 0.0;
    std::size_t samples = 0;
};

/// Percentiles use the nearest-rank definition: the ceil(p * n)-th smallest
/// sample. Throws Error(kEmptyList).
LatencySummary latency_report(std::span<const double> samples_s);

double percentile_nearest_rank(std::span<const double> samples, double fraction);

/// Spearman rank correlation with average ranks for ties; 0 when either
/// side is constant.
double spearman_rho(std::span<const double> a, std::span<const double> b);

}  // namespace nsix
