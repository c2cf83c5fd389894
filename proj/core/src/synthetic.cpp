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

#include "nsix/synthetic.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>

#include "nsix/error.h"

namespace nsix {
namespace {

// Unnormalized gamma draws; redrawn in the (astronomically unlikely) case
// that every draw underflows to zero.
std::vector<double> draw_dirichlet(std::mt19937_64& rng, std::size_t n, double alpha) {
    std::gamma_distribution<double> gamma(alpha, 1.0);
    std::vector<double> w(n);
    double sum = 0.0;
    do {
        sum = 0.0;
        for (auto& x : w) {
            x = gamma(rng);
            sum += x;
        }
    } while (!(sum > 0.0));
    for (auto& x : w) {
        x /= sum;
    }
    return w;
}

std::string padded(std::string_view prefix, std::size_t value, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%0*zu", width, value);
    return std::string(prefix) + buf;
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept {
    std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::string synthetic_feature_id(std::size_t index) { return padded("n", index, 8); }

std::vector<CorpusDoc> generate_synthetic_corpus(const SyntheticCorpusParams& params) {
    if (params.n_features == 0 || params.sparsity == 0 || params.sparsity > params.n_features) {
        throw Error(ErrorCode::kInvalidParams, "need 1 <= sparsity <= n_features (got sparsity " +
                                                   std::to_string(params.sparsity) +
                                                   ", n_features " +
                                                   std::to_string(params.n_features) + ")");
    }
    if (!(params.alpha > 0.0)) {
        throw Error(ErrorCode::kInvalidParams, "dirichlet alpha must be > 0");
    }

    std::vector<std::string> ids(params.n_features);
    for (std::size_t i = 0; i < ids.size(); ++i) {
        ids[i] = synthetic_feature_id(i);
    }

    std::mt19937_64 rng(params.seed);
    std::vector<std::size_t> order(params.n_features);
    std::vector<CorpusDoc> corpus;
    corpus.reserve(params.n_docs);
    for (std::size_t d = 0; d < params.n_docs; ++d) {
        const auto w = draw_dirichlet(rng, params.n_features, params.alpha);
        std::iota(order.begin(), order.end(), 0);
        const auto keep = static_cast<std::ptrdiff_t>(params.sparsity);
        std::partial_sort(
            order.begin(), order.begin() + keep, order.end(),
            [&](std::size_t a, std::size_t b) { return w[a] != w[b] ? w[a] > w[b] : a < b; });
        std::vector<SparseVector::Entry> entries;
        entries.reserve(params.sparsity);
        for (auto it = order.begin(); it != order.begin() + keep; ++it) {
            entries.push_back({FeatureId(ids[*it]), w[*it]});
        }
        corpus.push_back({padded("doc_", d, 6), SparseVector::from_entries(std::move(entries))});
    }
    return corpus;
}

SparseVector dirichlet_vector(std::span<const FeatureId> vocabulary, double alpha,
                              std::uint64_t seed) {
    if (vocabulary.empty() || !(alpha > 0.0)) {
        throw Error(ErrorCode::kInvalidParams, "dirichlet draw needs a vocabulary and alpha > 0");
    }
    std::mt19937_64 rng(seed);
    const auto w = draw_dirichlet(rng, vocabulary.size(), alpha);
    std::vector<SparseVector::Entry> entries;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] > 0.0) {
            entries.push_back({vocabulary[i], w[i]});
        }
    }
    return SparseVector::from_entries(std::move(entries));
}

std::string Perturbation::label() const {
    switch (kind) {
        case Kind::kNone:
            return "none";
        case Kind::kResolution: {
            char buf[32];
            std::snprintf(buf, sizeof(buf), "res:%g", rate);
            return buf;
        }
        case Kind::kPartial:
            return "partial:" + std::to_string(quadrant);
    }
    return "?";
}

Perturbation Perturbation::parse(std::string_view text, std::uint64_t seed) {
    auto bad = [&]() {
        return Error(ErrorCode::kInvalidParams,
                     "perturbation must be none, res:R with 0<R<=1, or partial:Q with Q in 1..4 "
                     "(got '" +
                         std::string(text) + "')");
    };
    if (text == "none") {
        return none().with_seed(seed);
    }
    if (text.starts_with("res:")) {
        const std::string arg(text.substr(4));
        std::size_t used = 0;
        double rate = 0.0;
        try {
            rate = std::stod(arg, &used);
        } catch (const std::exception&) {
            throw bad();
        }
        if (used != arg.size() || !(rate > 0.0 && rate <= 1.0)) {
            throw bad();
        }
        return resolution(rate, seed);
    }
    if (text.starts_with("partial:")) {
        const auto arg = text.substr(8);
        int q = 0;
        auto [ptr, ec] = std::from_chars(arg.data(), arg.data() + arg.size(), q);
        if (ec != std::errc() || ptr != arg.data() + arg.size() || q < 1 || q > 4) {
            throw bad();
        }
        return partial(q, seed);
    }
    throw bad();
}

SparseVector perturb_query(const SparseVector& v, const Perturbation& p,
                           std::span<const FeatureId> vocabulary) {
    if (!v.has_positive_weight()) {
        throw Error(ErrorCode::kZeroVector, "cannot perturb a vector without positive weight");
    }
    switch (p.kind) {
        case Perturbation::Kind::kNone:
            return v;
        case Perturbation::Kind::kResolution: {
            if (!(p.rate > 0.0 && p.rate <= 1.0)) {
                throw Error(ErrorCode::kInvalidParams, "resolution rate must be in (0, 1]");
            }
            if (p.rate == 1.0) {
                return v;
            }
            const SparseVector noise = dirichlet_vector(vocabulary, kDefaultDirichletAlpha, p.seed);
            std::map<FeatureId, double> mixed;
            for (const auto& e : v) {
                mixed[e.feature] += p.rate * e.weight;
            }
            for (const auto& e : noise) {
                mixed[e.feature] += (1.0 - p.rate) * e.weight;
            }
            std::vector<SparseVector::Entry> entries;
            entries.reserve(mixed.size());
            for (auto& [f, w] : mixed) {
                entries.push_back({f, w});
            }
            SparseVector out = drop_zeros(
                truncate_top_m(SparseVector::from_entries(std::move(entries)), v.size()));
            if (out.empty()) {
                throw Error(ErrorCode::kZeroVector, "perturbed query has no positive weight");
            }
            return out;
        }
        case Perturbation::Kind::kPartial: {
            if (p.quadrant < 1 || p.quadrant > 4) {
                throw Error(ErrorCode::kInvalidParams, "quadrant must be in 1..4");
            }
            std::mt19937_64 rng(mix_seed(p.seed, static_cast<std::uint64_t>(p.quadrant)));
            std::vector<std::size_t> order(v.size());
            std::iota(order.begin(), order.end(), 0);
            std::shuffle(order.begin(), order.end(), rng);

            const double total = l1_norm(v);
            double kept_mass = 0.0;
            std::vector<SparseVector::Entry> kept;
            for (std::size_t i : order) {
                if (v[i].weight == 0.0) {
                    continue;
                }
                kept.push_back(v[i]);
                kept_mass += v[i].weight;
                if (kept_mass >= 0.25 * total) {
                    break;
                }
            }
            for (auto& e : kept) {
                e.weight *= total / kept_mass;
            }
            return SparseVector::from_entries(std::move(kept));
        }
    }
    return v;
}

DotTrapCorpus make_dot_trap_corpus(std::size_t n_targets, std::size_t distractors_per_target,
                                   std::uint64_t seed) {
    constexpr std::size_t kTargetFeatures = 6;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // feature id blocks: targets first, then one private feature per distractor
    const std::size_t distractor_base = n_targets * kTargetFeatures;

    DotTrapCorpus out;
    for (std::size_t t = 0; t < n_targets; ++t) {
        // diffuse target: strongest weight ~0.31, five others sharing the rest
        const double top = 0.30 + 0.02 * unit(rng);
        std::vector<double> rest(kTargetFeatures - 1);
        double rest_sum = 0.0;
        for (auto& r : rest) {
            r = 1.0 + 0.05 * (2.0 * unit(rng) - 1.0);
            rest_sum += r;
        }
        std::vector<SparseVector::Entry> entries;
        entries.push_back({FeatureId(synthetic_feature_id(t * kTargetFeatures)), top});
        for (std::size_t i = 0; i < rest.size(); ++i) {
            entries.push_back({FeatureId(synthetic_feature_id(t * kTargetFeatures + 1 + i)),
                               (1.0 - top) * rest[i] / rest_sum});
        }
        const std::string target_name = padded("target_", t, 4);
        out.targets.push_back(target_name);
        out.docs.push_back({target_name, SparseVector::from_entries(std::move(entries))});

        // peaked distractors: dot with the target (>= 0.246) beats the
        // target's squared norm (<= 0.21)
        for (std::size_t d = 0; d < distractors_per_target; ++d) {
            const double peak = 0.82 + 0.15 * unit(rng);
            const std::size_t own = distractor_base + t * distractors_per_target + d;
            std::vector<SparseVector::Entry> de{
                {FeatureId(synthetic_feature_id(t * kTargetFeatures)), peak},
                {FeatureId(synthetic_feature_id(own)), (1.0 - peak) * (0.5 + 0.5 * unit(rng))},
            };
            out.docs.push_back({padded("distractor_", t, 4) + padded("_", d, 3),
                                SparseVector::from_entries(std::move(de))});
        }
    }
    return out;
}

}  // namespace nsix
