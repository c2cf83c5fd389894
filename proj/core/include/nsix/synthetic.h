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
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nsix/sparse_vector.h"

namespace nsix {

struct CorpusDoc {
    std::string file_name;
    SparseVector features;
};

/// Concentration of the symmetric Dirichlet used for synthetic softmax
/// outputs. Small values give peaked, classifier-like distributions.
inline constexpr double kDefaultDirichletAlpha = 0.002;

/// "n" followed by the zero-padded index, shaped like a WordNet synset id.
std::string synthetic_feature_id(std::size_t index);

struct SyntheticCorpusParams {
    std::size_t n_docs = 0;
    std::size_t n_features = 1000;
    std::size_t sparsity = 10;
    std::uint64_t seed = 0;
    double alpha = kDefaultDirichletAlpha;
};

/// Each document is a Dirichlet(alpha) draw over n_features (summing to 1)
/// cut down to its `sparsity` strongest components. Deterministic in the
/// seed. Throws Error(kInvalidParams) for sparsity 0 or > n_features, or
/// alpha <= 0.
std::vector<CorpusDoc> generate_synthetic_corpus(const SyntheticCorpusParams& params);

/// One seeded Dirichlet(alpha) draw over `vocabulary`, zero weights removed.
SparseVector dirichlet_vector(std::span<const FeatureId> vocabulary, double alpha,
                              std::uint64_t seed);

struct Perturbation {
    enum class Kind { kNone, kResolution, kPartial };

    Kind kind = Kind::kNone;
    double rate = 1.0;  // kResolution, in (0, 1]
    int quadrant = 0;   // kPartial, 1..4
    std::uint64_t seed = 0;

    static Perturbation none() { return {}; }
    static Perturbation resolution(double rate, std::uint64_t seed = 0) {
        return {Kind::kResolution, rate, 0, seed};
    }
    static Perturbation partial(int quadrant, std::uint64_t seed = 0) {
        return {Kind::kPartial, 1.0, quadrant, seed};
    }

    /// "none", "res:0.8", "partial:2".
    std::string label() const;

    /// Inverse of label(). Throws Error(kInvalidParams).
    static Perturbation parse(std::string_view text, std::uint64_t seed = 0);

    /// Same perturbation with a different seed.
    Perturbation with_seed(std::uint64_t s) const {
        Perturbation p = *this;
        p.seed = s;
        return p;
    }
};

/// Simulated image degradation of a query's feature vector.
///
/// kResolution mixes rate * v + (1 - rate) * noise, where noise is a seeded
/// Dirichlet draw over `vocabulary`, then keeps the |v| strongest entries.
/// The noise depends only on the seed, so sweeping the rate for one seed
/// moves along a single path from v toward the noise.
///
/// kPartial keeps a seeded random subset of entries carrying about a quarter
/// of v's mass (at least one entry) and rescales it back to v's mass.
///
/// Throws kZeroVector when v or the result has no positive weight, and
/// kInvalidParams for an out-of-range rate / quadrant or an empty
/// vocabulary with rate < 1.
SparseVector perturb_query(const SparseVector& v, const Perturbation& p,
                           std::span<const FeatureId> vocabulary);

/// Corpus in which plain inner product fails self-retrieval: every target
/// document is diffuse, and `distractors_per_target` peaked documents put
/// most of their mass on the target's strongest feature, so they outscore
/// the target's own entry under dot product while cosine still ranks the
/// target first.
struct DotTrapCorpus {
    std::vector<CorpusDoc> docs;
    std::vector<std::string> targets;  // file names of the diffuse documents
};

DotTrapCorpus make_dot_trap_corpus(std::size_t n_targets, std::size_t distractors_per_target,
                                   std::uint64_t seed);

/// splitmix64 finalizer; used to derive independent per-query seeds.
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;

}  // namespace nsix
