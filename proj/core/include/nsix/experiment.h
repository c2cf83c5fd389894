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
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "nsix/engine.h"
#include "nsix/inverted_index.h"
#include "nsix/metrics.h"
#include "nsix/scoring.h"
#include "nsix/synthetic.h"

namespace nsix {

/// query id -> relevant file names. Stored as JSON Lines:
///   {"query": "<file name>", "relevant": ["<file name>", ...]}
struct Qrels {
    std::map<std::string, std::set<std::string>> relevant;
};

/// Throws kIoError / kFormatError (with line number) / kEmptyRelevantSet.
Qrels read_qrels(const std::filesystem::path& path);

void write_qrels(const Qrels& qrels, const std::filesystem::path& path);

/// Each query is relevant only to itself (same-image retrieval).
Qrels self_qrels(std::span<const std::string> query_ids);

struct QueryCase {
    std::string id;
    SparseVector vector;
};

struct ExperimentGrid {
    std::vector<ScoringMethod> methods;
    /// nullopt runs the query untruncated.
    std::vector<std::optional<std::size_t>> feature_numbers{std::nullopt};
    std::vector<Perturbation> perturbations{Perturbation::none()};
    std::size_t top_k = kDefaultTopK;
    CandidateMode mode = CandidateMode::kExhaustive;
};

struct TimingOptions {
    bool enabled = true;
    std::size_t warmup = 3;
    /// Whole passes over the query set are repeated until at least this
    /// many search calls have been timed.
    std::size_t min_samples = 10;
};

struct ExperimentOptions {
    TimingOptions timing;
    /// Worker threads for the relevance phase. Timing always runs
    /// afterwards on the calling thread with nothing else scheduled.
    std::size_t jobs = 1;
};

struct EvalRun {
    ScoringMethod method;
    std::optional<std::size_t> feature_number;
    std::size_t top_k = kDefaultTopK;
    Perturbation perturbation;
    std::vector<std::string> query_ids;
    std::vector<double> per_query_ap;
    double map = 0.0;
    std::vector<double> latency_samples;
    std::optional<LatencySummary> latency;
};

/// Runs every (perturbation, feature number, method) cell: perturb each
/// query (seed derived from the perturbation seed and the query position),
/// truncate, search, score average precision against `qrels`, and time the
/// search calls. Failures are rethrown with the cell's coordinates.
std::vector<EvalRun> run_experiment(const InvertedIndex& index, std::span<const QueryCase> queries,
                                    const Qrels& qrels, const ExperimentGrid& grid,
                                    const ExperimentOptions& options = {});

/// Machine-readable report (sorted keys). With include_timing = false the
/// output depends only on the inputs and seeds.
std::string report_json(std::span<const EvalRun> runs, bool include_timing = true);

/// Aligned-column MAP and latency tables: methods as rows (dot, l1, l2, cos,
/// cos-exact, dot+cos), the swept variable as columns in ascending order.
std::string report_table(std::span<const EvalRun> runs);

}  // namespace nsix
