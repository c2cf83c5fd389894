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

// Search latency per method and query feature number on a synthetic
// softmax-like index.
//
//   build/benchmarks/search_benchmark --benchmark_filter=BM_Search

#include <benchmark/benchmark.h>

#include <vector>

#include "nsix/engine.h"
#include "nsix/index_file.h"
#include "nsix/synthetic.h"

namespace {

constexpr std::size_t kDocs = 20000;
constexpr std::size_t kFeatures = 1000;
constexpr std::size_t kQueries = 64;

const nsix::InvertedIndex& shared_index() {
    static const nsix::InvertedIndex index = [] {
        nsix::InvertedIndex out;
        for (const auto& d : nsix::generate_synthetic_corpus({kDocs, kFeatures, 10, 1})) {
            out.add_document(d.file_name, d.features);
        }
        return out;
    }();
    return index;
}

const std::vector<nsix::SparseVector>& shared_queries() {
    static const std::vector<nsix::SparseVector> queries = [] {
        std::vector<nsix::FeatureId> vocab;
        for (std::size_t i = 0; i < kFeatures; ++i) {
            vocab.emplace_back(nsix::synthetic_feature_id(i));
        }
        std::vector<nsix::SparseVector> out;
        for (std::size_t i = 0; i < kQueries; ++i) {
            out.push_back(nsix::dirichlet_vector(vocab, 1.0, 100 + i));
        }
        return out;
    }();
    return queries;
}

constexpr nsix::MethodKind kMethods[] = {
    nsix::MethodKind::kDot,         nsix::MethodKind::kManhattan,
    nsix::MethodKind::kEuclid,      nsix::MethodKind::kCosineIndexed,
    nsix::MethodKind::kCosineExact, nsix::MethodKind::kDotThenCosRerank,
};

void run_search(benchmark::State& state, nsix::CandidateMode mode) {
    const auto& index = shared_index();
    const auto& queries = shared_queries();
    nsix::QuerySpec spec;
    spec.method.kind = kMethods[state.range(0)];
    spec.feature_number = static_cast<std::size_t>(state.range(1));
    spec.candidate_mode = mode;
    std::size_t i = 0;
    double postings = 0.0;
    nsix::SearchStats stats;
    for (auto _ : state) {
        spec.vector = queries[i++ % queries.size()];
        benchmark::DoNotOptimize(nsix::search(index, spec, &stats));
        postings += static_cast<double>(stats.postings_traversed);
    }
    state.SetLabel(std::string(nsix::method_name(spec.method.kind)));
    state.counters["postings/query"] =
        benchmark::Counter(postings, benchmark::Counter::kAvgIterations);
}

void BM_SearchExhaustive(benchmark::State& state) {
    run_search(state, nsix::CandidateMode::kExhaustive);
}

void BM_SearchPosting(benchmark::State& state) {
    run_search(state, nsix::CandidateMode::kPostingDriven);
}

void search_args(benchmark::internal::Benchmark* b) {
    for (int method = 0; method < 6; ++method) {
        for (int m : {1, 10, 50, 100, 400}) {
            b->Args({method, m});
        }
    }
    b->ArgNames({"method", "m"})->Unit(benchmark::kMicrosecond);
}

BENCHMARK(BM_SearchExhaustive)->Apply(search_args);
BENCHMARK(BM_SearchPosting)->Apply(search_args);

void BM_BuildIndex(benchmark::State& state) {
    const auto corpus = nsix::generate_synthetic_corpus(
        {static_cast<std::size_t>(state.range(0)), kFeatures, 10, 2});
    for (auto _ : state) {
        nsix::InvertedIndex index;
        for (const auto& d : corpus) {
            index.add_document(d.file_name, d.features);
        }
        benchmark::DoNotOptimize(index.doc_count());
    }
    state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_BuildIndex)->Arg(1000)->Arg(10000)->Unit(benchmark::kMillisecond);

void BM_SerializeRoundTrip(benchmark::State& state) {
    const auto& index = shared_index();
    std::size_t size = 0;
    for (auto _ : state) {
        const auto bytes = nsix::serialize_index(index);
        benchmark::DoNotOptimize(nsix::deserialize_index(bytes).doc_count());
        size = bytes.size();
    }
    state.SetBytesProcessed(state.iterations() * static_cast<std::int64_t>(size));
}
BENCHMARK(BM_SerializeRoundTrip)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
