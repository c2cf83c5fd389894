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

#include "nsix/experiment.h"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <fstream>
#include <iomanip>
#include <nlohmann/json.hpp>
#include <sstream>
#include <thread>

#include "nsix/error.h"

namespace nsix {

Qrels read_qrels(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
    }
    Qrels qrels;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) {
            continue;
        }
        auto fail = [&](ErrorCode code, const std::string& what) {
            throw Error(code, "qrels line " + std::to_string(line_no) + ": " + what);
        };
        nlohmann::json doc;
        try {
            doc = nlohmann::json::parse(line);
        } catch (const nlohmann::json::parse_error& e) {
            fail(ErrorCode::kFormatError, std::string("invalid JSON: ") + e.what());
        }
        if (!doc.is_object() || !doc.contains("query") || !doc["query"].is_string() ||
            !doc.contains("relevant") || !doc["relevant"].is_array()) {
            fail(ErrorCode::kFormatError, "expected {\"query\": str, \"relevant\": [str, ...]}");
        }
        std::set<std::string> relevant;
        for (const auto& r : doc["relevant"]) {
            if (!r.is_string()) {
                fail(ErrorCode::kFormatError, "relevant entries must be strings");
            }
            relevant.insert(r.get<std::string>());
        }
        if (relevant.empty()) {
            fail(ErrorCode::kEmptyRelevantSet, "relevant set is empty");
        }
        if (!qrels.relevant.emplace(doc["query"].get<std::string>(), std::move(relevant)).second) {
            fail(ErrorCode::kFormatError, "duplicate query id");
        }
    }
    return qrels;
}

void write_qrels(const Qrels& qrels, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "' for writing");
    }
    for (const auto& [query, relevant] : qrels.relevant) {
        out << nlohmann::json{{"query", query}, {"relevant", relevant}}.dump() << '\n';
    }
    if (!out) {
        throw Error(ErrorCode::kIoError, "failed writing '" + path.string() + "'");
    }
}

Qrels self_qrels(std::span<const std::string> query_ids) {
    Qrels q;
    for (const auto& id : query_ids) {
        q.relevant[id] = {id};
    }
    return q;
}

namespace {

// keeps the timed search calls observable to the optimizer
volatile std::size_t g_result_sink = 0;

struct Cell {
    const Perturbation* perturbation;
    std::size_t perturbation_index;
    std::optional<std::size_t> feature_number;
    ScoringMethod method;
};

std::string cell_label(const Cell& c) {
    std::string s = "method=" + std::string(method_name(c.method.kind));
    s += " feature_number=" + (c.feature_number ? std::to_string(*c.feature_number) : "all");
    s += " perturbation=" + c.perturbation->label();
    return s;
}

QuerySpec make_spec(const SparseVector& v, const Cell& c, const ExperimentGrid& grid) {
    QuerySpec spec;
    spec.vector = v;
    spec.method = c.method;
    spec.top_k = grid.top_k;
    spec.feature_number = c.feature_number;
    spec.candidate_mode = grid.mode;
    return spec;
}

void evaluate_relevance(const InvertedIndex& index, std::span<const QueryCase> queries,
                        std::span<const SparseVector> perturbed, const Qrels& qrels,
                        const ExperimentGrid& grid, const Cell& cell, EvalRun& run) {
    run.method = cell.method;
    run.feature_number = cell.feature_number;
    run.top_k = grid.top_k;
    run.perturbation = *cell.perturbation;
    for (std::size_t i = 0; i < queries.size(); ++i) {
        auto rel = qrels.relevant.find(queries[i].id);
        if (rel == qrels.relevant.end()) {
            throw Error(ErrorCode::kFormatError, "no qrels for query '" + queries[i].id + "'");
        }
        const auto hits = search(index, make_spec(perturbed[i], cell, grid));
        std::vector<std::string> ranked;
        ranked.reserve(hits.size());
        for (const auto& h : hits) {
            ranked.push_back(h.file_name);
        }
        run.query_ids.push_back(queries[i].id);
        run.per_query_ap.push_back(average_precision(ranked, rel->second));
    }
    run.map = mean_average_precision(run.per_query_ap);
}

void measure_latency(const InvertedIndex& index, std::span<const SparseVector> perturbed,
                     const ExperimentGrid& grid, const Cell& cell, const TimingOptions& timing,
                     EvalRun& run) {
    std::vector<QuerySpec> specs;
    specs.reserve(perturbed.size());
    for (const auto& v : perturbed) {
        specs.push_back(make_spec(v, cell, grid));
    }
    std::size_t sink = 0;
    for (std::size_t w = 0; w < timing.warmup; ++w) {
        sink += search(index, specs[w % specs.size()]).size();
    }
    const std::size_t passes =
        std::max<std::size_t>(1, (timing.min_samples + specs.size() - 1) / specs.size());
    run.latency_samples.reserve(passes * specs.size());
    for (std::size_t p = 0; p < passes; ++p) {
        for (const auto& spec : specs) {
            const auto t0 = std::chrono::steady_clock::now();
            auto hits = search(index, spec);
            const auto t1 = std::chrono::steady_clock::now();
            sink += hits.size();
            run.latency_samples.push_back(std::chrono::duration<double>(t1 - t0).count());
        }
    }
    run.latency = latency_report(run.latency_samples);
    g_result_sink = sink;
}

}  // namespace

std::vector<EvalRun> run_experiment(const InvertedIndex& index, std::span<const QueryCase> queries,
                                    const Qrels& qrels, const ExperimentGrid& grid,
                                    const ExperimentOptions& options) {
    if (queries.empty()) {
        throw Error(ErrorCode::kEmptyList, "experiment needs at least one query");
    }
    if (grid.methods.empty() || grid.feature_numbers.empty() || grid.perturbations.empty()) {
        throw Error(ErrorCode::kInvalidParams, "experiment grid has an empty axis");
    }

    std::vector<FeatureId> vocabulary;
    vocabulary.reserve(index.postings().size());
    for (const auto& [feature, list] : index.postings()) {
        vocabulary.push_back(feature);
    }

    std::vector<std::vector<SparseVector>> perturbed(grid.perturbations.size());
    for (std::size_t p = 0; p < grid.perturbations.size(); ++p) {
        const Perturbation& base = grid.perturbations[p];
        for (std::size_t i = 0; i < queries.size(); ++i) {
            try {
                perturbed[p].push_back(perturb_query(
                    queries[i].vector, base.with_seed(mix_seed(base.seed, i)), vocabulary));
            } catch (const Error& e) {
                throw Error(e.code(), "perturbation=" + base.label() + " query '" + queries[i].id +
                                          "': " + e.detail());
            }
        }
    }

    std::vector<Cell> cells;
    for (std::size_t p = 0; p < grid.perturbations.size(); ++p) {
        for (const auto& m : grid.feature_numbers) {
            for (const auto& method : grid.methods) {
                cells.push_back({&grid.perturbations[p], p, m, method});
            }
        }
    }

    std::vector<EvalRun> runs(cells.size());
    std::vector<std::exception_ptr> errors(cells.size());
    auto relevance = [&](std::size_t c) {
        try {
            evaluate_relevance(index, queries, perturbed[cells[c].perturbation_index], qrels, grid,
                               cells[c], runs[c]);
        } catch (...) {
            errors[c] = std::current_exception();
        }
    };
    const std::size_t jobs = std::clamp<std::size_t>(options.jobs, 1, cells.size());
    if (jobs == 1) {
        for (std::size_t c = 0; c < cells.size(); ++c) {
            relevance(c);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> workers;
        for (std::size_t j = 0; j < jobs; ++j) {
            workers.emplace_back([&] {
                for (std::size_t c = next++; c < cells.size(); c = next++) {
                    relevance(c);
                }
            });
        }
    }

    for (std::size_t c = 0; c < cells.size(); ++c) {
        try {
            if (errors[c]) {
                std::rethrow_exception(errors[c]);
            }
            if (options.timing.enabled) {
                measure_latency(index, perturbed[cells[c].perturbation_index], grid, cells[c],
                                options.timing, runs[c]);
            }
        } catch (const Error& e) {
            throw Error(e.code(), cell_label(cells[c]) + ": " + e.detail());
        }
    }
    return runs;
}

namespace {

int method_rank(MethodKind kind) {
    const auto* it = std::find(std::begin(kReportMethodOrder), std::end(kReportMethodOrder), kind);
    return static_cast<int>(it - std::begin(kReportMethodOrder));
}

std::string method_label(const ScoringMethod& m) {
    std::string s(method_name(m.kind));
    if (m.kind == MethodKind::kDotThenCosRerank && m.rerank_k != kDefaultRerankK) {
        s += "@" + std::to_string(m.rerank_k);
    }
    return s;
}

std::tuple<int, double> perturbation_key(const Perturbation& p) {
    switch (p.kind) {
        case Perturbation::Kind::kNone:
            return {0, 0.0};
        case Perturbation::Kind::kResolution:
            return {1, p.rate};
        case Perturbation::Kind::kPartial:
            return {2, static_cast<double>(p.quadrant)};
    }
    return {3, 0.0};
}

// nullopt (untruncated) sorts after every explicit feature number
std::size_t feature_key(const std::optional<std::size_t>& m) {
    return m ? *m : static_cast<std::size_t>(-1);
}

std::string feature_label(const std::optional<std::size_t>& m) {
    return m ? std::to_string(*m) : "all";
}

std::string format_value(double v, int precision) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(precision) << v;
    return os.str();
}

}  // namespace

std::string report_json(std::span<const EvalRun> runs, bool include_timing) {
    nlohmann::json out;
    out["runs"] = nlohmann::json::array();
    for (const auto& r : runs) {
        nlohmann::json j;
        j["method"] = method_name(r.method.kind);
        if (r.method.kind == MethodKind::kDotThenCosRerank) {
            j["rerank_k"] = r.method.rerank_k;
        }
        j["feature_number"] =
            r.feature_number ? nlohmann::json(*r.feature_number) : nlohmann::json(nullptr);
        j["perturbation"] = r.perturbation.label();
        j["seed"] = r.perturbation.seed;
        j["top_k"] = r.top_k;
        j["map"] = r.map;
        j["queries"] = r.query_ids;
        j["per_query_ap"] = r.per_query_ap;
        if (include_timing && r.latency) {
            j["latency"] = {{"mean_s", r.latency->mean_s},
                            {"p50_s", r.latency->p50_s},
                            {"p95_s", r.latency->p95_s},
                            {"samples", r.latency->samples}};
        }
        out["runs"].push_back(std::move(j));
    }
    return out.dump(2) + "\n";
}

std::string report_table(std::span<const EvalRun> runs) {
    std::vector<std::optional<std::size_t>> features;
    std::vector<Perturbation> perturbations;
    std::vector<ScoringMethod> methods;
    for (const auto& r : runs) {
        if (std::find(features.begin(), features.end(), r.feature_number) == features.end()) {
            features.push_back(r.feature_number);
        }
        if (std::none_of(perturbations.begin(), perturbations.end(), [&](const Perturbation& p) {
                return p.label() == r.perturbation.label();
            })) {
            perturbations.push_back(r.perturbation);
        }
        if (std::find(methods.begin(), methods.end(), r.method) == methods.end()) {
            methods.push_back(r.method);
        }
    }
    std::sort(features.begin(), features.end(),
              [](const auto& a, const auto& b) { return feature_key(a) < feature_key(b); });
    std::sort(perturbations.begin(), perturbations.end(), [](const auto& a, const auto& b) {
        return perturbation_key(a) < perturbation_key(b);
    });
    std::stable_sort(methods.begin(), methods.end(), [](const auto& a, const auto& b) {
        return method_rank(a.kind) < method_rank(b.kind);
    });

    const bool sweep_features = features.size() > 1 || perturbations.size() == 1;
    const std::size_t n_groups = sweep_features ? perturbations.size() : features.size();
    const std::size_t n_cols = sweep_features ? features.size() : perturbations.size();

    auto find_run = [&](const ScoringMethod& m, std::size_t group,
                        std::size_t col) -> const EvalRun* {
        const auto& fm = sweep_features ? features[col] : features[group];
        const auto& pl = (sweep_features ? perturbations[group] : perturbations[col]).label();
        for (const auto& r : runs) {
            if (r.method == m && r.feature_number == fm && r.perturbation.label() == pl) {
                return &r;
            }
        }
        return nullptr;
    };

    std::ostringstream os;
    auto emit = [&](const std::string& title, std::size_t group, bool latency) {
        std::vector<std::string> header{sweep_features ? "feature number" : "perturbation"};
        for (std::size_t c = 0; c < n_cols; ++c) {
            header.push_back(sweep_features ? feature_label(features[c])
                                            : perturbations[c].label());
        }
        std::vector<std::vector<std::string>> rows{header};
        for (const auto& m : methods) {
            std::vector<std::string> row{method_label(m)};
            for (std::size_t c = 0; c < n_cols; ++c) {
                const EvalRun* r = find_run(m, group, c);
                if (r == nullptr || (latency && !r->latency)) {
                    row.emplace_back("-");
                } else {
                    row.push_back(latency ? format_value(r->latency->mean_s, 6)
                                          : format_value(r->map, 3));
                }
            }
            rows.push_back(std::move(row));
        }
        std::vector<std::size_t> width(header.size(), 0);
        for (const auto& row : rows) {
            for (std::size_t i = 0; i < row.size(); ++i) {
                width[i] = std::max(width[i], row[i].size());
            }
        }
        os << title << '\n';
        for (std::size_t r = 0; r < rows.size(); ++r) {
            for (std::size_t i = 0; i < rows[r].size(); ++i) {
                if (i == 0) {
                    os << std::left << std::setw(static_cast<int>(width[i])) << rows[r][i] << " |";
                } else {
                    os << ' ' << std::right << std::setw(static_cast<int>(width[i])) << rows[r][i];
                }
            }
            os << '\n';
            if (r == 0) {
                std::size_t total = width[0] + 2;
                for (std::size_t i = 1; i < width.size(); ++i) {
                    total += width[i] + 1;
                }
                os << std::string(total, '-') << '\n';
            }
        }
        os << '\n';
    };

    const std::size_t top_k = runs.empty() ? kDefaultTopK : runs.front().top_k;
    const bool has_latency = std::any_of(runs.begin(), runs.end(),
                                         [](const EvalRun& r) { return r.latency.has_value(); });
    for (std::size_t g = 0; g < n_groups; ++g) {
        const std::string fixed = sweep_features ? "perturbation " + perturbations[g].label()
                                                 : "feature number " + feature_label(features[g]);
        const std::string ctx = " (" + fixed + ", top-k " + std::to_string(top_k) + ")";
        emit("Mean Average Precision" + ctx, g, false);
        if (has_latency) {
            emit("Average response time [s]" + ctx, g, true);
        }
    }
    return os.str();
}

}  // namespace nsix
