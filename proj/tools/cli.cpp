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

#include "cli.h"

#include <CLI11.hpp>
#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nsix/engine.h"
#include "nsix/error.h"
#include "nsix/experiment.h"
#include "nsix/index_file.h"
#include "nsix/ingest.h"
#include "nsix/synthetic.h"

namespace nsix::cli {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::kInvalidParams:
            return kExitUsage;
        case ErrorCode::kIoError:
            return kExitRuntime;
        default:
            return kExitData;
    }
}

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

ScoringMethod method_from_name(const std::string& name, std::size_t rerank_k) {
    auto kind = parse_method(name);
    if (!kind) {
        throw UsageError("unknown method '" + name +
                         "' (expected dot, l1, l2, cos, cos-exact, dot+cos)");
    }
    return {*kind, rerank_k};
}

CandidateMode mode_from_name(const std::string& name) {
    if (name == "exhaustive") {
        return CandidateMode::kExhaustive;
    }
    if (name == "posting") {
        return CandidateMode::kPostingDriven;
    }
    throw UsageError("unknown mode '" + name + "' (expected exhaustive or posting)");
}

void print_stats(const IndexStats& s, const std::string& format, std::ostream& out) {
    if (format == "table") {
        out << "doc_count                  " << s.doc_count << '\n'
            << "distinct_features          " << s.distinct_features << '\n'
            << "total_postings             " << s.total_postings << '\n'
            << "mean_postings_per_document " << s.mean_postings_per_document << '\n';
        return;
    }
    out << json{{"doc_count", s.doc_count},
                {"distinct_features", s.distinct_features},
                {"total_postings", s.total_postings},
                {"mean_postings_per_document", s.mean_postings_per_document}}
               .dump()
        << '\n';
}

std::vector<QueryCase> read_queries(const fs::path& path) {
    std::vector<QueryCase> out;
    for (auto& rec : read_ingest_file(path)) {
        out.push_back({std::move(rec.file_name), std::move(rec.features)});
    }
    return out;
}

struct IndexArgs {
    std::string input;
    std::string out;
    std::optional<std::size_t> max_features;
    bool force = false;
    std::string format = "json";
};

int cmd_index(const IndexArgs& a, std::ostream& out) {
    if (fs::exists(a.out) && !a.force) {
        throw UsageError("'" + a.out + "' exists; pass --force to overwrite");
    }
    IndexOptions options;
    options.max_features = a.max_features;
    const InvertedIndex index = build_index_from_file(a.input, options);
    save_index(index, a.out);
    print_stats(index_stats(index), a.format, out);
    return kExitOk;
}

struct SearchArgs {
    std::string index;
    std::string query;
    std::string method;
    std::size_t top_k = kDefaultTopK;
    std::optional<std::size_t> feature_number;
    std::string mode = "exhaustive";
    std::size_t rerank_k = kDefaultRerankK;
    bool show_distance = false;
};

int cmd_search(const SearchArgs& a, std::ostream& out, std::ostream& err) {
    QuerySpec spec;
    spec.method = method_from_name(a.method, a.rerank_k);
    spec.top_k = a.top_k;
    spec.feature_number = a.feature_number;
    spec.candidate_mode = mode_from_name(a.mode);

    auto records = read_ingest_file(a.query);
    if (records.size() != 1) {
        throw Error(ErrorCode::kFormatError, "query file must hold exactly one document (found " +
                                                 std::to_string(records.size()) + ")");
    }
    spec.vector = std::move(records.front().features);

    if (spec.candidate_mode == CandidateMode::kPostingDriven &&
        !posting_mode_is_exact(spec.method.kind)) {
        err << "warning: posting mode ranks only documents sharing a query feature; "
            << method_name(spec.method.kind) << " scores every document\n";
    }

    const InvertedIndex index = load_index(a.index);
    const auto hits = search(index, spec);
    const bool distance = a.show_distance && (spec.method.kind == MethodKind::kManhattan ||
                                              spec.method.kind == MethodKind::kEuclid);
    const double query_l2_squared = compute_norms(prepare_query(spec)).l2_squared;
    for (std::size_t i = 0; i < hits.size(); ++i) {
        json line{{"rank", i + 1}, {"file", hits[i].file_name}, {"score", hits[i].score}};
        if (distance) {
            line["distance"] = spec.method.kind == MethodKind::kManhattan
                                   ? kManhattanComplement - hits[i].score
                                   : euclid_distance_from_rank(hits[i].score, query_l2_squared);
        }
        out << line.dump() << '\n';
    }
    return kExitOk;
}

struct EvalArgs {
    std::string index;
    std::string queries;
    std::string qrels;
    std::string methods;
    std::string feature_numbers = "all";
    std::string perturb = "none";
    std::uint64_t seed = 0;
    std::string out;
    std::size_t top_k = kDefaultTopK;
    std::size_t rerank_k = kDefaultRerankK;
    std::string mode = "exhaustive";
    std::size_t jobs = 1;
    std::size_t warmup = 3;
    std::size_t min_samples = 10;
    bool no_timing = false;
};

int cmd_eval(const EvalArgs& a, std::ostream& out) {
    ExperimentGrid grid;
    for (const auto& name : split_list(a.methods)) {
        grid.methods.push_back(method_from_name(name, a.rerank_k));
    }
    if (grid.methods.empty()) {
        throw UsageError("--methods must name at least one method");
    }
    grid.feature_numbers.clear();
    for (const auto& item : split_list(a.feature_numbers)) {
        if (item == "all") {
            grid.feature_numbers.emplace_back(std::nullopt);
            continue;
        }
        std::size_t used = 0;
        long long m = 0;
        try {
            m = std::stoll(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != item.size() || m < 1) {
            throw UsageError("feature numbers must be positive integers or 'all' (got '" + item +
                             "')");
        }
        grid.feature_numbers.emplace_back(static_cast<std::size_t>(m));
    }
    if (grid.feature_numbers.empty()) {
        throw UsageError("--feature-numbers must not be empty");
    }
    grid.perturbations.clear();
    for (const auto& item : split_list(a.perturb)) {
        grid.perturbations.push_back(Perturbation::parse(item, a.seed));
    }
    if (grid.perturbations.empty()) {
        throw UsageError("--perturb must not be empty");
    }
    grid.top_k = a.top_k;
    grid.mode = mode_from_name(a.mode);

    ExperimentOptions options;
    options.jobs = a.jobs;
    options.timing.enabled = !a.no_timing;
    options.timing.warmup = a.warmup;
    options.timing.min_samples = a.min_samples;

    const InvertedIndex index = load_index(a.index);
    const auto queries = read_queries(a.queries);
    const Qrels qrels = read_qrels(a.qrels);
    const auto runs = run_experiment(index, queries, qrels, grid, options);

    std::error_code ec;
    fs::create_directories(a.out, ec);
    if (ec) {
        throw Error(ErrorCode::kIoError, "cannot create '" + a.out + "': " + ec.message());
    }
    const std::string table = report_table(runs);
    auto write = [&](const fs::path& p, const std::string& text) {
        std::ofstream f(p, std::ios::trunc);
        f << text;
        if (!f) {
            throw Error(ErrorCode::kIoError, "failed writing '" + p.string() + "'");
        }
    };
    write(fs::path(a.out) / "report.json", report_json(runs));
    write(fs::path(a.out) / "report.txt", table);
    out << table;
    return kExitOk;
}

struct GenArgs {
    std::size_t docs = 0;
    std::size_t features = 1000;
    std::size_t sparsity = 10;
    std::uint64_t seed = 0;
    double alpha = kDefaultDirichletAlpha;
    std::string profile = "dirichlet";
    std::size_t distractors = 2;
    std::string out;
    std::string queries_out;
    std::string qrels_out;
};

int cmd_gen(const GenArgs& a, std::ostream& out) {
    std::vector<CorpusDoc> docs;
    std::vector<std::string> query_ids;
    if (a.profile == "dirichlet") {
        docs = generate_synthetic_corpus({a.docs, a.features, a.sparsity, a.seed, a.alpha});
        for (const auto& d : docs) {
            query_ids.push_back(d.file_name);
        }
    } else if (a.profile == "dot-trap") {
        auto trap = make_dot_trap_corpus(a.docs, a.distractors, a.seed);
        docs = std::move(trap.docs);
        query_ids = std::move(trap.targets);
    } else {
        throw UsageError("unknown profile '" + a.profile + "' (expected dirichlet or dot-trap)");
    }

    auto open = [](const std::string& path) {
        std::ofstream f(path, std::ios::trunc);
        if (!f) {
            throw Error(ErrorCode::kIoError, "cannot open '" + path + "' for writing");
        }
        return f;
    };
    {
        auto f = open(a.out);
        for (const auto& d : docs) {
            f << format_ingest_line(d.file_name, d.features) << '\n';
        }
    }
    if (!a.queries_out.empty()) {
        auto f = open(a.queries_out);
        for (const auto& d : docs) {
            if (std::find(query_ids.begin(), query_ids.end(), d.file_name) != query_ids.end()) {
                f << format_ingest_line(d.file_name, d.features) << '\n';
            }
        }
    }
    if (!a.qrels_out.empty()) {
        write_qrels(self_qrels(query_ids), a.qrels_out);
    }
    out << json{{"documents", docs.size()}, {"queries", query_ids.size()}}.dump() << '\n';
    return kExitOk;
}

}  // namespace

int run(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"nsix: sparse-vector inverted index search with precomputed norms", "nsix"};
    app.require_subcommand(1);

    IndexArgs index_args;
    auto* index_cmd = app.add_subcommand("index", "Build an index file from a JSON Lines corpus");
    index_cmd->add_option("--input", index_args.input, "Ingestion JSONL file")->required();
    index_cmd->add_option("--out", index_args.out, "Index file to write")->required();
    index_cmd
        ->add_option("--max-features", index_args.max_features,
                     "Keep only the N strongest features per document")
        ->check(CLI::PositiveNumber);
    index_cmd->add_flag("--force", index_args.force, "Overwrite an existing index file");
    index_cmd->add_option("--format", index_args.format, "Stats output format")
        ->check(CLI::IsMember({"json", "table"}));

    SearchArgs search_args;
    auto* search_cmd = app.add_subcommand("search", "Rank indexed documents against one query");
    search_cmd->add_option("--index", search_args.index, "Index file")->required();
    search_cmd->add_option("--query", search_args.query, "JSONL file with one query document")
        ->required();
    search_cmd
        ->add_option("--method", search_args.method, "dot | l1 | l2 | cos | cos-exact | dot+cos")
        ->required();
    search_cmd->add_option("--top-k", search_args.top_k, "Number of hits")
        ->check(CLI::PositiveNumber);
    search_cmd
        ->add_option("--feature-number", search_args.feature_number,
                     "Truncate the query to its M strongest features")
        ->check(CLI::PositiveNumber);
    search_cmd->add_option("--mode", search_args.mode, "exhaustive | posting");
    search_cmd->add_option("--rerank-k", search_args.rerank_k, "dot+cos re-ranking window")
        ->check(CLI::PositiveNumber);
    search_cmd->add_flag("--show-distance", search_args.show_distance,
                         "Also print the Manhattan / Euclidean distance for l1 / l2");

    EvalArgs eval_args;
    auto* eval_cmd = app.add_subcommand("eval", "Run a MAP / latency experiment grid");
    eval_cmd->add_option("--index", eval_args.index, "Index file")->required();
    eval_cmd->add_option("--queries", eval_args.queries, "Query JSONL file")->required();
    eval_cmd->add_option("--qrels", eval_args.qrels, "Relevance JSONL file")->required();
    eval_cmd->add_option("--methods", eval_args.methods, "Comma-separated methods")->required();
    eval_cmd->add_option("--feature-numbers", eval_args.feature_numbers,
                         "Comma-separated query feature numbers, or 'all'");
    eval_cmd->add_option("--perturb", eval_args.perturb,
                         "Comma-separated none | res:R | partial:Q");
    eval_cmd->add_option("--seed", eval_args.seed, "Perturbation seed");
    eval_cmd->add_option("--out", eval_args.out, "Report directory")->required();
    eval_cmd->add_option("--top-k", eval_args.top_k, "Hits per query")->check(CLI::PositiveNumber);
    eval_cmd->add_option("--rerank-k", eval_args.rerank_k, "dot+cos re-ranking window")
        ->check(CLI::PositiveNumber);
    eval_cmd->add_option("--mode", eval_args.mode, "exhaustive | posting");
    eval_cmd->add_option("--jobs", eval_args.jobs, "Threads for the relevance phase")
        ->check(CLI::PositiveNumber);
    eval_cmd->add_option("--warmup", eval_args.warmup, "Discarded searches per cell");
    eval_cmd->add_option("--min-samples", eval_args.min_samples, "Timed searches per cell")
        ->check(CLI::PositiveNumber);
    eval_cmd->add_flag("--no-timing", eval_args.no_timing, "Skip latency measurement");

    GenArgs gen_args;
    auto* gen_cmd = app.add_subcommand("gen", "Write a synthetic softmax-like corpus");
    gen_cmd->add_option("--docs", gen_args.docs, "Number of documents (dot-trap: targets)")
        ->required();
    gen_cmd->add_option("--features", gen_args.features, "Ambient dimensionality");
    gen_cmd->add_option("--sparsity", gen_args.sparsity, "Features kept per document");
    gen_cmd->add_option("--seed", gen_args.seed, "Random seed");
    gen_cmd->add_option("--alpha", gen_args.alpha, "Dirichlet concentration");
    gen_cmd->add_option("--profile", gen_args.profile, "dirichlet | dot-trap");
    gen_cmd->add_option("--distractors", gen_args.distractors,
                        "dot-trap: peaked distractors per target");
    gen_cmd->add_option("--out", gen_args.out, "Corpus JSONL file")->required();
    gen_cmd->add_option("--queries-out", gen_args.queries_out, "Also write the query documents");
    gen_cmd->add_option("--qrels-out", gen_args.qrels_out, "Also write self-retrieval qrels");

    std::string stats_index;
    std::string stats_format = "json";
    auto* stats_cmd = app.add_subcommand("stats", "Print index statistics");
    stats_cmd->add_option("--index", stats_index, "Index file")->required();
    stats_cmd->add_option("--format", stats_format, "json | table")
        ->check(CLI::IsMember({"json", "table"}));

    std::vector<std::string> argv_storage{"nsix"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& s : argv_storage) {
        argv.push_back(s.c_str());
    }

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }

    try {
        if (index_cmd->parsed()) {
            return cmd_index(index_args, out);
        }
        if (search_cmd->parsed()) {
            return cmd_search(search_args, out, err);
        }
        if (eval_cmd->parsed()) {
            return cmd_eval(eval_args, out);
        }
        if (gen_cmd->parsed()) {
            return cmd_gen(gen_args, out);
        }
        if (stats_cmd->parsed()) {
            print_stats(index_stats(load_index(stats_index)), stats_format, out);
            return kExitOk;
        }
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}

}  // namespace nsix::cli
