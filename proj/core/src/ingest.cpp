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

#include "nsix/ingest.h"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "nsix/error.h"

namespace nsix {
namespace {

[[noreturn]] void fail_at(ErrorCode code, std::size_t line_no, const std::string& what) {
    throw Error(code, "line " + std::to_string(line_no) + ": " + what);
}

bool is_blank(std::string_view line) {
    return line.find_first_not_of(" \t\r\n") == std::string_view::npos;
}

}  // namespace

IngestRecord parse_ingest_line(std::string_view line, std::size_t line_no) {
    using nlohmann::json;
    json doc;
    try {
        doc = json::parse(line);
    } catch (const json::parse_error& e) {
        fail_at(ErrorCode::kFormatError, line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        fail_at(ErrorCode::kFormatError, line_no, "expected a JSON object");
    }
    auto f = doc.find("f");
    if (f == doc.end() || !f->is_string() || f->get_ref<const std::string&>().empty()) {
        fail_at(ErrorCode::kFormatError, line_no, "field \"f\" must be a non-empty string");
    }
    auto s = doc.find("s");
    if (s == doc.end() || !s->is_object()) {
        fail_at(ErrorCode::kFormatError, line_no, "field \"s\" must be an object");
    }

    IngestRecord rec;
    rec.line = line_no;
    rec.file_name = f->get<std::string>();
    std::vector<SparseVector::Entry> entries;
    entries.reserve(s->size());
    for (const auto& [key, value] : s->items()) {
        if (key.empty()) {
            fail_at(ErrorCode::kFormatError, line_no, "empty feature id");
        }
        if (!value.is_object()) {
            fail_at(ErrorCode::kFormatError, line_no, "feature '" + key + "' must be an object");
        }
        auto score = value.find("s");
        if (score == value.end() || !score->is_number()) {
            fail_at(ErrorCode::kFormatError, line_no,
                    "feature '" + key + "' needs a numeric score \"s\"");
        }
        const double weight = score->get<double>();
        if (!std::isfinite(weight) || weight < 0.0) {
            fail_at(ErrorCode::kInvalidVector, line_no,
                    "feature '" + key + "' has negative or non-finite score");
        }
        FeatureId id(key);
        if (auto w = value.find("w"); w != value.end()) {
            if (!w->is_string()) {
                fail_at(ErrorCode::kFormatError, line_no,
                        "feature '" + key + "' word \"w\" must be a string");
            }
            rec.labels.emplace(id, w->get<std::string>());
        }
        entries.push_back({std::move(id), weight});
    }
    try {
        rec.features = SparseVector::from_entries(std::move(entries));
    } catch (const Error& e) {
        fail_at(e.code(), line_no, e.detail());
    }
    if (l1_norm(rec.features) > kMaxIngestMass) {
        fail_at(ErrorCode::kFormatError, line_no, "scores sum above 1");
    }
    return rec;
}

void for_each_ingest_record(std::istream& in, const std::function<void(IngestRecord&&)>& fn) {
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (is_blank(line)) {
            continue;
        }
        fn(parse_ingest_line(line, line_no));
    }
    if (in.bad()) {
        throw Error(ErrorCode::kIoError, "read failure after line " + std::to_string(line_no));
    }
}

std::vector<IngestRecord> read_ingest_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
    }
    std::vector<IngestRecord> out;
    for_each_ingest_record(in, [&](IngestRecord&& r) { out.push_back(std::move(r)); });
    return out;
}

std::string format_ingest_line(const std::string& file_name, const SparseVector& features,
                               const Labels& labels) {
    nlohmann::json s = nlohmann::json::object();
    for (const auto& e : features) {
        nlohmann::json entry = {{"s", e.weight}};
        if (auto it = labels.find(e.feature); it != labels.end()) {
            entry["w"] = it->second;
        }
        s[e.feature.str()] = std::move(entry);
    }
    return nlohmann::json{{"f", file_name}, {"s", std::move(s)}}.dump();
}

InvertedIndex build_index_from_file(const std::filesystem::path& path, IndexOptions options) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
    }
    InvertedIndex index(options);
    for_each_ingest_record(in, [&](IngestRecord&& r) {
        try {
            index.add_document(std::move(r.file_name), r.features, std::move(r.labels));
        } catch (const Error& e) {
            fail_at(e.code(), r.line, e.detail());
        }
    });
    return index;
}

}  // namespace nsix
