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

#include "nsix/index_file.h"

#include <zlib.h>

#include <bit>
#include <fstream>
#include <iterator>
#include <limits>
#include <string>

#include "nsix/error.h"

namespace nsix {
namespace {

constexpr char kMagic[4] = {'N', 'S', 'I', 'X'};

class ByteWriter {
public:
    void u32(std::uint32_t v) {
        for (int i = 0; i < 4; ++i) {
            buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }
    void u64(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) {
            buf_.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
        }
    }
    void f64(double v) { u64(std::bit_cast<std::uint64_t>(v)); }
    void str(const std::string& s) {
        if (s.size() > std::numeric_limits<std::uint32_t>::max()) {
            throw Error(ErrorCode::kInvalidParams, "string too long for index file");
        }
        u32(static_cast<std::uint32_t>(s.size()));
        buf_.insert(buf_.end(), s.begin(), s.end());
    }
    void raw(const char* p, std::size_t n) { buf_.insert(buf_.end(), p, p + n); }
    std::vector<std::uint8_t>& bytes() { return buf_; }

private:
    std::vector<std::uint8_t> buf_;
};

class ByteReader {
public:
    explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::uint32_t u32() {
        need(4);
        std::uint32_t v = 0;
        for (int i = 0; i < 4; ++i) {
            v |= static_cast<std::uint32_t>(bytes_[pos_ + i]) << (8 * i);
        }
        pos_ += 4;
        return v;
    }
    std::uint64_t u64() {
        need(8);
        std::uint64_t v = 0;
        for (int i = 0; i < 8; ++i) {
            v |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        }
        pos_ += 8;
        return v;
    }
    double f64() { return std::bit_cast<double>(u64()); }
    std::string str() {
        const std::uint32_t n = u32();
        need(n);
        std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), n);
        pos_ += n;
        return s;
    }
    // Rejects element counts that could not possibly fit in the remaining bytes.
    std::uint64_t count(std::size_t min_element_size) {
        const std::uint64_t n = u64();
        if (n > remaining() / min_element_size) {
            throw Error(ErrorCode::kFormatError, "element count exceeds file size");
        }
        return n;
    }
    std::size_t remaining() const { return bytes_.size() - pos_; }

private:
    void need(std::size_t n) const {
        if (remaining() < n) {
            throw Error(ErrorCode::kFormatError, "truncated index file");
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 0;
};

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    // zlib takes uInt lengths
    constexpr std::size_t kChunk = 1u << 30;
    for (std::size_t off = 0; off < bytes.size(); off += kChunk) {
        const auto n = static_cast<uInt>(std::min(kChunk, bytes.size() - off));
        crc = crc32(crc, bytes.data() + off, n);
    }
    return static_cast<std::uint32_t>(crc);
}

}  // namespace

std::vector<std::uint8_t> serialize_index(const InvertedIndex& index) {
    ByteWriter w;
    w.raw(kMagic, sizeof(kMagic));
    w.u32(kIndexFormatVersion);
    w.u64(index.doc_count());
    w.u64(index.postings().size());

    for (const auto& doc : index.documents()) {
        w.str(doc.file_name);
        w.f64(doc.norms.l1);
        w.f64(doc.norms.l2);
        w.f64(doc.norms.l2_squared);
        w.u64(doc.features.size());
        for (const auto& e : doc.features) {
            w.str(e.feature.str());
            w.f64(e.weight);
        }
    }
    for (const auto& [feature, list] : index.postings()) {
        w.str(feature.str());
        w.u64(list.size());
        for (const auto& p : list) {
            w.u64(p.doc_id);
            w.f64(p.s);
            w.f64(p.c);
            w.f64(p.ss);
        }
    }
    const std::uint32_t crc = crc32_of(w.bytes());
    w.u32(crc);
    return std::move(w.bytes());
}

InvertedIndex deserialize_index(std::span<const std::uint8_t> bytes) {
    constexpr std::size_t kHeaderSize = 4 + 4 + 8 + 8;
    if (bytes.size() < sizeof(kMagic) ||
        !std::equal(std::begin(kMagic), std::end(kMagic), bytes.begin())) {
        throw Error(ErrorCode::kFormatError, "bad magic, not an index file");
    }
    if (bytes.size() < kHeaderSize + 4) {
        throw Error(ErrorCode::kFormatError, "truncated index file");
    }

    ByteReader header(bytes.subspan(sizeof(kMagic)));
    const std::uint32_t version = header.u32();
    if (version != kIndexFormatVersion) {
        throw Error(ErrorCode::kFormatError,
                    "unsupported index format version " + std::to_string(version));
    }

    const auto body = bytes.first(bytes.size() - 4);
    ByteReader trailer(bytes.last(4));
    if (crc32_of(body) != trailer.u32()) {
        throw Error(ErrorCode::kFormatError, "checksum mismatch");
    }

    ByteReader r(body.subspan(sizeof(kMagic) + 4));
    const std::uint64_t doc_count = r.u64();
    const std::uint64_t feature_count = r.u64();

    constexpr std::size_t kMinDocSize = 4 + 3 * 8 + 8;
    if (doc_count > r.remaining() / kMinDocSize) {
        throw Error(ErrorCode::kFormatError, "document count exceeds file size");
    }
    std::vector<DocumentRecord> documents;
    documents.reserve(doc_count);
    for (std::uint64_t i = 0; i < doc_count; ++i) {
        DocumentRecord doc;
        doc.doc_id = i;
        doc.file_name = r.str();
        doc.norms.l1 = r.f64();
        doc.norms.l2 = r.f64();
        doc.norms.l2_squared = r.f64();
        const std::uint64_t n = r.count(4 + 8);
        std::vector<SparseVector::Entry> entries;
        entries.reserve(n);
        for (std::uint64_t j = 0; j < n; ++j) {
            std::string id = r.str();
            if (id.empty()) {
                throw Error(ErrorCode::kFormatError, "empty feature id in document table");
            }
            entries.push_back({FeatureId(std::move(id)), r.f64()});
        }
        try {
            doc.features = SparseVector::from_entries(std::move(entries));
        } catch (const Error& e) {
            throw Error(ErrorCode::kFormatError, e.detail());
        }
        documents.push_back(std::move(doc));
    }

    std::map<FeatureId, PostingList> postings;
    for (std::uint64_t i = 0; i < feature_count; ++i) {
        std::string id = r.str();
        if (id.empty()) {
            throw Error(ErrorCode::kFormatError, "empty feature id in posting directory");
        }
        const std::uint64_t n = r.count(4 * 8);
        PostingList list;
        list.reserve(n);
        for (std::uint64_t j = 0; j < n; ++j) {
            Posting p;
            p.doc_id = r.u64();
            p.s = r.f64();
            p.c = r.f64();
            p.ss = r.f64();
            list.push_back(p);
        }
        if (!postings.emplace(FeatureId(std::move(id)), std::move(list)).second) {
            throw Error(ErrorCode::kFormatError, "duplicate feature in posting directory");
        }
    }
    if (r.remaining() != 0) {
        throw Error(ErrorCode::kFormatError, "trailing bytes after posting directory");
    }
    return InvertedIndex::from_parts(std::move(documents), std::move(postings));
}

void save_index(const InvertedIndex& index, const std::filesystem::path& path) {
    const auto bytes = serialize_index(index);
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "' for writing");
    }
    out.write(reinterpret_cast<const char*>(bytes.data()),
              static_cast<std::streamsize>(bytes.size()));
    out.close();
    if (!out) {
        throw Error(ErrorCode::kIoError, "failed writing '" + path.string() + "'");
    }
}

InvertedIndex load_index(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
    }
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) {
        throw Error(ErrorCode::kIoError, "failed reading '" + path.string() + "'");
    }
    return deserialize_index(bytes);
}

}  // namespace nsix
