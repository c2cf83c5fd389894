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

#include <gtest/gtest.h>

#include <bit>
#include <cstring>
#include <fstream>
#include <random>

#include "nsix/error.h"
#include "test_util.h"

namespace nsix {
namespace {

std::uint64_t bits(double x) { return std::bit_cast<std::uint64_t>(x); }

void expect_bit_identical(const InvertedIndex& a, const InvertedIndex& b) {
    ASSERT_EQ(a.doc_count(), b.doc_count());
    for (DocId id = 0; id < a.doc_count(); ++id) {
        const auto& da = a.document(id);
        const auto& db = b.document(id);
        ASSERT_EQ(da.file_name, db.file_name);
        ASSERT_EQ(bits(da.norms.l1), bits(db.norms.l1));
        ASSERT_EQ(bits(da.norms.l2), bits(db.norms.l2));
        ASSERT_EQ(bits(da.norms.l2_squared), bits(db.norms.l2_squared));
        ASSERT_EQ(da.features.size(), db.features.size());
        for (std::size_t i = 0; i < da.features.size(); ++i) {
            ASSERT_EQ(da.features[i].feature, db.features[i].feature);
            ASSERT_EQ(bits(da.features[i].weight), bits(db.features[i].weight));
        }
    }
    ASSERT_EQ(a.postings().size(), b.postings().size());
    for (const auto& [feature, list] : a.postings()) {
        const auto* other = b.find_postings(feature);
        ASSERT_NE(other, nullptr);
        ASSERT_EQ(list.size(), other->size());
        for (std::size_t i = 0; i < list.size(); ++i) {
            ASSERT_EQ(list[i].doc_id, (*other)[i].doc_id);
            ASSERT_EQ(bits(list[i].s), bits((*other)[i].s));
            ASSERT_EQ(bits(list[i].c), bits((*other)[i].c));
            ASSERT_EQ(bits(list[i].ss), bits((*other)[i].ss));
        }
    }
}

InvertedIndex sample_index(std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    std::vector<SparseVector> docs;
    for (int i = 0; i < n; ++i) {
        docs.push_back(testing::random_vector(rng, 50, 10));
    }
    return testing::index_of(docs);
}

ErrorCode load_error(std::span<const std::uint8_t> bytes) {
    try {
        deserialize_index(bytes);
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "corrupt bytes accepted";
    return ErrorCode::kInvalidParams;
}

TEST(IndexFileTest, RoundTripIsBitExact) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto index = sample_index(seed, 120);
        const auto bytes = serialize_index(index);
        expect_bit_identical(index, deserialize_index(bytes));
        // serialization is deterministic
        EXPECT_EQ(serialize_index(deserialize_index(bytes)), bytes);
    }
}

TEST(IndexFileTest, EmptyIndexRoundTrips) {
    const auto loaded = deserialize_index(serialize_index(InvertedIndex{}));
    EXPECT_EQ(loaded.doc_count(), 0u);
    EXPECT_TRUE(loaded.postings().empty());
}

TEST(IndexFileTest, HeaderLayout) {
    const auto bytes = serialize_index(sample_index(1, 3));
    ASSERT_GE(bytes.size(), 28u);
    EXPECT_EQ(std::memcmp(bytes.data(), "NSIX", 4), 0);
    EXPECT_EQ(bytes[4], kIndexFormatVersion);
    EXPECT_EQ(bytes[5] | bytes[6] | bytes[7], 0);
    EXPECT_EQ(bytes[8], 3);
}

TEST(IndexFileTest, EverySingleByteCorruptionIsRejected) {
    const auto bytes = serialize_index(sample_index(2, 6));
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        auto bad = bytes;
        bad[i] ^= 0x5a;
        ASSERT_EQ(load_error(bad), ErrorCode::kFormatError) << "byte " << i;
    }
}

TEST(IndexFileTest, TruncationAndTrailingBytesAreRejected) {
    const auto bytes = serialize_index(sample_index(3, 6));
    for (std::size_t n = 0; n < bytes.size(); n += 7) {
        ASSERT_EQ(load_error(std::span(bytes).first(n)), ErrorCode::kFormatError) << n;
    }
    auto longer = bytes;
    longer.push_back(0);
    EXPECT_EQ(load_error(longer), ErrorCode::kFormatError);
}

TEST(IndexFileTest, WrongVersionIsRejected) {
    auto bytes = serialize_index(sample_index(4, 2));
    bytes[4] = 2;
    try {
        deserialize_index(bytes);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kFormatError);
        EXPECT_NE(std::string(e.what()).find("version"), std::string::npos) << e.what();
    }
}

TEST(IndexFileTest, SaveAndLoad) {
    testing::TempDir dir;
    const auto index = sample_index(9, 40);
    save_index(index, dir / "a.nsix");
    expect_bit_identical(index, load_index(dir / "a.nsix"));
    try {
        load_index(dir / "missing.nsix");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kIoError);
    }
    try {
        save_index(index, dir / "no_such_dir" / "a.nsix");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::kIoError);
    }
}

}  // namespace
}  // namespace nsix
