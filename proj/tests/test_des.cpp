#include <gtest/gtest.h>

#include <random>

#include "lpdes/des.hpp"
#include "support/util.hpp"

using namespace lpdes;

namespace {

BitBlock hex(const char* s) { return BitBlock::from_hex(s); }

struct Vector {
    const char* pt;
    const char* key;
    const char* ct;
};

// Published full-DES vectors.
const Vector kVectors[] = {
    {"0123456789ABCDEF", "133457799BBCDFF1", "85E813540F0AB405"},
    {"8787878787878787", "0E329232EA6D0D73", "0000000000000000"},
    {"95F8A5E5DD31D900", "0101010101010101", "8000000000000000"},
    {"0000000000000000", "10316E028C8F3B4A", "82DCBAFBDEAB6602"},
    {"4E6F772069732074", "0123456789ABCDEF", "3FA40E8A984D4815"},
};

} // namespace

TEST(BitBlock, OneBasedMsbFirst) {
    BitBlock b(6, 0x20);
    EXPECT_TRUE(b.bit(1));
    EXPECT_FALSE(b.bit(6));
    b.set(6, true);
    EXPECT_EQ(b.value(), 0x21u);
    EXPECT_THROW(b.bit(0), InvalidArgument);
    EXPECT_THROW(b.bit(7), InvalidArgument);
    EXPECT_THROW(BitBlock(8), InvalidArgument);
    EXPECT_EQ(hex("00000000000000FF").to_hex(), "00000000000000FF");
    EXPECT_THROW(BitBlock::from_hex("XYZ"), Error);
}

TEST(Des, PublishedVectors) {
    for (const auto& v : kVectors) {
        EXPECT_EQ(encrypt(hex(v.pt), hex(v.key), 16).to_hex(), v.ct) << v.pt << " / " << v.key;
        EXPECT_EQ(decrypt(hex(v.ct), hex(v.key), 16).to_hex(), v.pt);
    }
}

TEST(Des, DecryptOfZero) {
    EXPECT_EQ(decrypt(hex("0000000000000000"), hex("0000000000000000"), 16).to_hex(), "8CA64DE9C1B123A7");
}

TEST(Des, RoundKeys) {
    const auto ks = key_schedule(hex("133457799BBCDFF1"), 16);
    ASSERT_EQ(ks.rounds(), 16);
    EXPECT_EQ(ks.round_keys[0].to_hex(), "1B02EFFC7072");
    EXPECT_EQ(ks.round_keys[15].to_hex(), "CB3D8B0E17F5");
}

TEST(Des, RoundKeySourcesAgreeWithSchedule) {
    std::mt19937_64 g(3);
    const auto src = round_key_sources(16);
    for (int t = 0; t < 20; ++t) {
        const BitBlock key(64, g());
        const auto ks = key_schedule(key, 16);
        for (int n = 0; n < 16; ++n)
            for (int j = 1; j <= 48; ++j) ASSERT_EQ(ks.round_keys[n].bit(j), key.bit(src[n][j - 1]));
    }
    for (const auto& round : src)
        for (int K : round) EXPECT_FALSE(is_parity_position(K));
}

TEST(Des, FeistelOfZero) {
    EXPECT_EQ(feistel_f(BitBlock(32, 0), BitBlock(48, 0)).to_hex(), "D8D8DBBC");
}

TEST(Des, ReducedRounds) {
    const auto pt = hex("0123456789ABCDEF"), key = hex("133457799BBCDFF1");
    EXPECT_EQ(encrypt(pt, key, 1).to_hex(), "4472457288EEDDEA");
    EXPECT_EQ(encrypt(pt, key, 2).to_hex(), "9DA4CEE1048CEEC0");
    EXPECT_EQ(encrypt(pt, key, 3).to_hex(), "2E4C9996194999C1");
    EXPECT_EQ(encrypt(pt, key, 8).to_hex(), "54ACC03C4B187449");
    EXPECT_THROW(encrypt(pt, key, 0), InvalidArgument);
    EXPECT_THROW(encrypt(pt, key, 17), InvalidArgument);
}

TEST(Des, SboxLookup) {
    // row from bits 1 and 6, column from bits 2..5
    EXPECT_EQ(sbox_lookup(sbox(1), BitBlock(6, 0b011011)).value(), 5u);
    EXPECT_EQ(sbox_lookup(sbox(1), BitBlock(6, 0)).value(), 14u);
    EXPECT_THROW(sbox(9), InvalidArgument);
}

TEST(Des, RoundTripAndParity) {
    std::mt19937_64 g(11);
    for (int t = 0; t < 300; ++t) {
        const BitBlock pt(64, g()), key(64, g());
        const int rounds = 1 + static_cast<int>(g() % 16);
        const auto ct = encrypt(pt, key, rounds);
        ASSERT_EQ(decrypt(ct, key, rounds), pt);
        // parity bits never reach a round key
        BitBlock flipped = key;
        const int parity = 8 * (1 + static_cast<int>(g() % 8));
        flipped.set(parity, !flipped.bit(parity));
        ASSERT_EQ(encrypt(pt, flipped, rounds), ct);
        ASSERT_TRUE(same_effective_key(key, flipped));
    }
    const auto k = with_even_parity(hex("0000000000000000"));
    for (int byte = 0; byte < 8; ++byte) {
        int ones = 0;
        for (int i = 1; i <= 8; ++i) ones += k.bit(8 * byte + i);
        EXPECT_EQ(ones % 2, 0);
    }
}

TEST(DesTables, FilesMatchEmbeddedTables) {
    using testutil::data_path;
    using testutil::read_file;
    EXPECT_EQ(parse_perm_table(read_file(data_path("tables/ip.txt")), 64).entries, ip_table().entries);
    EXPECT_EQ(parse_perm_table(read_file(data_path("tables/ip_inverse.txt")), 64).entries, ip_inverse_table().entries);
    EXPECT_EQ(parse_perm_table(read_file(data_path("tables/e.txt")), 32).entries, expansion_table().entries);
    EXPECT_EQ(parse_perm_table(read_file(data_path("tables/p.txt")), 32).entries, p_table().entries);
    EXPECT_EQ(parse_perm_table(read_file(data_path("tables/pc1.txt")), 64).entries, pc1_table().entries);
    EXPECT_EQ(parse_perm_table(read_file(data_path("tables/pc2.txt")), 56).entries, pc2_table().entries);
    EXPECT_EQ(parse_table_text(read_file(data_path("tables/shifts.txt"))),
              std::vector<int>(tables::kShifts.begin(), tables::kShifts.end()));
    for (int i = 1; i <= 8; ++i) {
        const auto s = parse_sbox(read_file(data_path("tables/s" + std::to_string(i) + ".txt")), i);
        EXPECT_EQ(s.table, sbox(i).table) << "S" << i;
    }
}

TEST(DesTables, Structure) {
    EXPECT_TRUE(ip_table().is_bijection());
    EXPECT_EQ(ip_table().inverse().entries, ip_inverse_table().entries);
    EXPECT_TRUE(p_table().is_bijection());
    EXPECT_EQ(expansion_table().out_width(), 48);
    int shifts = 0;
    for (int s : tables::kShifts) shifts += s;
    EXPECT_EQ(shifts, 28);
    for (int i = 1; i <= 8; ++i)
        for (const auto& row : sbox(i).table) {
            std::vector<int> seen(16, 0);
            for (auto v : row) ++seen[v];
            EXPECT_EQ(seen, std::vector<int>(16, 1));   // every row is a permutation of 0..15
        }
}

TEST(DesTables, ParseErrors) {
    EXPECT_THROW(parse_table_text("1 2 x"), ParseError);
    EXPECT_THROW(parse_perm_table("1 2 65", 64), InvalidTable);
    EXPECT_THROW(parse_sbox("1 2 3", 1), InvalidTable);
    EXPECT_EQ(parse_table_text("# comment\n 3 4 # more\n5"), (std::vector<int>{3, 4, 5}));
}
