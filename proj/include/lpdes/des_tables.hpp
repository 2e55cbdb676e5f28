#pragma once

// FIPS 46-3 tables. The same data is checked in as text under data/tables/
// (one table per file, whitespace separated decimal entries, '#' comments);
// parse_table_text() reads that format and the test suite checks that both
// copies agree.

#include <array>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "lpdes/errors.hpp"

namespace lpdes {

// Output bit i (1-based) reads input bit entries[i-1].
struct PermTable {
    int in_width = 0;
    std::vector<int> entries;

    int out_width() const noexcept { return static_cast<int>(entries.size()); }

    void validate() const {
        for (int e : entries)
            if (e < 1 || e > in_width)
                throw InvalidTable("permutation entry " + std::to_string(e) + " outside 1.." +
                                   std::to_string(in_width));
    }

    bool is_bijection() const {
        if (out_width() != in_width) return false;
        std::vector<bool> seen(in_width + 1, false);
        for (int e : entries) {
            if (e < 1 || e > in_width || seen[e]) return false;
            seen[e] = true;
        }
        return true;
    }

    // Only meaningful for bijections.
    PermTable inverse() const {
        if (!is_bijection()) throw InvalidTable("inverse of a non-bijective table");
        PermTable inv{in_width, std::vector<int>(entries.size())};
        for (int i = 0; i < out_width(); ++i) inv.entries[entries[i] - 1] = i + 1;
        return inv;
    }
};

struct SBox {
    int box_index = 0;                       // 1..8
    std::array<std::array<std::uint8_t, 16>, 4> table{};
};

namespace tables {

inline constexpr std::array<int, 64> kIP = {
    58, 50, 42, 34, 26, 18, 10, 2, 60, 52, 44, 36, 28, 20, 12, 4,
    62, 54, 46, 38, 30, 22, 14, 6, 64, 56, 48, 40, 32, 24, 16, 8,
    57, 49, 41, 33, 25, 17, 9,  1, 59, 51, 43, 35, 27, 19, 11, 3,
    61, 53, 45, 37, 29, 21, 13, 5, 63, 55, 47, 39, 31, 23, 15, 7};

inline constexpr std::array<int, 64> kIPInverse = {
    40, 8, 48, 16, 56, 24, 64, 32, 39, 7, 47, 15, 55, 23, 63, 31,
    38, 6, 46, 14, 54, 22, 62, 30, 37, 5, 45, 13, 53, 21, 61, 29,
    36, 4, 44, 12, 52, 20, 60, 28, 35, 3, 43, 11, 51, 19, 59, 27,
    34, 2, 42, 10, 50, 18, 58, 26, 33, 1, 41, 9,  49, 17, 57, 25};

inline constexpr std::array<int, 48> kE = {
    32, 1,  2,  3,  4,  5,  4,  5,  6,  7,  8,  9,  8,  9,  10, 11,
    12, 13, 12, 13, 14, 15, 16, 17, 16, 17, 18, 19, 20, 21, 20, 21,
    22, 23, 24, 25, 24, 25, 26, 27, 28, 29, 28, 29, 30, 31, 32, 1};

inline constexpr std::array<int, 32> kP = {
    16, 7, 20, 21, 29, 12, 28, 17, 1,  15, 23, 26, 5,  18, 31, 10,
    2,  8, 24, 14, 32, 27, 3,  9,  19, 13, 30, 6,  22, 11, 4,  25};

inline constexpr std::array<int, 56> kPC1 = {
    57, 49, 41, 33, 25, 17, 9,  1,  58, 50, 42, 34, 26, 18,
    10, 2,  59, 51, 43, 35, 27, 19, 11, 3,  60, 52, 44, 36,
    63, 55, 47, 39, 31, 23, 15, 7,  62, 54, 46, 38, 30, 22,
    14, 6,  61, 53, 45, 37, 29, 21, 13, 5,  28, 20, 12, 4};

inline constexpr std::array<int, 48> kPC2 = {
    14, 17, 11, 24, 1,  5,  3,  28, 15, 6,  21, 10,
    23, 19, 12, 4,  26, 8,  16, 7,  27, 20, 13, 2,
    41, 52, 31, 37, 47, 55, 30, 40, 51, 45, 33, 48,
    44, 49, 39, 56, 34, 53, 46, 42, 50, 36, 29, 32};

inline constexpr std::array<int, 16> kShifts = {1, 1, 2, 2, 2, 2, 2, 2, 1, 2, 2, 2, 2, 2, 2, 1};

inline constexpr std::uint8_t kS[8][4][16] = {
    {{14, 4, 13, 1, 2, 15, 11, 8, 3, 10, 6, 12, 5, 9, 0, 7},
     {0, 15, 7, 4, 14, 2, 13, 1, 10, 6, 12, 11, 9, 5, 3, 8},
     {4, 1, 14, 8, 13, 6, 2, 11, 15, 12, 9, 7, 3, 10, 5, 0},
     {15, 12, 8, 2, 4, 9, 1, 7, 5, 11, 3, 14, 10, 0, 6, 13}},
    {{15, 1, 8, 14, 6, 11, 3, 4, 9, 7, 2, 13, 12, 0, 5, 10},
     {3, 13, 4, 7, 15, 2, 8, 14, 12, 0, 1, 10, 6, 9, 11, 5},
     {0, 14, 7, 11, 10, 4, 13, 1, 5, 8, 12, 6, 9, 3, 2, 15},
     {13, 8, 10, 1, 3, 15, 4, 2, 11, 6, 7, 12, 0, 5, 14, 9}},
    {{10, 0, 9, 14, 6, 3, 15, 5, 1, 13, 12, 7, 11, 4, 2, 8},
     {13, 7, 0, 9, 3, 4, 6, 10, 2, 8, 5, 14, 12, 11, 15, 1},
     {13, 6, 4, 9, 8, 15, 3, 0, 11, 1, 2, 12, 5, 10, 14, 7},
     {1, 10, 13, 0, 6, 9, 8, 7, 4, 15, 14, 3, 11, 5, 2, 12}},
    {{7, 13, 14, 3, 0, 6, 9, 10, 1, 2, 8, 5, 11, 12, 4, 15},
     {13, 8, 11, 5, 6, 15, 0, 3, 4, 7, 2, 12, 1, 10, 14, 9},
     {10, 6, 9, 0, 12, 11, 7, 13, 15, 1, 3, 14, 5, 2, 8, 4},
     {3, 15, 0, 6, 10, 1, 13, 8, 9, 4, 5, 11, 12, 7, 2, 14}},
    {{2, 12, 4, 1, 7, 10, 11, 6, 8, 5, 3, 15, 13, 0, 14, 9},
     {14, 11, 2, 12, 4, 7, 13, 1, 5, 0, 15, 10, 3, 9, 8, 6},
     {4, 2, 1, 11, 10, 13, 7, 8, 15, 9, 12, 5, 6, 3, 0, 14},
     {11, 8, 12, 7, 1, 14, 2, 13, 6, 15, 0, 9, 10, 4, 5, 3}},
    {{12, 1, 10, 15, 9, 2, 6, 8, 0, 13, 3, 4, 14, 7, 5, 11},
     {10, 15, 4, 2, 7, 12, 9, 5, 6, 1, 13, 14, 0, 11, 3, 8},
     {9, 14, 15, 5, 2, 8, 12, 3, 7, 0, 4, 10, 1, 13, 11, 6},
     {4, 3, 2, 12, 9, 5, 15, 10, 11, 14, 1, 7, 6, 0, 8, 13}},
    {{4, 11, 2, 14, 15, 0, 8, 13, 3, 12, 9, 7, 5, 10, 6, 1},
     {13, 0, 11, 7, 4, 9, 1, 10, 14, 3, 5, 12, 2, 15, 8, 6},
     {1, 4, 11, 13, 12, 3, 7, 14, 10, 15, 6, 8, 0, 5, 9, 2},
     {6, 11, 13, 8, 1, 4, 10, 7, 9, 5, 0, 15, 14, 2, 3, 12}},
    {{13, 2, 8, 4, 6, 15, 11, 1, 10, 9, 3, 14, 5, 0, 12, 7},
     {1, 15, 13, 8, 10, 3, 7, 4, 12, 5, 6, 11, 0, 14, 9, 2},
     {7, 11, 4, 1, 9, 12, 14, 2, 0, 6, 10, 13, 15, 3, 5, 8},
     {2, 1, 14, 7, 4, 10, 8, 13, 15, 12, 9, 0, 3, 5, 6, 11}}};

template <std::size_t N>
PermTable make_perm(int in_width, const std::array<int, N>& a) {
    return PermTable{in_width, std::vector<int>(a.begin(), a.end())};
}

} // namespace tables

inline const PermTable& ip_table() {
    static const PermTable t = tables::make_perm(64, tables::kIP);
    return t;
}
inline const PermTable& ip_inverse_table() {
    static const PermTable t = tables::make_perm(64, tables::kIPInverse);
    return t;
}
inline const PermTable& expansion_table() {
    static const PermTable t = tables::make_perm(32, tables::kE);
    return t;
}
inline const PermTable& p_table() {
    static const PermTable t = tables::make_perm(32, tables::kP);
    return t;
}
inline const PermTable& pc1_table() {
    static const PermTable t = tables::make_perm(64, tables::kPC1);
    return t;
}
inline const PermTable& pc2_table() {
    static const PermTable t = tables::make_perm(56, tables::kPC2);
    return t;
}

inline const SBox& sbox(int index) {
    static const std::array<SBox, 8> boxes = [] {
        std::array<SBox, 8> b{};
        for (int i = 0; i < 8; ++i) {
            b[i].box_index = i + 1;
            for (int r = 0; r < 4; ++r)
                for (int c = 0; c < 16; ++c) b[i].table[r][c] = tables::kS[i][r][c];
        }
        return b;
    }();
    if (index < 1 || index > 8) throw InvalidArgument("S-box index must be 1..8");
    return boxes[index - 1];
}

// Reads the checked-in table format: decimal integers separated by
// whitespace; '#' starts a comment running to the end of the line.
inline std::vector<int> parse_table_text(std::string_view text) {
    std::vector<int> out;
    int line = 1;
    std::size_t i = 0;
    while (i < text.size()) {
        char c = text[i];
        if (c == '\n') { ++line; ++i; continue; }
        if (c == '#') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        if (c == ' ' || c == '\t' || c == '\r') { ++i; continue; }
        if (c < '0' || c > '9') throw ParseError(std::string("unexpected character '") + c + "'", line);
        int v = 0;
        while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
            v = v * 10 + (text[i] - '0');
            ++i;
        }
        out.push_back(v);
    }
    return out;
}

inline PermTable parse_perm_table(std::string_view text, int in_width) {
    PermTable t{in_width, parse_table_text(text)};
    t.validate();
    return t;
}

inline SBox parse_sbox(std::string_view text, int box_index) {
    const auto v = parse_table_text(text);
    if (v.size() != 64) throw InvalidTable("S-box file must hold 4 rows of 16 entries");
    SBox s{box_index, {}};
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 16; ++c) {
            const int e = v[r * 16 + c];
            if (e > 15) throw InvalidTable("S-box entry " + std::to_string(e) + " exceeds 15");
            s.table[r][c] = static_cast<std::uint8_t>(e);
        }
    return s;
}

} // namespace lpdes
