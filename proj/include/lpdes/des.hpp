#pragma once

// Round-parameterised reference DES. Reduced variants keep IP and IP^-1 and
// omit the swap after the last round, exactly like the full cipher.

#include <array>
#include <vector>

#include "lpdes/bitblock.hpp"
#include "lpdes/des_tables.hpp"

namespace lpdes {

inline constexpr int kMaxRounds = 16;

inline void check_rounds(int rounds) {
    if (rounds < 1 || rounds > kMaxRounds)
        throw InvalidArgument("rounds must be in 1..16, got " + std::to_string(rounds));
}

inline BitBlock apply_permutation(const BitBlock& input, const PermTable& table) {
    if (table.in_width != input.width())
        throw InvalidTable("table expects " + std::to_string(table.in_width) +
                           "-bit input, got " + std::to_string(input.width()));
    table.validate();
    BitBlock out(table.out_width());
    for (int i = 1; i <= table.out_width(); ++i) out.set(i, input.bit(table.entries[i - 1]));
    return out;
}

inline BitBlock sbox_lookup(const SBox& box, const BitBlock& in6) {
    if (in6.width() != 6) throw InvalidArgument("S-box input must be 6 bits");
    const int row = (in6.bit(1) ? 2 : 0) | (in6.bit(6) ? 1 : 0);
    const int col = static_cast<int>((in6.value() >> 1) & 0xF);
    return BitBlock(4, box.table[row][col]);
}

struct KeySchedule {
    std::vector<BitBlock> round_keys;   // round_keys[n-1] is used in round n
    int rounds() const noexcept { return static_cast<int>(round_keys.size()); }
};

// Key positions 8, 16, ..., 64 are parity bits.
inline constexpr bool is_parity_position(int key_bit) noexcept { return key_bit % 8 == 0; }

// For round n and round-key bit j, the 64-bit key position that bit is
// copied from. This is PC-1, the cumulative rotations and PC-2 composed.
inline std::vector<std::array<int, 48>> round_key_sources(int rounds) {
    check_rounds(rounds);
    const auto& pc1 = pc1_table().entries;
    const auto& pc2 = pc2_table().entries;
    std::vector<std::array<int, 48>> out;
    int shift = 0;
    for (int n = 0; n < rounds; ++n) {
        shift += tables::kShifts[n];
        std::array<int, 48> src{};
        for (int j = 0; j < 48; ++j) {
            const int reg = pc2[j] - 1;                     // 0..55 in C||D after shifting
            const int half = reg / 28, pos = reg % 28;
            const int before = half * 28 + (pos + shift) % 28;
            src[j] = pc1[before];
        }
        out.push_back(src);
    }
    return out;
}

inline KeySchedule key_schedule(const BitBlock& key, int rounds) {
    check_rounds(rounds);
    if (key.width() != 64) throw InvalidArgument("DES key must be 64 bits");
    BitBlock cd = apply_permutation(key, pc1_table());
    std::uint64_t c = cd.value() >> 28, d = cd.value() & 0xFFFFFFF;
    auto rotl28 = [](std::uint64_t v, int s) { return ((v << s) | (v >> (28 - s))) & 0xFFFFFFF; };
    KeySchedule ks;
    for (int n = 0; n < rounds; ++n) {
        c = rotl28(c, tables::kShifts[n]);
        d = rotl28(d, tables::kShifts[n]);
        ks.round_keys.push_back(apply_permutation(BitBlock(56, (c << 28) | d), pc2_table()));
    }
    return ks;
}

inline BitBlock feistel_f(const BitBlock& right, const BitBlock& round_key) {
    if (right.width() != 32 || round_key.width() != 48)
        throw InvalidArgument("f takes a 32-bit half and a 48-bit round key");
    const BitBlock x = apply_permutation(right, expansion_table()) ^ round_key;
    std::uint64_t s = 0;
    for (int g = 0; g < 8; ++g) {
        const auto in6 = BitBlock(6, (x.value() >> (42 - 6 * g)) & 0x3F);
        s = (s << 4) | sbox_lookup(sbox(g + 1), in6).value();
    }
    return apply_permutation(BitBlock(32, s), p_table());
}

namespace detail {

inline BitBlock feistel_network(const BitBlock& block, const std::vector<BitBlock>& keys) {
    const BitBlock b = apply_permutation(block, ip_table());
    BitBlock l(32, b.value() >> 32), r(32, b.value() & 0xFFFFFFFFu);
    for (const auto& k : keys) {
        BitBlock next = l ^ feistel_f(r, k);
        l = r;
        r = next;
    }
    // no swap after the final round
    return apply_permutation(BitBlock(64, (r.value() << 32) | l.value()), ip_inverse_table());
}

} // namespace detail

inline BitBlock encrypt(const BitBlock& pt, const BitBlock& key, int rounds) {
    if (pt.width() != 64) throw InvalidArgument("plaintext must be 64 bits");
    return detail::feistel_network(pt, key_schedule(key, rounds).round_keys);
}

inline BitBlock decrypt(const BitBlock& ct, const BitBlock& key, int rounds) {
    if (ct.width() != 64) throw InvalidArgument("ciphertext must be 64 bits");
    auto keys = key_schedule(key, rounds).round_keys;
    std::vector<BitBlock> rev(keys.rbegin(), keys.rend());
    return detail::feistel_network(ct, rev);
}

// Sets every parity bit so that each byte has an even number of ones.
inline BitBlock with_even_parity(BitBlock key) {
    for (int byte = 0; byte < 8; ++byte) {
        int ones = 0;
        for (int i = 1; i <= 7; ++i) ones += key.bit(byte * 8 + i);
        key.set(byte * 8 + 8, ones % 2 != 0);
    }
    return key;
}

// Two keys are the same DES key when they agree on the 56 non-parity bits.
inline bool same_effective_key(const BitBlock& a, const BitBlock& b) {
    return with_even_parity(a) == with_even_parity(b);
}

} // namespace lpdes
