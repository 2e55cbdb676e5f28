#pragma once

// Ground program for DES written out rule by rule: the round structure, the
// function f with S-boxes as truth-table rules, and the key schedule as
// precomputed k(EB,N) :- key(K) rules.
//
// Bits inside a half are renumbered 10*group + index, four bits per group
// (11..14, 21..24, ..., 81..84); expanded bits use six per group
// (11..16, ..., 81..86).

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lpdes/des.hpp"
#include "lpdes/logic_program.hpp"
#include "lpdes/minimize.hpp"
#include "lpdes/translate.hpp"

namespace lpdes {

// Label of bit `pos` (1..32) of a half.
inline constexpr int half_label(int pos) { return 10 * ((pos - 1) / 4 + 1) + ((pos - 1) % 4 + 1); }
// Label of bit `pos` (1..48) of an expanded half.
inline constexpr int ebit_label(int pos) { return 10 * ((pos - 1) / 6 + 1) + ((pos - 1) % 6 + 1); }

namespace direct {

inline std::string p(int P, int B) { return atom_text("p", {P, B}); }
inline std::string permuted_plaintext(int P, int B1) { return atom_text("permuted_plaintext", {P, B1}); }
inline std::string l(int P, int IB, int N) { return atom_text("l", {P, IB, N}); }
inline std::string r(int P, int IB, int N) { return atom_text("r", {P, IB, N}); }
inline std::string e(int P, int EB, int N) { return atom_text("e", {P, EB, N}); }
inline std::string a(int P, int EB, int N) { return atom_text("a", {P, EB, N}); }
inline std::string b(int P, int IB, int N) { return atom_text("b", {P, IB, N}); }
inline std::string f(int P, int IB, int N) { return atom_text("f", {P, IB, N}); }
inline std::string k(int EB, int N) { return atom_text("k", {EB, N}); }
inline std::string key(int K) { return atom_text("key", {K}); }
inline std::string unpermuted_cipher(int P, int B1) { return atom_text("unpermuted_cipher", {P, B1}); }
inline std::string cipher(int P, int BC) { return atom_text("cipher", {P, BC}); }

} // namespace direct

inline void check_direct_params(int rounds, int pairs) {
    check_rounds(rounds);
    if (pairs < 1) throw InvalidArgument("at least one plaintext/ciphertext pair is needed");
}

namespace detail {

inline Rule rule(Program& pr, const std::string& head, std::initializer_list<std::string> pos,
                 std::initializer_list<std::string> neg = {}) {
    Rule x{pr.atom(head), {}, {}};
    for (const auto& s : pos) x.pos.push_back(pr.atom(s));
    for (const auto& s : neg) x.neg.push_back(pr.atom(s));
    return x;
}

} // namespace detail

// Initial permutation, split, the middle rounds, the final round without
// swap, and the final permutation.
inline std::vector<Rule> build_round_rules(Program& pr, int rounds, int pairs) {
    check_direct_params(rounds, pairs);
    using namespace direct;
    using detail::rule;
    const auto& ipinv = tables::kIPInverse;   // ipinv[B-1] is where IP moves input bit B
    std::vector<Rule> out;
    for (int P = 1; P <= pairs; ++P) {
        for (int B = 1; B <= 64; ++B) out.push_back(rule(pr, permuted_plaintext(P, ipinv[B - 1]), {p(P, B)}));
        for (int B1 = 1; B1 <= 32; ++B1) out.push_back(rule(pr, l(P, half_label(B1), 0), {permuted_plaintext(P, B1)}));
        for (int B1 = 33; B1 <= 64; ++B1)
            out.push_back(rule(pr, r(P, half_label(B1 - 32), 0), {permuted_plaintext(P, B1)}));
        for (int N = 0; N + 1 < rounds; ++N)
            for (int i = 1; i <= 32; ++i) {
                const int B = half_label(i);
                out.push_back(rule(pr, l(P, B, N + 1), {r(P, B, N)}));
                out.push_back(rule(pr, r(P, B, N + 1), {l(P, B, N)}, {f(P, B, N + 1)}));
                out.push_back(rule(pr, r(P, B, N + 1), {f(P, B, N + 1)}, {l(P, B, N)}));
            }
        for (int i = 1; i <= 32; ++i) {
            const int B = half_label(i);
            out.push_back(rule(pr, r(P, B, rounds), {r(P, B, rounds - 1)}));
            out.push_back(rule(pr, l(P, B, rounds), {l(P, B, rounds - 1)}, {f(P, B, rounds)}));
            out.push_back(rule(pr, l(P, B, rounds), {f(P, B, rounds)}, {l(P, B, rounds - 1)}));
        }
        for (int B1 = 1; B1 <= 32; ++B1)
            out.push_back(rule(pr, unpermuted_cipher(P, B1), {l(P, half_label(B1), rounds)}));
        for (int B1 = 33; B1 <= 64; ++B1)
            out.push_back(rule(pr, unpermuted_cipher(P, B1), {r(P, half_label(B1 - 32), rounds)}));
        for (int BC = 1; BC <= 64; ++BC) out.push_back(rule(pr, cipher(P, BC), {unpermuted_cipher(P, ipinv[BC - 1])}));
    }
    return out;
}

// Rule count produced by build_round_rules.
inline std::size_t round_rule_count(int rounds, int pairs) {
    return static_cast<std::size_t>(pairs) * (64 + 64 + 96 * (rounds - 1) + 96 + 64 + 64);
}

// Conjunctions over the six S-box inputs for one output bit: one per true
// row, or the minimized cover.
inline std::vector<Cube> sbox_output_terms(int box, int out_bit, bool minimized) {
    if (minimized) return sbox_output_cover(box, out_bit);
    std::vector<Cube> terms;
    for (auto row : sbox_output_minterms(box, out_bit)) terms.push_back(Cube{0x3F, row});
    return terms;
}

inline std::vector<Rule> build_f_rules(Program& pr, int rounds, int pairs, bool minimized_sboxes = false) {
    check_direct_params(rounds, pairs);
    using namespace direct;
    using detail::rule;
    std::vector<Rule> out;
    for (int P = 1; P <= pairs; ++P)
        for (int N = 1; N <= rounds; ++N) {
            for (int j = 1; j <= 48; ++j)
                out.push_back(rule(pr, e(P, ebit_label(j), N), {r(P, half_label(tables::kE[j - 1]), N - 1)}));
            for (int j = 1; j <= 48; ++j) {
                const int EB = ebit_label(j);
                out.push_back(rule(pr, a(P, EB, N), {e(P, EB, N)}, {k(EB, N)}));
                out.push_back(rule(pr, a(P, EB, N), {k(EB, N)}, {e(P, EB, N)}));
            }
            for (int g = 1; g <= 8; ++g)
                for (int o = 1; o <= 4; ++o)
                    for (const auto& c : sbox_output_terms(g, o, minimized_sboxes)) {
                        Rule x{pr.atom(b(P, 10 * g + o, N)), {}, {}};
                        for (int i = 1; i <= 6; ++i) {
                            const std::uint32_t bit = 1u << (6 - i);
                            if (!(c.care & bit)) continue;
                            const AtomId in = pr.atom(a(P, 10 * g + i, N));
                            (c.value & bit ? x.pos : x.neg).push_back(in);
                        }
                        out.push_back(std::move(x));
                    }
            for (int i = 1; i <= 32; ++i)
                out.push_back(rule(pr, f(P, half_label(i), N), {b(P, half_label(tables::kP[i - 1]), N)}));
        }
    return out;
}

inline std::vector<Rule> build_keyschedule_rules(Program& pr, int rounds) {
    const auto src = round_key_sources(rounds);
    std::vector<Rule> out;
    for (int N = 1; N <= rounds; ++N)
        for (int j = 1; j <= 48; ++j)
            out.push_back(detail::rule(pr, direct::k(ebit_label(j), N), {direct::key(src[N - 1][j - 1])}));
    return out;
}

enum class DirectMode { Encrypt, Decrypt, Attack };

struct DirectInstance {
    int rounds = 1;
    DirectMode mode = DirectMode::Encrypt;
    std::vector<BitBlock> plaintexts;
    std::vector<BitBlock> ciphertexts;
    std::optional<BitBlock> key;
    std::map<int, bool> fixed_key_bits;   // attack mode: key positions pinned to a value
    bool minimized_sboxes = false;

    int pairs() const {
        return static_cast<int>(mode == DirectMode::Decrypt ? ciphertexts.size() : plaintexts.size());
    }
};

// The 56 key positions that reach the round keys.
inline std::vector<int> effective_key_positions() {
    std::vector<int> out;
    for (int K = 1; K <= 64; ++K)
        if (!is_parity_position(K)) out.push_back(K);
    return out;
}

inline Program instantiate(const DirectInstance& inst) {
    using namespace direct;
    const int pairs = inst.pairs();
    check_direct_params(inst.rounds, pairs);
    const bool need_key = inst.mode != DirectMode::Attack;
    if (need_key != inst.key.has_value())
        throw InvalidArgument(need_key ? "encryption and decryption need a key" : "the attack must not be given the key");
    if (inst.mode != DirectMode::Decrypt && inst.plaintexts.size() != static_cast<std::size_t>(pairs))
        throw InvalidArgument("plaintext count does not match");
    if (inst.mode != DirectMode::Encrypt && inst.ciphertexts.size() != static_cast<std::size_t>(pairs))
        throw InvalidArgument("ciphertext count does not match");
    if (inst.mode == DirectMode::Encrypt && !inst.ciphertexts.empty())
        throw InvalidArgument("encryption takes no ciphertexts");
    if (inst.mode == DirectMode::Decrypt && !inst.plaintexts.empty())
        throw InvalidArgument("decryption takes no plaintexts");
    for (const auto& [K, _] : inst.fixed_key_bits)
        if (K < 1 || K > 64 || is_parity_position(K)) throw InvalidArgument("fixed key bit must be a non-parity position");

    Program pr;
    // key atoms first so that they get the lowest ids
    if (inst.mode == DirectMode::Attack) {
        for (int K : effective_key_positions()) {
            auto fixed = inst.fixed_key_bits.find(K);
            if (fixed == inst.fixed_key_bits.end()) {
                const AtomId ka = pr.atom(key(K));
                add_rules(pr, choice_rules(ka, pr.atom(complement_name(key(K)))));
            } else if (fixed->second) {
                pr.add_fact(pr.atom(key(K)));
            } else {
                pr.atom(key(K));
            }
        }
    } else {
        for (int K : effective_key_positions())
            if (inst.key->bit(K)) pr.add_fact(pr.atom(key(K)));
    }
    if (inst.mode == DirectMode::Decrypt) {
        for (int P = 1; P <= pairs; ++P)
            for (int B = 1; B <= 64; ++B) {
                const AtomId pa = pr.atom(p(P, B));
                add_rules(pr, choice_rules(pa, pr.atom(complement_name(p(P, B)))));
            }
    } else {
        for (int P = 1; P <= pairs; ++P)
            for (int B = 1; B <= 64; ++B)
                if (inst.plaintexts[P - 1].bit(B)) pr.add_fact(pr.atom(p(P, B)));
    }
    add_rules(pr, build_keyschedule_rules(pr, inst.rounds));
    add_rules(pr, build_round_rules(pr, inst.rounds, pairs));
    add_rules(pr, build_f_rules(pr, inst.rounds, pairs, inst.minimized_sboxes));
    if (inst.mode != DirectMode::Encrypt)
        for (int P = 1; P <= pairs; ++P)
            for (int BC = 1; BC <= 64; ++BC)
                pr.add_rule(force(pr.atom(cipher(P, BC)), inst.ciphertexts[P - 1].bit(BC)));
    return pr;
}

namespace detail {

inline bool holds(const Program& pr, const AtomSet& m, const std::string& atom) {
    auto id = pr.find_atom(atom);
    return id && m.count(*id);
}

} // namespace detail

inline BitBlock cipher_from_model(const Program& pr, const AtomSet& m, int pair) {
    BitBlock c(64);
    for (int BC = 1; BC <= 64; ++BC) c.set(BC, detail::holds(pr, m, direct::cipher(pair, BC)));
    return c;
}

inline BitBlock plaintext_from_model(const Program& pr, const AtomSet& m, int pair) {
    BitBlock c(64);
    for (int B = 1; B <= 64; ++B) c.set(B, detail::holds(pr, m, direct::p(pair, B)));
    return c;
}

// Key read off key(K) atoms, parity bits set to even parity.
inline BitBlock key_from_model(const Program& pr, const AtomSet& m) {
    BitBlock k(64);
    for (int K : effective_key_positions()) k.set(K, detail::holds(pr, m, direct::key(K)));
    return with_even_parity(k);
}

} // namespace lpdes
