#pragma once

// DES as a circuit of equivalences for the known-plaintext attack. The
// circuit is built once over plaintext, key and ciphertext variables; wiring
// (permutations, expansion, the swap, round-key selection) is removed by
// renaming, the known bits are substituted and the set is simplified before
// it is translated to a program.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "lpdes/bool_expr.hpp"
#include "lpdes/des.hpp"
#include "lpdes/encode_direct.hpp"
#include "lpdes/minimize.hpp"
#include "lpdes/simplify.hpp"
#include "lpdes/translate.hpp"

namespace lpdes {

namespace opt {

inline std::string p(int P, int B) { return atom_text("p", {P, B}); }
inline std::string c(int P, int B) { return atom_text("c", {P, B}); }
inline std::string l(int P, int b, int N) { return atom_text("l", {P, b, N}); }
inline std::string r(int P, int b, int N) { return atom_text("r", {P, b, N}); }
inline std::string e(int P, int b, int N) { return atom_text("e", {P, b, N}); }
inline std::string x(int P, int b, int N) { return atom_text("x", {P, b, N}); }
inline std::string m(int P, int b, int N) { return atom_text("m", {P, b, N}); }
inline std::string s(int P, int b, int N) { return atom_text("s", {P, b, N}); }
inline std::string f(int P, int b, int N) { return atom_text("f", {P, b, N}); }
inline std::string k(int b, int N) { return atom_text("k", {b, N}); }
inline std::string key(int K) { return atom_text("key", {K}); }

} // namespace opt

struct OptInstance {
    int rounds = 3;
    std::vector<BitBlock> plaintexts;
    std::vector<BitBlock> ciphertexts;
    std::map<int, bool> fixed_key_bits;
};

// Distinct product terms of all four outputs of one S-box, in a fixed order.
inline std::vector<Cube> sbox_shared_terms(int box) {
    std::set<std::string> seen;
    std::vector<Cube> out;
    for (int o = 1; o <= 4; ++o)
        for (const auto& c : sbox_output_cover(box, o))
            if (seen.insert(c.encoding(6)).second) out.push_back(c);
    std::sort(out.begin(), out.end(), [](const Cube& a, const Cube& b) { return a.encoding(6) < b.encoding(6); });
    return out;
}

// Format of m-indices: 100*box + term number.
inline int term_label(int box, int t) { return 100 * box + t; }

// The whole cipher over free plaintext and key variables. Every round
// introduces e (expansion), k (round key), x = e ^ k, m (S-box product
// terms), s (S-box outputs), f (after P), l and r (the halves).
inline EquivSet build_equivalences(int rounds, int pairs) {
    check_direct_params(rounds, pairs);
    using namespace opt;
    EquivSet es;
    for (int K : effective_key_positions()) es.free_vars.insert(es.var(key(K)));
    const auto src = round_key_sources(rounds);
    for (int N = 1; N <= rounds; ++N)
        for (int j = 1; j <= 48; ++j) es.define(es.var(k(ebit_label(j), N)), BoolExpr::var(es.var(key(src[N - 1][j - 1]))));

    std::vector<std::vector<Cube>> terms(9);
    std::vector<std::vector<std::vector<int>>> uses(9, std::vector<std::vector<int>>(5));   // [box][out] -> term numbers
    for (int g = 1; g <= 8; ++g) {
        terms[g] = sbox_shared_terms(g);
        for (int o = 1; o <= 4; ++o)
            for (const auto& c : sbox_output_cover(g, o))
                for (std::size_t t = 0; t < terms[g].size(); ++t)
                    if (terms[g][t] == c) uses[g][o].push_back(static_cast<int>(t) + 1);
    }

    for (int P = 1; P <= pairs; ++P) {
        for (int B = 1; B <= 64; ++B) es.free_vars.insert(es.var(p(P, B)));
        for (int i = 1; i <= 32; ++i) {
            es.define(es.var(l(P, half_label(i), 0)), BoolExpr::var(es.var(p(P, tables::kIP[i - 1]))));
            es.define(es.var(r(P, half_label(i), 0)), BoolExpr::var(es.var(p(P, tables::kIP[32 + i - 1]))));
        }
        for (int N = 1; N <= rounds; ++N) {
            for (int j = 1; j <= 48; ++j) {
                const int b = ebit_label(j);
                es.define(es.var(e(P, b, N)), BoolExpr::var(es.var(r(P, half_label(tables::kE[j - 1]), N - 1))));
                es.define(es.var(x(P, b, N)),
                          BoolExpr::exclusive(BoolExpr::var(es.var(e(P, b, N))), BoolExpr::var(es.var(k(b, N)))));
            }
            for (int g = 1; g <= 8; ++g) {
                std::vector<VarId> in;
                for (int i = 1; i <= 6; ++i) in.push_back(es.var(x(P, 10 * g + i, N)));
                for (std::size_t t = 0; t < terms[g].size(); ++t)
                    es.define(es.var(m(P, term_label(g, static_cast<int>(t) + 1), N)), cube_to_expr(terms[g][t], in));
                for (int o = 1; o <= 4; ++o) {
                    std::vector<BoolExpr> ms;
                    for (int t : uses[g][o]) ms.push_back(BoolExpr::var(es.var(m(P, term_label(g, t), N))));
                    es.define(es.var(s(P, 10 * g + o, N)), BoolExpr::disj(std::move(ms)));
                }
            }
            for (int i = 1; i <= 32; ++i) {
                const int b = half_label(i);
                es.define(es.var(f(P, b, N)), BoolExpr::var(es.var(s(P, half_label(tables::kP[i - 1]), N))));
                es.define(es.var(l(P, b, N)), BoolExpr::var(es.var(r(P, b, N - 1))));
                es.define(es.var(r(P, b, N)),
                          BoolExpr::exclusive(BoolExpr::var(es.var(l(P, b, N - 1))), BoolExpr::var(es.var(f(P, b, N)))));
            }
        }
        // preoutput is R_r || L_r
        for (int B = 1; B <= 64; ++B) {
            const int q = tables::kIPInverse[B - 1];
            const std::string src_bit = q <= 32 ? r(P, half_label(q), rounds) : l(P, half_label(q - 32), rounds);
            es.define(es.var(c(P, B)), BoolExpr::var(es.var(src_bit)));
        }
    }
    return es;
}

// Removes every definition v <-> w between two variables by renaming v to w.
inline EquivSet partial_evaluate(EquivSet es) {
    std::vector<Definition> kept;
    bool any = false;
    for (auto& d : es.defs) {
        if (!d.lhs.is_const && !d.lhs.negative && d.rhs.is_var_lit() && !d.rhs.lit.negative) {
            const SignedLit from = es.resolve(d.lhs), to = es.resolve(d.rhs.lit);
            if (!from.is_const && !to.is_const && from.var != to.var) {
                es.aliases[from.var] = to.with_sign(from.negative);
                any = true;
                continue;
            }
        }
        kept.push_back(std::move(d));
    }
    if (!any) {
        es.defs = std::move(kept);
        return es;
    }
    for (auto& d : kept) {
        d.lhs = es.resolve(d.lhs);
        d.rhs = detail::substitute(d.rhs, es);
    }
    es.defs = std::move(kept);
    return es;
}

// Pins plaintext, ciphertext (and optionally some key bits) and simplifies.
inline EquivSet propagate_known(EquivSet es, const OptInstance& inst) {
    using namespace opt;
    const int pairs = static_cast<int>(inst.plaintexts.size());
    if (inst.ciphertexts.size() != inst.plaintexts.size()) throw InvalidArgument("plaintext and ciphertext counts differ");
    auto pin = [&](const std::string& name, bool value) {
        auto v = es.vars.find(name);
        if (!v) throw InvalidArgument("instance does not match the circuit: no variable " + name);
        es.defs.push_back(Definition{SignedLit::constant(value), BoolExpr::literal(SignedLit::pos(*v))});
    };
    for (int P = 1; P <= pairs; ++P)
        for (int B = 1; B <= 64; ++B) {
            pin(p(P, B), inst.plaintexts[P - 1].bit(B));
            pin(c(P, B), inst.ciphertexts[P - 1].bit(B));
        }
    for (const auto& [K, value] : inst.fixed_key_bits) {
        if (K < 1 || K > 64 || is_parity_position(K)) throw InvalidArgument("fixed key bit must be a non-parity position");
        pin(key(K), value);
    }
    return simplify_to_saturation(std::move(es));
}

inline EquivSet optimized_equivalences(const OptInstance& inst) {
    EquivSet es = build_equivalences(inst.rounds, static_cast<int>(inst.plaintexts.size()));
    return propagate_known(partial_evaluate(std::move(es)), inst);
}

inline Translation emit_program(const EquivSet& es) { return translate_equivset(es); }

// Key bits recovered from a stable model of emit_program(es), parity even.
inline BitBlock key_from_optimized_model(const EquivSet& es, const Translation& t, const AtomSet& model) {
    BitBlock key(64);
    for (int K : effective_key_positions()) {
        auto v = es.vars.find(opt::key(K));
        if (!v) continue;
        const SignedLit l = es.resolve(SignedLit::pos(*v));
        bool bit;
        if (l.is_const) {
            bit = l.value;
        } else if (t.map.has(l.var)) {
            bit = model.count(t.map.atom(l.var)) != 0;
            if (l.negative) bit = !bit;
        } else {
            bit = false;   // unconstrained bit that vanished from every definition
        }
        key.set(K, bit);
    }
    return with_even_parity(key);
}

// Valuation of the circuit variables for a given key and instance,
// obtained by running the reference cipher bit by bit.
inline Valuation circuit_valuation(const EquivSet& es, int rounds, const std::vector<BitBlock>& plaintexts,
                                   const BitBlock& key) {
    using namespace opt;
    Valuation v(es.vars.size(), -1);
    auto put = [&](const std::string& name, bool b) {
        if (auto id = es.vars.find(name)) v[*id] = b ? 1 : 0;
    };
    const auto ks = key_schedule(key, rounds);
    for (int K = 1; K <= 64; ++K) put(opt::key(K), key.bit(K));
    for (int N = 1; N <= rounds; ++N)
        for (int j = 1; j <= 48; ++j) put(k(ebit_label(j), N), ks.round_keys[N - 1].bit(j));
    for (std::size_t pi = 0; pi < plaintexts.size(); ++pi) {
        const int P = static_cast<int>(pi) + 1;
        for (int B = 1; B <= 64; ++B) put(p(P, B), plaintexts[pi].bit(B));
        const BitBlock ipb = apply_permutation(plaintexts[pi], ip_table());
        BitBlock L(32, ipb.value() >> 32), R(32, ipb.value() & 0xFFFFFFFFu);
        for (int i = 1; i <= 32; ++i) {
            put(l(P, half_label(i), 0), L.bit(i));
            put(r(P, half_label(i), 0), R.bit(i));
        }
        for (int N = 1; N <= rounds; ++N) {
            const BitBlock E = apply_permutation(R, expansion_table());
            const BitBlock X = E ^ ks.round_keys[N - 1];
            BitBlock S(32);
            for (int g = 1; g <= 8; ++g) {
                const BitBlock in6(6, (X.value() >> (42 - 6 * (g - 1))) & 0x3F);
                const BitBlock out = sbox_lookup(sbox(g), in6);
                for (int o = 1; o <= 4; ++o) S.set(4 * (g - 1) + o, out.bit(o));
                const auto terms = sbox_shared_terms(g);
                for (std::size_t t = 0; t < terms.size(); ++t)
                    put(m(P, term_label(g, static_cast<int>(t) + 1), N), terms[t].covers(static_cast<std::uint32_t>(in6.value())));
            }
            const BitBlock F = apply_permutation(S, p_table());
            for (int j = 1; j <= 48; ++j) {
                put(e(P, ebit_label(j), N), E.bit(j));
                put(x(P, ebit_label(j), N), X.bit(j));
            }
            for (int i = 1; i <= 32; ++i) {
                put(s(P, half_label(i), N), S.bit(i));
                put(f(P, half_label(i), N), F.bit(i));
            }
            BitBlock next = L ^ F;
            L = R;
            R = next;
            for (int i = 1; i <= 32; ++i) {
                put(l(P, half_label(i), N), L.bit(i));
                put(r(P, half_label(i), N), R.bit(i));
            }
        }
        const BitBlock ct = encrypt(plaintexts[pi], key, rounds);
        for (int B = 1; B <= 64; ++B) put(c(P, B), ct.bit(B));
    }
    return v;
}

} // namespace lpdes
