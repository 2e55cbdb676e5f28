#pragma once

// Exact two-level minimization (Quine-McCluskey prime generation followed by
// branch-and-bound minimum set cover). Inputs are at most 8 variables.

#include <algorithm>
#include <bit>
#include <bitset>
#include <cstdint>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "lpdes/bool_expr.hpp"
#include "lpdes/des.hpp"

namespace lpdes {

// A product term over n inputs. Bit (n-1-i) of `care`/`value` belongs to
// input i, so inputs[0] is the most significant position, as in table rows.
struct Cube {
    std::uint32_t care = 0;
    std::uint32_t value = 0;

    bool covers(std::uint32_t minterm) const noexcept { return (minterm & care) == value; }

    // '0', '1' or '-' per input; the order used for tie-breaking.
    std::string encoding(std::size_t n) const {
        std::string s(n, '-');
        for (std::size_t i = 0; i < n; ++i) {
            const std::uint32_t bit = 1u << (n - 1 - i);
            if (care & bit) s[i] = (value & bit) ? '1' : '0';
        }
        return s;
    }

    friend bool operator==(const Cube&, const Cube&) = default;
    friend bool operator<(const Cube& a, const Cube& b) {
        return a.care != b.care ? a.care < b.care : a.value < b.value;
    }
};

using MintermSet = std::bitset<256>;

inline std::vector<std::uint32_t> true_rows(const BoolExpr& t) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t r = 0; r < t.rows.size(); ++r)
        if (t.rows[r]) out.push_back(r);
    return out;
}

// All prime implicants, ordered lexicographically by their encoding.
inline std::vector<Cube> prime_implicants(const std::vector<std::uint32_t>& minterms, std::size_t n) {
    const std::uint32_t full = n == 0 ? 0u : ((1u << n) - 1);
    std::set<Cube> current;
    for (auto m : minterms) current.insert(Cube{full, m});
    std::set<Cube> primes;
    while (!current.empty()) {
        std::set<Cube> next;
        std::set<Cube> merged;
        std::vector<Cube> cs(current.begin(), current.end());
        for (std::size_t i = 0; i < cs.size(); ++i)
            for (std::size_t j = i + 1; j < cs.size(); ++j) {
                if (cs[i].care != cs[j].care) continue;
                const std::uint32_t diff = cs[i].value ^ cs[j].value;
                if (std::popcount(diff) != 1) continue;
                next.insert(Cube{cs[i].care & ~diff, cs[i].value & ~diff});
                merged.insert(cs[i]);
                merged.insert(cs[j]);
            }
        for (const auto& c : cs)
            if (!merged.count(c)) primes.insert(c);
        current = std::move(next);
    }
    std::vector<Cube> out(primes.begin(), primes.end());
    std::sort(out.begin(), out.end(),
              [n](const Cube& a, const Cube& b) { return a.encoding(n) < b.encoding(n); });
    return out;
}

namespace detail {

struct CoverSearch {
    std::vector<MintermSet> covers;            // per prime
    std::vector<std::vector<std::size_t>> by_minterm;
    std::vector<std::size_t> chosen, best;
    std::size_t best_size = std::numeric_limits<std::size_t>::max();

    // Minterms whose covering primes are pairwise disjoint each need their own term.
    std::size_t lower_bound(const MintermSet& open) const {
        MintermSet blocked;
        std::size_t lb = 0;
        for (std::size_t m = 0; m < 256; ++m) {
            if (!open[m]) continue;
            bool clash = false;
            for (auto p : by_minterm[m])
                if ((covers[p] & blocked).any()) { clash = true; break; }
            if (clash) continue;
            ++lb;
            for (auto p : by_minterm[m]) blocked |= covers[p];
        }
        return lb;
    }

    void run(const MintermSet& open) {
        if (open.none()) {
            if (chosen.size() < best_size) {
                best_size = chosen.size();
                best = chosen;
            }
            return;
        }
        if (chosen.size() + lower_bound(open) >= best_size) return;
        std::size_t pick = 256, fewest = std::numeric_limits<std::size_t>::max();
        for (std::size_t m = 0; m < 256; ++m) {
            if (!open[m]) continue;
            if (by_minterm[m].size() < fewest) {
                fewest = by_minterm[m].size();
                pick = m;
            }
        }
        for (auto p : by_minterm[pick]) {
            chosen.push_back(p);
            run(open & ~covers[p]);
            chosen.pop_back();
        }
    }
};

} // namespace detail

// Minimum-size set of primes covering all minterms. Among minimum covers the
// first one met by the search is returned; the search order depends only on
// the lexicographic order of the primes, so the result is deterministic.
inline std::vector<Cube> minimum_cover(const std::vector<std::uint32_t>& minterms, std::size_t n) {
    if (n > 8) throw InvalidArgument("minimization supports at most 8 inputs");
    if (minterms.empty()) return {};
    const auto primes = prime_implicants(minterms, n);
    detail::CoverSearch s;
    s.by_minterm.assign(256, {});
    MintermSet all;
    for (auto m : minterms) all.set(m);
    for (std::size_t p = 0; p < primes.size(); ++p) {
        MintermSet c;
        for (auto m : minterms)
            if (primes[p].covers(m)) {
                c.set(m);
                s.by_minterm[m].push_back(p);
            }
        s.covers.push_back(c);
    }
    s.run(all);
    std::vector<Cube> out;
    for (auto p : s.best) out.push_back(primes[p]);
    std::sort(out.begin(), out.end(),
              [n](const Cube& a, const Cube& b) { return a.encoding(n) < b.encoding(n); });
    return out;
}

inline BoolExpr cube_to_expr(const Cube& c, const std::vector<VarId>& inputs) {
    const std::size_t n = inputs.size();
    std::vector<SignedLit> lits;
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint32_t bit = 1u << (n - 1 - i);
        if (c.care & bit) lits.push_back(SignedLit::of(inputs[i], !(c.value & bit)));
    }
    if (lits.empty()) return BoolExpr::constant(true);
    return BoolExpr::conj_lits(lits);
}

// Or of ands with the fewest product terms; constant tables become constants.
inline BoolExpr minimize_cover(const BoolExpr& t) {
    if (t.kind != BoolExpr::Kind::Table) throw InvalidArgument("minimize_cover expects a table node");
    const auto rows = true_rows(t);
    if (rows.empty()) return BoolExpr::constant(false);
    if (rows.size() == t.rows.size()) return BoolExpr::constant(true);
    std::vector<BoolExpr> terms;
    for (const auto& c : minimum_cover(rows, t.inputs.size())) terms.push_back(cube_to_expr(c, t.inputs));
    return BoolExpr::disj(std::move(terms));
}

// Replaces every table node inside e by its minimized cover.
inline BoolExpr minimize_tables(const BoolExpr& e) {
    if (e.kind == BoolExpr::Kind::Table) return minimize_cover(e);
    if (e.kind == BoolExpr::Kind::Lit) return e;
    BoolExpr out = e;
    for (auto& k : out.kids) k = minimize_tables(k);
    return out;
}

inline std::vector<std::uint32_t> sbox_output_minterms(int box, int out_bit) {
    std::vector<std::uint32_t> rows;
    const auto& sb = sbox(box);
    for (std::uint32_t in = 0; in < 64; ++in) {
        const auto v = sbox_lookup(sb, BitBlock(6, in));
        if (v.bit(out_bit)) rows.push_back(in);
    }
    return rows;
}

// Minimized covers of the 32 S-box output functions, computed once. Cubes are
// over the six S-box inputs, input 1 first.
inline const std::vector<Cube>& sbox_output_cover(int box, int out_bit) {
    static const auto covers = [] {
        std::vector<std::vector<Cube>> c(32);
        for (int b = 1; b <= 8; ++b)
            for (int o = 1; o <= 4; ++o) c[(b - 1) * 4 + (o - 1)] = minimum_cover(sbox_output_minterms(b, o), 6);
        return c;
    }();
    if (box < 1 || box > 8 || out_bit < 1 || out_bit > 4) throw InvalidArgument("S-box output out of range");
    return covers[(box - 1) * 4 + (out_bit - 1)];
}

} // namespace lpdes
