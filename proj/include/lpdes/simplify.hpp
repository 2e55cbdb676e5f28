#pragma once

// Local rewriting of equivalence sets until nothing changes. Atomic
// equivalences (V <-> W, V <-> constant) are turned into substitutions and
// recorded in EquivSet::aliases; the remaining definitions are rewritten by
// the table of local rules below.

#include <algorithm>
#include <set>
#include <vector>

#include "lpdes/bool_expr.hpp"
#include "lpdes/minimize.hpp"

namespace lpdes {

namespace detail {

inline BoolExpr negate_expr(BoolExpr e) {
    if (e.kind == BoolExpr::Kind::Lit) return BoolExpr::literal(~e.lit);
    if (e.kind == BoolExpr::Kind::Not) return std::move(e.kids[0]);
    return BoolExpr::negation(std::move(e));
}

inline BoolExpr substitute(const BoolExpr& e, const EquivSet& es) {
    if (e.kind == BoolExpr::Kind::Lit) return BoolExpr::literal(es.resolve(e.lit));
    // table inputs are bare ids; go through the cover so they can be resolved
    if (e.kind == BoolExpr::Kind::Table) return substitute(minimize_cover(e), es);
    BoolExpr out = e;
    for (auto& k : out.kids) k = substitute(k, es);
    return out;
}

} // namespace detail

// Bottom-up normalization of one expression:
//   X & X -> X, X & -X -> 0, X & 1 -> X, X & 0 -> 0 (and duals for or),
//   nested and/or flattened, not not X -> X,
//   X ^ 0 -> X, X ^ 1 -> -X, X ^ X -> 0, X ^ -X -> 1.
inline BoolExpr simplify_expr(const BoolExpr& e) {
    using K = BoolExpr::Kind;
    switch (e.kind) {
    case K::Lit: return e;
    case K::Table: return simplify_expr(minimize_cover(e));
    case K::Not: return detail::negate_expr(simplify_expr(e.kids[0]));
    case K::Xor: {
        BoolExpr a = simplify_expr(e.kids[0]);
        BoolExpr b = simplify_expr(e.kids[1]);
        if (a.is_const()) return a.lit.value ? detail::negate_expr(std::move(b)) : b;
        if (b.is_const()) return b.lit.value ? detail::negate_expr(std::move(a)) : a;
        if (a == b) return BoolExpr::constant(false);
        if (a == detail::negate_expr(b)) return BoolExpr::constant(true);
        return BoolExpr::exclusive(std::move(a), std::move(b));
    }
    case K::And:
    case K::Or: {
        const bool is_and = e.kind == K::And;
        std::vector<BoolExpr> flat;
        for (const auto& k : e.kids) {
            BoolExpr s = simplify_expr(k);
            if (s.kind == e.kind) {
                for (auto& g : s.kids) flat.push_back(std::move(g));
            } else {
                flat.push_back(std::move(s));
            }
        }
        std::vector<BoolExpr> kept;
        std::set<std::uint64_t> lits;
        for (auto& k : flat) {
            if (k.is_const()) {
                if (k.lit.value != is_and) return BoolExpr::constant(!is_and);   // absorbing element
                continue;                                                         // identity element
            }
            if (k.is_lit()) {
                if (lits.count((~k.lit).key())) return BoolExpr::constant(!is_and);
                if (!lits.insert(k.lit.key()).second) continue;
            } else if (std::find(kept.begin(), kept.end(), k) != kept.end()) {
                continue;
            }
            kept.push_back(std::move(k));
        }
        if (kept.empty()) return BoolExpr::constant(is_and);
        if (kept.size() == 1) return std::move(kept[0]);
        return is_and ? BoolExpr::conj(std::move(kept)) : BoolExpr::disj(std::move(kept));
    }
    }
    return e;
}

namespace detail {

// Moves signs out of a top-level xor and a top-level negation into the lhs.
inline void normalize_signs(SignedLit& lhs, BoolExpr& rhs) {
    if (rhs.kind == BoolExpr::Kind::Not) {
        lhs = ~lhs;
        BoolExpr inner = std::move(rhs.kids[0]);
        rhs = std::move(inner);
    }
    if (rhs.kind == BoolExpr::Kind::Xor) {
        for (auto& k : rhs.kids) {
            if (k.is_var_lit() && k.lit.negative) {
                k.lit = ~k.lit;
                lhs = ~lhs;
            } else if (k.kind == BoolExpr::Kind::Not) {
                BoolExpr inner = std::move(k.kids[0]);
                k = std::move(inner);
                lhs = ~lhs;
            }
        }
    }
}

// Records lhs == l, where both are already resolved. Returns false when the
// pair is trivially equal (nothing to record).
inline bool bind(EquivSet& es, SignedLit lhs, SignedLit l) {
    if (lhs.is_const && l.is_const) {
        if (lhs.value != l.value) throw InconsistentInstance("derived 0 <-> 1");
        return false;
    }
    if (lhs.is_const) std::swap(lhs, l);
    // lhs is a variable here
    if (!l.is_const && l.var == lhs.var) {
        if (l.negative != lhs.negative)
            throw InconsistentInstance("derived " + es.vars.name(lhs.var) + " <-> not " + es.vars.name(lhs.var));
        return false;
    }
    es.aliases[lhs.var] = l.with_sign(lhs.negative);
    return true;
}

} // namespace detail

// One pass over all definitions; returns true when anything changed.
inline bool simplify_pass(EquivSet& es) {
    using K = BoolExpr::Kind;
    std::vector<Definition> work;
    work.swap(es.defs);
    std::vector<Definition> out;
    bool changed = false;
    // Work list in original order; generated definitions are processed right after their source.
    std::vector<Definition> stack(work.rbegin(), work.rend());
    while (!stack.empty()) {
        Definition d = std::move(stack.back());
        stack.pop_back();
        const Definition before = d;
        SignedLit lhs = es.resolve(d.lhs);
        BoolExpr rhs = simplify_expr(detail::substitute(d.rhs, es));
        detail::normalize_signs(lhs, rhs);

        if (rhs.is_lit()) {
            detail::bind(es, lhs, rhs.lit);
            changed = true;
            continue;
        }
        std::vector<Definition> generated;
        if (lhs.is_const) {
            const bool c = lhs.value;
            if (c && rhs.kind == K::And) {
                for (auto& k : rhs.kids) generated.push_back({SignedLit::constant(true), k});
            } else if (!c && rhs.kind == K::Or) {
                for (auto& k : rhs.kids) generated.push_back({SignedLit::constant(false), k});
            } else if (rhs.kind == K::Xor) {
                // c <-> A ^ B  is  A <-> B ^ c
                const int lit_side = rhs.kids[0].is_var_lit() ? 0 : rhs.kids[1].is_var_lit() ? 1 : -1;
                if (lit_side >= 0) {
                    BoolExpr other = rhs.kids[1 - lit_side];
                    generated.push_back({rhs.kids[lit_side].lit, c ? detail::negate_expr(other) : other});
                }
            }
        } else if (rhs.kind == K::Xor) {
            // A <-> A ^ B  gives  0 <-> B;  A <-> -A ^ B  gives  1 <-> B
            for (int side = 0; side < 2 && generated.empty(); ++side) {
                const auto& k = rhs.kids[side];
                if (!k.is_var_lit() || k.lit.var != lhs.var) continue;
                generated.push_back({SignedLit::constant(k.lit.negative != lhs.negative), rhs.kids[1 - side]});
            }
        }
        if (!generated.empty()) {
            changed = true;
            for (auto it = generated.rbegin(); it != generated.rend(); ++it) stack.push_back(std::move(*it));
            continue;
        }
        Definition now{lhs, std::move(rhs)};
        if (!(now == before)) changed = true;
        out.push_back(std::move(now));
    }
    es.defs = std::move(out);
    return changed;
}

// Surviving variables that are used but not defined become free.
inline void refresh_free_vars(EquivSet& es) {
    std::set<VarId> defined, used;
    for (const auto& d : es.defs) {
        if (!d.lhs.is_const) defined.insert(d.lhs.var);
        collect_vars(d.rhs, used);
    }
    std::set<VarId> free;
    for (VarId v : es.free_vars)
        if (!es.aliases.count(v) && !defined.count(v)) free.insert(v);
    for (VarId v : used)
        if (!defined.count(v)) free.insert(v);
    for (const auto& [v, _] : es.aliases) {
        const SignedLit r = es.resolve(SignedLit::pos(v));
        if (!r.is_const && !defined.count(r.var)) free.insert(r.var);
    }
    es.free_vars = std::move(free);
}

inline EquivSet simplify_to_saturation(EquivSet es) {
    while (simplify_pass(es)) {
    }
    refresh_free_vars(es);
    return es;
}

// Value of every variable, eliminated ones included, given values for the
// surviving ones.
inline Valuation extend_valuation(const EquivSet& es, Valuation v) {
    if (v.size() < es.vars.size()) v.resize(es.vars.size(), -1);
    for (const auto& [var, _] : es.aliases) {
        const SignedLit r = es.resolve(SignedLit::pos(var));
        if (r.is_const) v[var] = r.value ? 1 : 0;
        else if (v[r.var] >= 0) v[var] = static_cast<std::int8_t>((v[r.var] != 0) != r.negative);
    }
    return v;
}

} // namespace lpdes
