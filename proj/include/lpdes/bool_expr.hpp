#pragma once

// Boolean expressions and equivalence sets, the intermediate form of the
// optimized encoding.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lpdes/errors.hpp"

namespace lpdes {

using VarId = std::uint32_t;

// A variable with a sign, or one of the constants 0 and 1.
struct SignedLit {
    VarId var = 0;
    bool negative = false;
    bool is_const = false;
    bool value = false;   // meaningful only for constants

    static SignedLit pos(VarId v) { return {v, false, false, false}; }
    static SignedLit neg(VarId v) { return {v, true, false, false}; }
    static SignedLit of(VarId v, bool negative) { return {v, negative, false, false}; }
    static SignedLit constant(bool b) { return {0, false, true, b}; }

    SignedLit operator~() const {
        if (is_const) return constant(!value);
        return of(var, !negative);
    }
    SignedLit with_sign(bool flip) const { return flip ? ~*this : *this; }

    friend bool operator==(const SignedLit& a, const SignedLit& b) {
        if (a.is_const || b.is_const) return a.is_const == b.is_const && a.value == b.value;
        return a.var == b.var && a.negative == b.negative;
    }
    friend bool operator<(const SignedLit& a, const SignedLit& b) { return a.key() < b.key(); }

    std::uint64_t key() const {
        return is_const ? (value ? 1u : 0u) : (std::uint64_t{var} + 1) * 2 + (negative ? 1 : 0);
    }
};

struct BoolExpr {
    enum class Kind : std::uint8_t { Lit, Not, And, Or, Xor, Table };

    Kind kind = Kind::Lit;
    SignedLit lit = SignedLit::constant(false);
    std::vector<BoolExpr> kids;
    // Table nodes: rows[r] is the value when inputs[0] is the most significant bit of r.
    std::vector<VarId> inputs;
    std::vector<bool> rows;

    static BoolExpr literal(SignedLit l) {
        BoolExpr e;
        e.lit = l;
        return e;
    }
    static BoolExpr var(VarId v) { return literal(SignedLit::pos(v)); }
    static BoolExpr constant(bool b) { return literal(SignedLit::constant(b)); }

    static BoolExpr negation(BoolExpr k) {
        BoolExpr e;
        e.kind = Kind::Not;
        e.kids.push_back(std::move(k));
        return e;
    }
    static BoolExpr conj(std::vector<BoolExpr> ks) { return nary(Kind::And, std::move(ks)); }
    static BoolExpr disj(std::vector<BoolExpr> ks) { return nary(Kind::Or, std::move(ks)); }
    static BoolExpr conj_lits(const std::vector<SignedLit>& ls) { return conj(lift(ls)); }
    static BoolExpr disj_lits(const std::vector<SignedLit>& ls) { return disj(lift(ls)); }

    static BoolExpr exclusive(BoolExpr a, BoolExpr b) {
        BoolExpr e;
        e.kind = Kind::Xor;
        e.kids.push_back(std::move(a));
        e.kids.push_back(std::move(b));
        return e;
    }

    // x1 ⊕ (x2 ⊕ (... ⊕ xn))
    static BoolExpr exclusive_all(std::vector<BoolExpr> ks) {
        if (ks.empty()) return constant(false);
        BoolExpr acc = std::move(ks.back());
        for (std::size_t i = ks.size() - 1; i-- > 0;) acc = exclusive(std::move(ks[i]), std::move(acc));
        return acc;
    }

    static BoolExpr table(std::vector<VarId> inputs, std::vector<bool> rows) {
        if (inputs.size() > 8) throw InvalidArgument("table nodes take at most 8 inputs");
        if (rows.size() != (std::size_t{1} << inputs.size()))
            throw InvalidArgument("table needs 2^n rows");
        BoolExpr e;
        e.kind = Kind::Table;
        e.inputs = std::move(inputs);
        e.rows = std::move(rows);
        return e;
    }

    bool is_lit() const noexcept { return kind == Kind::Lit; }
    bool is_const() const noexcept { return kind == Kind::Lit && lit.is_const; }
    bool is_var_lit() const noexcept { return kind == Kind::Lit && !lit.is_const; }

    friend bool operator==(const BoolExpr& a, const BoolExpr& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == Kind::Lit) return a.lit == b.lit;
        return a.kids == b.kids && a.inputs == b.inputs && a.rows == b.rows;
    }

private:
    static BoolExpr nary(Kind k, std::vector<BoolExpr> ks) {
        if (ks.empty()) throw InvalidArgument("and/or need at least one operand");
        BoolExpr e;
        e.kind = k;
        e.kids = std::move(ks);
        return e;
    }
    static std::vector<BoolExpr> lift(const std::vector<SignedLit>& ls) {
        std::vector<BoolExpr> ks;
        ks.reserve(ls.size());
        for (auto l : ls) ks.push_back(literal(l));
        return ks;
    }
};

class VarTable {
public:
    VarId intern(std::string_view name) {
        auto it = index_.find(std::string(name));
        if (it != index_.end()) return it->second;
        const auto id = static_cast<VarId>(names_.size());
        names_.emplace_back(name);
        index_.emplace(names_.back(), id);
        return id;
    }
    std::optional<VarId> find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    const std::string& name(VarId v) const { return names_.at(v); }
    std::size_t size() const noexcept { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, VarId> index_;
};

struct Definition {
    SignedLit lhs;
    BoolExpr rhs;

    friend bool operator==(const Definition&, const Definition&) = default;
};

// A conjunction of equivalences. Variables removed by substitution are kept
// in `aliases` so their values can be reconstructed from a solution.
struct EquivSet {
    VarTable vars;
    std::vector<Definition> defs;
    std::set<VarId> free_vars;
    std::map<VarId, SignedLit> aliases;

    VarId var(std::string_view name) { return vars.intern(name); }

    void define(SignedLit lhs, BoolExpr rhs) { defs.push_back(Definition{lhs, std::move(rhs)}); }
    void define(VarId lhs, BoolExpr rhs) { define(SignedLit::pos(lhs), std::move(rhs)); }

    // Follows the alias chain of a literal to a surviving variable or a constant.
    SignedLit resolve(SignedLit l) const {
        for (int guard = 0; !l.is_const; ++guard) {
            auto it = aliases.find(l.var);
            if (it == aliases.end()) break;
            if (guard > static_cast<int>(aliases.size())) throw Error("alias cycle");
            l = it->second.with_sign(l.negative);
        }
        return l;
    }
};

// Values indexed by variable id: 0, 1, or -1 for unassigned.
using Valuation = std::vector<std::int8_t>;

inline bool eval(const SignedLit& l, std::span<const std::int8_t> v) {
    if (l.is_const) return l.value;
    if (l.var >= v.size() || v[l.var] < 0)
        throw UnassignedVariable("variable " + std::to_string(l.var) + " has no value");
    return (v[l.var] != 0) != l.negative;
}

inline bool eval(const BoolExpr& e, std::span<const std::int8_t> v) {
    using K = BoolExpr::Kind;
    switch (e.kind) {
    case K::Lit: return eval(e.lit, v);
    case K::Not: return !eval(e.kids[0], v);
    case K::And:
        for (const auto& k : e.kids)
            if (!eval(k, v)) return false;
        return true;
    case K::Or:
        for (const auto& k : e.kids)
            if (eval(k, v)) return true;
        return false;
    case K::Xor: return eval(e.kids[0], v) != eval(e.kids[1], v);
    case K::Table: {
        std::size_t row = 0;
        for (VarId in : e.inputs) row = (row << 1) | (eval(SignedLit::pos(in), v) ? 1u : 0u);
        return e.rows[row];
    }
    }
    return false;
}

inline bool satisfies(const EquivSet& es, std::span<const std::int8_t> v) {
    return std::all_of(es.defs.begin(), es.defs.end(),
                       [&](const Definition& d) { return eval(d.lhs, v) == eval(d.rhs, v); });
}

inline void collect_vars(const BoolExpr& e, std::set<VarId>& out) {
    if (e.kind == BoolExpr::Kind::Lit) {
        if (!e.lit.is_const) out.insert(e.lit.var);
        return;
    }
    for (VarId v : e.inputs) out.insert(v);
    for (const auto& k : e.kids) collect_vars(k, out);
}

inline std::set<VarId> vars_of(const EquivSet& es) {
    std::set<VarId> out(es.free_vars.begin(), es.free_vars.end());
    for (const auto& d : es.defs) {
        if (!d.lhs.is_const) out.insert(d.lhs.var);
        collect_vars(d.rhs, out);
    }
    return out;
}

inline std::size_t expr_size(const BoolExpr& e) {
    std::size_t n = 1 + e.inputs.size();
    for (const auto& k : e.kids) n += expr_size(k);
    return n;
}

inline bool contains_table(const BoolExpr& e) {
    if (e.kind == BoolExpr::Kind::Table) return true;
    return std::any_of(e.kids.begin(), e.kids.end(), [](const BoolExpr& k) { return contains_table(k); });
}

// One conjunct per true row; the all-false table becomes the constant 0.
inline BoolExpr table_to_dnf(const BoolExpr& t) {
    if (t.kind != BoolExpr::Kind::Table) throw InvalidArgument("table_to_dnf expects a table node");
    const std::size_t n = t.inputs.size();
    std::vector<BoolExpr> terms;
    for (std::size_t row = 0; row < t.rows.size(); ++row) {
        if (!t.rows[row]) continue;
        if (n == 0) return BoolExpr::constant(true);
        std::vector<SignedLit> lits;
        for (std::size_t i = 0; i < n; ++i) {
            const bool one = (row >> (n - 1 - i)) & 1u;
            lits.push_back(SignedLit::of(t.inputs[i], !one));
        }
        terms.push_back(BoolExpr::conj_lits(lits));
    }
    if (terms.empty()) return BoolExpr::constant(false);
    return BoolExpr::disj(std::move(terms));
}

inline std::string to_text(const SignedLit& l, const VarTable& vars) {
    if (l.is_const) return l.value ? "1" : "0";
    return (l.negative ? "-" : "") + vars.name(l.var);
}

inline std::string to_text(const BoolExpr& e, const VarTable& vars) {
    using K = BoolExpr::Kind;
    auto join = [&](std::string_view op) {
        std::string s = "(";
        for (std::size_t i = 0; i < e.kids.size(); ++i) {
            if (i) s += op;
            s += to_text(e.kids[i], vars);
        }
        return s + ")";
    };
    switch (e.kind) {
    case K::Lit: return to_text(e.lit, vars);
    case K::Not: return "not " + to_text(e.kids[0], vars);
    case K::And: return join(" & ");
    case K::Or: return join(" | ");
    case K::Xor: return join(" ^ ");
    case K::Table: {
        std::string s = "table(";
        for (std::size_t i = 0; i < e.inputs.size(); ++i) s += (i ? "," : "") + vars.name(e.inputs[i]);
        s += ";";
        for (bool b : e.rows) s.push_back(b ? '1' : '0');
        return s + ")";
    }
    }
    return {};
}

// Debug dump, one `lhs <-> rhs.` line per definition.
inline std::string dump(const EquivSet& es) {
    std::ostringstream os;
    for (const auto& d : es.defs) os << to_text(d.lhs, es.vars) << " <-> " << to_text(d.rhs, es.vars) << ".\n";
    if (!es.free_vars.empty()) {
        os << "% free:";
        for (VarId v : es.free_vars) os << ' ' << es.vars.name(v);
        os << '\n';
    }
    return os.str();
}

} // namespace lpdes
