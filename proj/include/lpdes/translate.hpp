#pragma once

// Boolean expressions and equivalence sets to normal programs, and tight
// programs to CNF by completion.

#include <algorithm>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "lpdes/bool_expr.hpp"
#include "lpdes/cnf.hpp"
#include "lpdes/logic_program.hpp"
#include "lpdes/tight.hpp"

namespace lpdes {

class VarAtomMap {
public:
    void bind(VarId v, AtomId a) {
        atom_of_[v] = a;
        var_of_[a] = v;
    }
    void bind_complement(AtomId a, AtomId hat) { complement_[a] = hat; }

    bool has(VarId v) const { return atom_of_.count(v) != 0; }
    AtomId atom(VarId v) const {
        auto it = atom_of_.find(v);
        if (it == atom_of_.end()) throw InvalidArgument("variable " + std::to_string(v) + " has no atom");
        return it->second;
    }
    std::optional<VarId> var(AtomId a) const {
        auto it = var_of_.find(a);
        if (it == var_of_.end()) return std::nullopt;
        return it->second;
    }
    std::optional<AtomId> complement(AtomId a) const {
        auto it = complement_.find(a);
        if (it == complement_.end()) return std::nullopt;
        return it->second;
    }
    const std::map<VarId, AtomId>& vars() const noexcept { return atom_of_; }
    const std::map<AtomId, AtomId>& complements() const noexcept { return complement_; }

private:
    std::map<VarId, AtomId> atom_of_;
    std::unordered_map<AtomId, VarId> var_of_;
    std::map<AtomId, AtomId> complement_;
};

// name(args) with `suffix` attached to the name part: x(1,2) -> x__dup2(1,2).
inline std::string decorate(std::string_view atom, std::string_view suffix) {
    const auto paren = atom.find('(');
    if (paren == std::string_view::npos) return std::string(atom) + std::string(suffix);
    return std::string(atom.substr(0, paren)) + std::string(suffix) + std::string(atom.substr(paren));
}

inline AtomId fresh_atom(Program& prog, std::string_view base, std::string_view tag, int& counter) {
    for (;;) {
        std::string name = decorate(base, std::string(tag) + std::to_string(counter++));
        if (!prog.find_atom(name)) return prog.atom(name);
    }
}

namespace detail {

class RuleBuilder {
public:
    RuleBuilder(Program& prog, const VarAtomMap& map, AtomId target)
        : prog_(prog), map_(map), base_(prog.atom_name(target)) {}

    void define(AtomId head, const BoolExpr& e) {
        for (const auto& body : bodies(e)) emit(head, body);
    }

    std::vector<Rule> take() { return std::move(out_); }

private:
    struct Operand {
        enum Kind : std::uint8_t { True, False, Atom } kind = True;
        AtomId atom = 0;
        bool positive = true;

        Operand operator~() const {
            if (kind == True) return {False};
            if (kind == False) return {True};
            return {Atom, atom, !positive};
        }
    };

    Operand operand(const BoolExpr& e) {
        using K = BoolExpr::Kind;
        switch (e.kind) {
        case K::Lit:
            if (e.lit.is_const) return {e.lit.value ? Operand::True : Operand::False};
            return {Operand::Atom, map_.atom(e.lit.var), !e.lit.negative};
        case K::Not: return ~operand(e.kids[0]);   // negated subexpressions need no atom of their own
        case K::Table: throw MustMinimizeFirst("table nodes must be converted before translation");
        default: {
            const AtomId q = fresh_atom(prog_, base_, "__sub", counter_);
            define(q, e);
            return {Operand::Atom, q, true};
        }
        }
    }

    std::vector<std::vector<Operand>> bodies(const BoolExpr& e) {
        using K = BoolExpr::Kind;
        switch (e.kind) {
        case K::Lit:
        case K::Not: return {{operand(e)}};
        case K::And: {
            std::vector<Operand> body;
            for (const auto& k : e.kids) body.push_back(operand(k));
            return {body};
        }
        case K::Or: {
            std::vector<std::vector<Operand>> out;
            for (const auto& k : e.kids) {
                if (k.kind != K::And) {
                    out.push_back({operand(k)});
                    continue;
                }
                std::vector<Operand> body;
                for (const auto& kk : k.kids) body.push_back(operand(kk));
                out.push_back(std::move(body));
            }
            return out;
        }
        case K::Xor: {
            const Operand a = operand(e.kids[0]);
            const Operand b = operand(e.kids[1]);
            return {{a, ~b}, {~a, b}};
        }
        case K::Table: throw MustMinimizeFirst("table nodes must be converted before translation");
        }
        return {};
    }

    void emit(AtomId head, const std::vector<Operand>& body) {
        Rule r{head, {}, {}};
        for (const auto& o : body) {
            if (o.kind == Operand::False) return;
            if (o.kind == Operand::True) continue;
            auto& side = o.positive ? r.pos : r.neg;
            if (std::find(side.begin(), side.end(), o.atom) == side.end()) side.push_back(o.atom);
        }
        for (AtomId a : r.pos)
            if (std::find(r.neg.begin(), r.neg.end(), a) != r.neg.end()) return;   // body can never hold
        out_.push_back(std::move(r));
    }

    Program& prog_;
    const VarAtomMap& map_;
    std::string base_;
    int counter_ = 1;
    std::vector<Rule> out_;
};

} // namespace detail

// Rules making `target` equivalent to e. Fresh atoms for non-literal
// subexpressions are interned into prog as target__sub<i>.
inline std::vector<Rule> expr_rules(Program& prog, AtomId target, const BoolExpr& e, const VarAtomMap& map) {
    detail::RuleBuilder b(prog, map, target);
    b.define(target, e);
    return b.take();
}

inline std::vector<Rule> choice_rules(AtomId a, AtomId hat) {
    return {Rule{a, {}, {hat}}, Rule{hat, {}, {a}}};
}

inline Rule force(AtomId a, bool value) {
    return value ? Rule{std::nullopt, {}, {a}} : Rule{std::nullopt, {a}, {}};
}

inline void add_rules(Program& p, const std::vector<Rule>& rules) {
    for (const auto& r : rules) p.add_rule(r);
}

struct Translation {
    Program program;
    VarAtomMap map;
};

namespace detail {

// Index (into es.defs) of the definition used as the defining rule set for
// each variable. The first definition is taken unless it would close a
// cycle among chosen definitions; a variable whose definitions all do stays
// without one and is guessed by a choice pair instead.
inline std::map<VarId, std::size_t> choose_primary(const EquivSet& es) {
    std::map<VarId, std::vector<std::size_t>> by_var;
    for (std::size_t i = 0; i < es.defs.size(); ++i)
        if (!es.defs[i].lhs.is_const) by_var[es.defs[i].lhs.var].push_back(i);

    std::map<VarId, std::size_t> pick;       // var -> position in by_var list
    std::vector<std::set<VarId>> deps(es.defs.size());
    for (std::size_t i = 0; i < es.defs.size(); ++i) collect_vars(es.defs[i].rhs, deps[i]);
    for (auto& [v, list] : by_var) pick[v] = 0;

    auto primary_of = [&](VarId v) -> std::optional<std::size_t> {
        auto it = pick.find(v);
        if (it == pick.end() || it->second >= by_var[v].size()) return std::nullopt;
        return by_var[v][it->second];
    };

    // Finds a variable on a cycle of chosen definitions.
    auto find_cycle = [&]() -> std::optional<VarId> {
        std::map<VarId, int> colour;
        for (auto& [root, _] : by_var) {
            if (colour[root]) continue;
            std::vector<std::pair<VarId, std::vector<VarId>>> stack;
            auto push = [&](VarId v) {
                colour[v] = 1;
                std::vector<VarId> succ;
                if (auto d = primary_of(v))
                    for (VarId u : deps[*d])
                        if (by_var.count(u)) succ.push_back(u);
                stack.push_back({v, std::move(succ)});
            };
            push(root);
            while (!stack.empty()) {
                auto& top = stack.back();
                if (top.second.empty()) {
                    colour[top.first] = 2;
                    stack.pop_back();
                    continue;
                }
                const VarId u = top.second.back();
                top.second.pop_back();
                if (colour[u] == 1) {
                    // largest definition index on the cycle
                    VarId worst = u;
                    bool on = false;
                    for (auto& f : stack) {
                        if (f.first == u) on = true;
                        if (on && *primary_of(f.first) > *primary_of(worst)) worst = f.first;
                    }
                    return worst;
                }
                if (!colour[u]) push(u);
            }
        }
        return std::nullopt;
    };

    while (auto v = find_cycle()) ++pick[*v];

    std::map<VarId, std::size_t> out;
    for (auto& [v, _] : by_var)
        if (auto d = primary_of(v)) out[v] = *d;
    return out;
}

} // namespace detail

// Program whose stable models correspond one-to-one to the satisfying
// assignments of es. Extra definitions of a variable a get their own atom
// a__dup<i> tied to a by `:- a, not a__dup<i>` and `:- a__dup<i>, not a`.
inline Translation translate_equivset(const EquivSet& es) {
    Translation t;
    Program& prog = t.program;
    for (VarId v : vars_of(es)) t.map.bind(v, prog.atom(es.vars.name(v)));

    const auto primary = detail::choose_primary(es);
    std::map<VarId, int> seen_defs;
    int goal_counter = 1;
    for (std::size_t i = 0; i < es.defs.size(); ++i) {
        const auto& d = es.defs[i];
        if (d.lhs.is_const) {
            const bool c = d.lhs.value;
            const auto& e = d.rhs;
            if (e.is_const()) {
                if (e.lit.value != c) throw InconsistentInstance("constant definition 0 <-> 1");
                continue;
            }
            // c <-> e  is enforced through an atom for e (or the variable itself).
            AtomId g;
            bool value = c;
            if (e.is_var_lit()) {
                g = t.map.atom(e.lit.var);
                value = c != e.lit.negative;
            } else if (e.kind == BoolExpr::Kind::Not && e.kids[0].is_var_lit()) {
                g = t.map.atom(e.kids[0].lit.var);
                value = c == e.kids[0].lit.negative;
            } else {
                g = fresh_atom(prog, "_goal", "", goal_counter);
                add_rules(prog, expr_rules(prog, g, e, t.map));
            }
            prog.add_rule(force(g, value));
            continue;
        }
        const VarId v = d.lhs.var;
        const AtomId a = t.map.atom(v);
        const int number = ++seen_defs[v];
        auto it = primary.find(v);
        if (it != primary.end() && it->second == i) {
            BoolExpr rhs = d.rhs;
            if (d.lhs.negative) {
                // -a <-> A ^ B  is  a <-> -A ^ B
                if (rhs.kind == BoolExpr::Kind::Xor) {
                    auto& k = rhs.kids[0];
                    k = k.is_lit() ? BoolExpr::literal(~k.lit)
                        : k.kind == BoolExpr::Kind::Not ? BoolExpr(k.kids[0])
                                                        : BoolExpr::negation(k);
                } else {
                    rhs = BoolExpr::negation(rhs);
                }
            }
            add_rules(prog, expr_rules(prog, a, rhs, t.map));
            continue;
        }
        const AtomId ai = prog.atom(decorate(prog.atom_name(a), "__dup" + std::to_string(number)));
        add_rules(prog, expr_rules(prog, ai, d.rhs, t.map));
        if (!d.lhs.negative) {
            prog.add_constraint({a}, {ai});
            prog.add_constraint({ai}, {a});
        } else {
            prog.add_constraint({a, ai}, {});
            prog.add_constraint({}, {a, ai});
        }
    }

    // Everything without a defining rule set is guessed.
    for (const auto& [v, a] : t.map.vars()) {
        if (primary.count(v)) continue;
        const AtomId hat = prog.atom(complement_name(prog.atom_name(a)));
        t.map.bind_complement(a, hat);
        add_rules(prog, choice_rules(a, hat));
    }
    return t;
}

// Clark completion. Variable i+1 is atom i; bodies with more than one
// literal get an auxiliary variable. Atoms without rules are fixed false.
inline CnfFormula completion(const Program& p) {
    const auto tight = check_tight(p);
    if (!tight.tight) {
        std::string c;
        for (AtomId a : tight.cycle) c += (c.empty() ? "" : " -> ") + p.atom_name(a);
        throw TightnessRequired("completion needs a tight program; positive cycle " + c);
    }
    CnfFormula f;
    f.num_vars = static_cast<int>(p.atom_count());
    for (AtomId a = 0; a < p.atom_count(); ++a) f.names[static_cast<int>(a) + 1] = p.atom_name(a);

    std::map<std::vector<int>, int> body_var;
    std::vector<std::vector<int>> support(p.atom_count());
    std::vector<bool> has_fact(p.atom_count(), false);
    for (const auto& r : p.rules()) {
        std::vector<int> lits;
        for (AtomId a : r.pos) lits.push_back(static_cast<int>(a) + 1);
        for (AtomId a : r.neg) lits.push_back(-(static_cast<int>(a) + 1));
        std::sort(lits.begin(), lits.end());
        lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
        if (!r.head) {
            Clause c;
            for (int l : lits) c.push_back(-l);
            f.add_clause(std::move(c));
            continue;
        }
        const int head = static_cast<int>(*r.head) + 1;
        if (lits.empty()) {
            has_fact[*r.head] = true;
            f.add_clause({head});
            continue;
        }
        int body;
        if (lits.size() == 1) {
            body = lits[0];
        } else {
            auto [it, fresh] = body_var.try_emplace(lits, 0);
            if (fresh) {
                it->second = f.new_var();
                for (int l : lits) f.add_clause({-it->second, l});
                Clause c{it->second};
                for (int l : lits) c.push_back(-l);
                f.add_clause(std::move(c));
            }
            body = it->second;
        }
        f.add_clause({head, -body});
        support[*r.head].push_back(body);
    }
    for (AtomId a = 0; a < p.atom_count(); ++a) {
        if (has_fact[a]) continue;
        Clause c{-(static_cast<int>(a) + 1)};
        for (int b : support[a]) c.push_back(b);
        f.add_clause(std::move(c));
    }
    return f;
}

} // namespace lpdes
