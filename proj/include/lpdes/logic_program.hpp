#pragma once

// Ground normal logic programs and the stable model semantics.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <initializer_list>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lpdes/errors.hpp"

namespace lpdes {

using AtomId = std::uint32_t;
using AtomSet = std::set<AtomId>;

// Renders name(arg1,...,argk); a bare name when there are no arguments.
inline std::string atom_text(std::string_view name, std::initializer_list<long> args = {}) {
    std::string s(name);
    if (args.size() == 0) return s;
    s.push_back('(');
    bool first = true;
    for (long a : args) {
        if (!first) s.push_back(',');
        s += std::to_string(a);
        first = false;
    }
    s.push_back(')');
    return s;
}

// Name of the complement atom used by choice rules: a -> a_hat, key(3) -> key_hat(3).
inline std::string complement_name(std::string_view text) {
    const auto paren = text.find('(');
    if (paren == std::string_view::npos) return std::string(text) + "_hat";
    return std::string(text.substr(0, paren)) + "_hat" + std::string(text.substr(paren));
}

class AtomTable {
public:
    AtomId intern(std::string_view text) {
        auto it = index_.find(std::string(text));
        if (it != index_.end()) return it->second;
        const auto id = static_cast<AtomId>(names_.size());
        names_.emplace_back(text);
        index_.emplace(names_.back(), id);
        return id;
    }

    std::optional<AtomId> find(std::string_view text) const {
        auto it = index_.find(std::string(text));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& name(AtomId id) const { return names_.at(id); }
    std::size_t size() const noexcept { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, AtomId> index_;
};

struct Rule {
    std::optional<AtomId> head;   // nullopt: integrity constraint
    std::vector<AtomId> pos;
    std::vector<AtomId> neg;

    bool is_constraint() const noexcept { return !head.has_value(); }
    bool is_fact() const noexcept { return head && pos.empty() && neg.empty(); }

    friend bool operator==(const Rule&, const Rule&) = default;
};

class Program {
public:
    Program() = default;
    explicit Program(AtomTable atoms) : atoms_(std::move(atoms)) {}

    AtomId atom(std::string_view text) { return atoms_.intern(text); }
    std::optional<AtomId> find_atom(std::string_view text) const { return atoms_.find(text); }
    const std::string& atom_name(AtomId id) const { return atoms_.name(id); }
    std::size_t atom_count() const noexcept { return atoms_.size(); }
    const AtomTable& atoms() const noexcept { return atoms_; }

    const std::vector<Rule>& rules() const noexcept { return rules_; }
    std::size_t size() const noexcept { return rules_.size(); }

    // Returns false when an identical rule (up to body order) is already present.
    bool add_rule(Rule r) {
        for (AtomId a : r.pos)
            if (std::find(r.neg.begin(), r.neg.end(), a) != r.neg.end())
                throw InvalidArgument("atom '" + atoms_.name(a) +
                                      "' occurs both positively and negatively in one body");
        auto check = [&](AtomId a) {
            if (a >= atoms_.size()) throw InvalidArgument("rule references unknown atom id");
        };
        if (r.head) check(*r.head);
        for (AtomId a : r.pos) check(a);
        for (AtomId a : r.neg) check(a);
        if (!seen_.insert(normalized_key(r)).second) return false;
        rules_.push_back(std::move(r));
        return true;
    }

    bool add_rule(std::optional<AtomId> head, std::vector<AtomId> pos, std::vector<AtomId> neg = {}) {
        return add_rule(Rule{head, std::move(pos), std::move(neg)});
    }
    bool add_fact(AtomId head) { return add_rule(Rule{head, {}, {}}); }
    bool add_constraint(std::vector<AtomId> pos, std::vector<AtomId> neg = {}) {
        return add_rule(Rule{std::nullopt, std::move(pos), std::move(neg)});
    }

    bool has_constraints() const {
        return std::any_of(rules_.begin(), rules_.end(), [](const Rule& r) { return r.is_constraint(); });
    }

    // Appends every rule of `other`, re-interning its atoms by name.
    void append(const Program& other) {
        std::vector<AtomId> remap(other.atom_count());
        for (AtomId a = 0; a < other.atom_count(); ++a) remap[a] = atom(other.atom_name(a));
        for (const auto& r : other.rules()) {
            Rule n;
            if (r.head) n.head = remap[*r.head];
            for (AtomId a : r.pos) n.pos.push_back(remap[a]);
            for (AtomId a : r.neg) n.neg.push_back(remap[a]);
            add_rule(std::move(n));
        }
    }

private:
    static std::string normalized_key(const Rule& r) {
        std::vector<AtomId> p = r.pos, n = r.neg;
        std::sort(p.begin(), p.end());
        p.erase(std::unique(p.begin(), p.end()), p.end());
        std::sort(n.begin(), n.end());
        n.erase(std::unique(n.begin(), n.end()), n.end());
        std::string k = r.head ? std::to_string(*r.head) : std::string("-");
        k.push_back(':');
        for (AtomId a : p) { k += std::to_string(a); k.push_back(','); }
        k.push_back('|');
        for (AtomId a : n) { k += std::to_string(a); k.push_back(','); }
        return k;
    }

    AtomTable atoms_;
    std::vector<Rule> rules_;
    std::unordered_set<std::string> seen_;
};

inline std::vector<bool> membership(const AtomSet& s, std::size_t n) {
    std::vector<bool> m(n, false);
    for (AtomId a : s) {
        if (a >= n) throw InvalidArgument("atom id outside program");
        m[a] = true;
    }
    return m;
}

// Drops every rule with a negative literal over s and strips the negative
// literals of the others. Constraints are treated the same way.
inline Program reduct(const Program& p, const AtomSet& s) {
    const auto in = membership(s, p.atom_count());
    Program out(p.atoms());
    for (const auto& r : p.rules()) {
        if (std::any_of(r.neg.begin(), r.neg.end(), [&](AtomId a) { return in[a]; })) continue;
        out.add_rule(Rule{r.head, r.pos, {}});
    }
    return out;
}

namespace detail {

// Forward chaining over the headed rules accepted by `use`; negative bodies
// are ignored, so callers filter them first.
template <class Accept>
std::vector<bool> forward_chain(const Program& p, Accept use) {
    const std::size_t n = p.atom_count();
    std::vector<bool> model(n, false);
    std::vector<std::vector<std::size_t>> watchers(n);
    std::vector<std::size_t> missing(p.size(), 0);
    std::deque<AtomId> queue;
    auto derive = [&](AtomId a) {
        if (!model[a]) { model[a] = true; queue.push_back(a); }
    };
    for (std::size_t i = 0; i < p.size(); ++i) {
        const auto& r = p.rules()[i];
        if (!r.head || !use(r)) continue;
        std::vector<AtomId> body = r.pos;
        std::sort(body.begin(), body.end());
        body.erase(std::unique(body.begin(), body.end()), body.end());
        missing[i] = body.size();
        for (AtomId a : body) watchers[a].push_back(i);
        if (body.empty()) derive(*r.head);
    }
    while (!queue.empty()) {
        const AtomId a = queue.front();
        queue.pop_front();
        for (std::size_t i : watchers[a])
            if (--missing[i] == 0) derive(*p.rules()[i].head);
    }
    return model;
}

} // namespace detail

// Least model of a definite program. Constraints derive nothing and are skipped.
inline AtomSet least_model(const Program& p) {
    for (const auto& r : p.rules())
        if (!r.neg.empty()) throw NotDefinite("least_model requires a program without negative literals");
    const auto m = detail::forward_chain(p, [](const Rule&) { return true; });
    AtomSet out;
    for (AtomId a = 0; a < m.size(); ++a)
        if (m[a]) out.insert(a);
    return out;
}

inline bool is_stable_model(const Program& p, const AtomSet& s) {
    if (!s.empty() && *s.rbegin() >= p.atom_count()) return false;
    const auto in = membership(s, p.atom_count());
    auto applicable = [&](const Rule& r) {
        return std::none_of(r.neg.begin(), r.neg.end(), [&](AtomId a) { return in[a]; });
    };
    const auto lm = detail::forward_chain(p, applicable);
    if (lm != in) return false;
    for (const auto& r : p.rules()) {
        if (!r.is_constraint()) continue;
        const bool body = applicable(r) &&
                          std::all_of(r.pos.begin(), r.pos.end(), [&](AtomId a) { return in[a]; });
        if (body) return false;
    }
    return true;
}

inline constexpr std::size_t kBruteForceAtomCap = 22;

// Definition-level oracle: tests every subset of the atoms. Models come out
// ordered by their bitmask (atom 0 is the least significant bit).
inline std::vector<AtomSet> enumerate_stable_models_bruteforce(const Program& p,
                                                               std::size_t max_atoms = kBruteForceAtomCap) {
    const std::size_t n = p.atom_count();
    if (n > max_atoms || n > 30)
        throw TooManyAtoms("program has " + std::to_string(n) + " atoms, brute force cap is " +
                           std::to_string(std::min<std::size_t>(max_atoms, 30)));
    struct MaskRule {
        bool constraint;
        std::uint32_t head, pos, neg;
    };
    std::vector<MaskRule> rules;
    for (const auto& r : p.rules()) {
        MaskRule m{r.is_constraint(), r.head ? (1u << *r.head) : 0u, 0u, 0u};
        for (AtomId a : r.pos) m.pos |= 1u << a;
        for (AtomId a : r.neg) m.neg |= 1u << a;
        rules.push_back(m);
    }
    std::vector<AtomSet> out;
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t cand = 0; cand < total; ++cand) {
        const auto s = static_cast<std::uint32_t>(cand);
        std::uint32_t lm = 0;
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& r : rules) {
                if (r.constraint || (r.neg & s) || (r.pos & lm) != r.pos || (lm & r.head)) continue;
                lm |= r.head;
                changed = true;
            }
        }
        if (lm != s) continue;
        const bool violated = std::any_of(rules.begin(), rules.end(), [&](const MaskRule& r) {
            return r.constraint && !(r.neg & s) && (r.pos & s) == r.pos;
        });
        if (violated) continue;
        AtomSet m;
        for (AtomId a = 0; a < n; ++a)
            if (s & (1u << a)) m.insert(a);
        out.push_back(std::move(m));
    }
    return out;
}

// Replaces every integrity constraint `:- B` by `f :- B` and adds
// `f' :- f, not f'`, where f and f' are fresh atoms.
inline Program desugar_constraints(const Program& p) {
    if (!p.has_constraints()) return p;
    Program out(p.atoms());
    std::string fname = "_false";
    while (out.find_atom(fname) || out.find_atom(fname + "_prime")) fname += "_";
    const AtomId f = out.atom(fname);
    const AtomId fp = out.atom(fname + "_prime");
    for (const auto& r : p.rules()) {
        if (r.is_constraint()) out.add_rule(Rule{f, r.pos, r.neg});
        else out.add_rule(r);
    }
    out.add_rule(Rule{fp, {f}, {fp}});
    return out;
}

// Restricts each model to the atoms whose id is below `limit`.
inline std::set<AtomSet> project_models(const std::vector<AtomSet>& models, AtomId limit) {
    std::set<AtomSet> out;
    for (const auto& m : models) {
        AtomSet s;
        for (AtomId a : m)
            if (a < limit) s.insert(a);
        out.insert(std::move(s));
    }
    return out;
}

} // namespace lpdes
