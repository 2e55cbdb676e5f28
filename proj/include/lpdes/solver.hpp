#pragma once

// Stable model search for tight programs. For tight programs the stable
// models are exactly the models of the Clark completion, so the engine works
// on the completion clauses: unit propagation over them covers forward
// firing, "no applicable rule left" and backward support reasoning.
//
// Search: lookahead decisions over choice atoms, failed-literal detection,
// and conflict analysis that backjumps to the level of the first-UIP clause
// (or backtracks chronologically when backjumping is switched off). Derived
// clauses live only as reasons of the literal they assert.

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "lpdes/logic_program.hpp"
#include "lpdes/tight.hpp"

namespace lpdes {

enum class Truth : std::int8_t { False = 0, True = 1, Unknown = 2 };

struct Literal {
    AtomId atom = 0;
    bool positive = true;
};

struct SolverConfig {
    bool backjumping = true;
    bool lookahead = true;
    bool failed_literals = false;     // assert the complement of a literal whose probe fails
    std::uint64_t max_branches = 1'000'000;
    double time_limit_s = 600.0;
    bool verify = false;              // check every model with is_stable_model
    std::ostream* trace = nullptr;    // one line per decision and conflict
};

struct SearchStats {
    std::uint64_t branches = 0;       // heuristic decisions only
    std::uint64_t conflicts = 0;
    std::uint64_t propagations = 0;   // literals assigned by propagation, lookahead included
    std::uint64_t failed_literals = 0;
    std::uint64_t models = 0;
    double wall_time_s = 0.0;
};

struct SolveResult {
    bool satisfiable = false;
    AtomSet model;
    SearchStats stats;
};

struct Conflict {
    std::vector<AtomId> atoms;   // atoms of the falsified completion clause
    std::string what;
};

struct PropagationResult {
    std::vector<Truth> values;
    std::optional<Conflict> conflict;
};

namespace detail {

using Lit = std::uint32_t;   // 2*var + (negative ? 1 : 0)

inline Lit make_lit(std::uint32_t var, bool negative) { return 2 * var + (negative ? 1u : 0u); }
inline std::uint32_t var_of(Lit l) { return l >> 1; }

class Engine {
public:
    Engine(const Program& p, SolverConfig cfg) : prog_(p), cfg_(cfg) {
        const auto t = check_tight(p);
        if (!t.tight) {
            std::string c;
            for (AtomId a : t.cycle) c += (c.empty() ? "" : " -> ") + p.atom_name(a);
            throw TightnessRequired("solver needs a tight program; positive cycle " + c);
        }
        compile();
    }

    const SearchStats& stats() const noexcept { return stats_; }

    bool assume(const std::vector<Literal>& lits) {
        for (const auto& l : lits) {
            if (l.atom >= atoms_) throw InvalidArgument("assumption on unknown atom");
            if (!enqueue_unit(make_lit(l.atom, !l.positive))) return false;
        }
        return true;
    }

    // Finds the next model; false when none is left.
    bool search() {
        if (unsat_) return false;
        for (;;) {
            auto conflict = propagate();
            while (conflict) {
                ++stats_.conflicts;
                trace_conflict(*conflict);
                if (decision_level() == 0) {
                    unsat_ = true;
                    return false;
                }
                resolve_conflict(*conflict);
                conflict = propagate();
            }
            if (trail_.size() == nvars_) return true;
            check_limits();
            auto pick = select();
            if (!pick) continue;   // lookahead asserted failed literals; propagate again
            ++stats_.branches;
            if (cfg_.trace)
                *cfg_.trace << "decide " << ((*pick & 1) ? "not " : "") << prog_.atom_name(var_of(*pick))
                            << " @" << decision_level() + 1 << '\n';
            new_level();
            assign(*pick, Reason{});
        }
    }

    AtomSet model() const {
        AtomSet m;
        for (std::uint32_t v = 0; v < atoms_; ++v)
            if (var_value(v) == 1) m.insert(v);
        return m;
    }

    // Excludes the current model: no later model agrees with all decisions.
    bool block_model() {
        std::vector<Lit> clause;
        for (Lit l : trail_)
            if (level_[var_of(l)] > 0 && reasons_[var_of(l)].kind == Reason::None) clause.push_back(l ^ 1u);
        backtrack(0);
        if (clause.empty()) {
            unsat_ = true;
            return false;
        }
        return add_clause_now(std::move(clause));
    }

    // Level-0 propagation for the public propagate().
    PropagationResult propagate_only(const std::vector<Truth>& given) {
        PropagationResult res;
        std::optional<std::vector<Lit>> conflict;
        if (unsat_) conflict = std::vector<Lit>{};
        for (std::uint32_t v = 0; v < given.size() && v < atoms_ && !conflict; ++v) {
            if (given[v] == Truth::Unknown) continue;
            if (!enqueue_unit(make_lit(v, given[v] == Truth::False))) conflict = std::vector<Lit>{make_lit(v, false)};
        }
        if (!conflict) conflict = propagate();
        res.values.assign(atoms_, Truth::Unknown);
        for (std::uint32_t v = 0; v < atoms_; ++v)
            if (var_value(v) >= 0) res.values[v] = var_value(v) ? Truth::True : Truth::False;
        if (conflict) {
            Conflict c;
            for (Lit l : *conflict)
                if (var_of(l) < atoms_) c.atoms.push_back(var_of(l));
            std::sort(c.atoms.begin(), c.atoms.end());
            c.atoms.erase(std::unique(c.atoms.begin(), c.atoms.end()), c.atoms.end());
            c.what = "propagation conflict";
            for (AtomId a : c.atoms) c.what += " " + prog_.atom_name(a);
            res.conflict = std::move(c);
        }
        return res;
    }

    void start_clock() { start_ = std::chrono::steady_clock::now(); }
    void stop_clock() {
        stats_.wall_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    struct Reason {
        enum Kind : std::uint8_t { None, Binary, Long, Derived } kind = None;
        std::uint32_t data = 0;
    };
    struct ClauseRef {
        std::uint32_t start, size;
    };

    std::size_t decision_level() const { return trail_lim_.size(); }

    int var_value(std::uint32_t v) const { return lit_vals_[make_lit(v, false)]; }

    int value(Lit l) const {
        return lit_vals_[l];
    }

    void assign(Lit l, Reason r) {
        const auto v = var_of(l);
        lit_vals_[l] = 1;
        lit_vals_[l ^ 1u] = 0;
        level_[v] = static_cast<std::uint32_t>(decision_level());
        reasons_[v] = r;
        trail_.push_back(l);
    }

    void new_level() { trail_lim_.push_back(trail_.size()); }

    void backtrack(std::size_t level) {
        if (decision_level() <= level) return;
        const std::size_t keep = trail_lim_[level];
        for (std::size_t i = trail_.size(); i-- > keep;) {
            const Lit l = trail_[i];
            lit_vals_[l] = lit_vals_[l ^ 1u] = -1;
        }
        trail_.resize(keep);
        trail_lim_.resize(level);
        qhead_ = std::min(qhead_, trail_.size());
    }

    bool enqueue_unit(Lit l) {
        const int v = value(l);
        if (v == 1) return true;
        if (v == 0) {
            unsat_ = true;
            return false;
        }
        assign(l, Reason{});
        return true;
    }

    void add_clause_init(std::vector<Lit> c) {
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        for (std::size_t i = 0; i + 1 < c.size(); ++i)
            if ((c[i] ^ 1u) == c[i + 1]) return;   // tautology
        if (c.empty()) {
            unsat_ = true;
        } else if (c.size() == 1) {
            units_.push_back(c[0]);
        } else if (c.size() == 2) {
            bins_[c[0]].push_back(c[1]);
            bins_[c[1]].push_back(c[0]);
        } else {
            attach_long(c);
        }
    }

    void attach_long(const std::vector<Lit>& c) {
        const auto idx = static_cast<std::uint32_t>(clauses_.size());
        clauses_.push_back(ClauseRef{static_cast<std::uint32_t>(arena_.size()), static_cast<std::uint32_t>(c.size())});
        arena_.insert(arena_.end(), c.begin(), c.end());
        watches_[c[0]].push_back({idx, c[1]});
        watches_[c[1]].push_back({idx, c[0]});
    }

    // Adds a clause at decision level 0 during search.
    bool add_clause_now(std::vector<Lit> c) {
        std::vector<Lit> open;
        for (Lit l : c) {
            const int v = value(l);
            if (v == 1) return true;
            if (v < 0 && std::find(open.begin(), open.end(), l) == open.end()) open.push_back(l);
        }
        if (open.empty()) {
            unsat_ = true;
            return false;
        }
        if (open.size() == 1) return enqueue_unit(open[0]);
        if (open.size() == 2) {
            bins_[open[0]].push_back(open[1]);
            bins_[open[1]].push_back(open[0]);
        } else {
            attach_long(open);
        }
        return true;
    }

    void compile() {
        atoms_ = static_cast<std::uint32_t>(prog_.atom_count());
        std::map<std::vector<Lit>, std::uint32_t> body_var;
        std::vector<std::vector<Lit>> support(atoms_);
        std::vector<bool> fact(atoms_, false);
        std::vector<std::vector<Lit>> pending;
        std::uint32_t next_var = atoms_;
        std::map<AtomId, AtomId> only_neg;   // head -> b for rules `head :- not b.`
        std::vector<int> rule_count(atoms_, 0);
        for (const auto& r : prog_.rules()) {
            std::vector<Lit> body;
            for (AtomId a : r.pos) body.push_back(make_lit(a, false));
            for (AtomId a : r.neg) body.push_back(make_lit(a, true));
            std::sort(body.begin(), body.end());
            body.erase(std::unique(body.begin(), body.end()), body.end());
            if (!r.head) {
                std::vector<Lit> c;
                for (Lit l : body) c.push_back(l ^ 1u);
                pending.push_back(std::move(c));
                continue;
            }
            const AtomId h = *r.head;
            ++rule_count[h];
            const Lit head = make_lit(h, false);
            if (r.pos.empty() && r.neg.size() == 1) only_neg[h] = r.neg[0];
            if (body.empty()) {
                fact[h] = true;
                pending.push_back({head});
                continue;
            }
            Lit b;
            if (body.size() == 1) {
                b = body[0];
            } else {
                auto [it, fresh] = body_var.try_emplace(body, 0);
                if (fresh) {
                    it->second = next_var++;
                    const Lit bl = make_lit(it->second, false);
                    std::vector<Lit> back{bl};
                    for (Lit l : body) {
                        pending.push_back({bl ^ 1u, l});
                        back.push_back(l ^ 1u);
                    }
                    pending.push_back(std::move(back));
                }
                b = make_lit(it->second, false);
            }
            pending.push_back({head, b ^ 1u});
            support[h].push_back(b);
        }
        for (AtomId a = 0; a < atoms_; ++a) {
            if (fact[a]) continue;
            std::vector<Lit> c{make_lit(a, true)};
            c.insert(c.end(), support[a].begin(), support[a].end());
            pending.push_back(std::move(c));
        }
        nvars_ = next_var;
        lit_vals_.assign(2 * static_cast<std::size_t>(nvars_), -1);
        level_.assign(nvars_, 0);
        reasons_.assign(nvars_, Reason{});
        derived_.assign(nvars_, {});
        seen_.assign(nvars_, 0);
        bins_.assign(2 * nvars_, {});
        watches_.assign(2 * nvars_, {});
        for (auto& c : pending) add_clause_init(std::move(c));
        for (Lit u : units_)
            if (!enqueue_unit(u)) break;

        // choice pairs a :- not b.  b :- not a.
        for (const auto& [a, b] : only_neg) {
            auto it = only_neg.find(b);
            if (it != only_neg.end() && it->second == a && a < b) choice_atoms_.push_back(a);
        }
        std::sort(choice_atoms_.begin(), choice_atoms_.end());
    }

    // Returns the falsified clause on conflict.
    std::optional<std::vector<Lit>> propagate() {
        while (qhead_ < trail_.size()) {
            const Lit f = trail_[qhead_++] ^ 1u;   // literal that just became false
            for (Lit q : bins_[f]) {
                const int v = value(q);
                if (v == 0) return std::vector<Lit>{f, q};
                if (v < 0) {
                    assign(q, Reason{Reason::Binary, f});
                    ++stats_.propagations;
                }
            }
            auto& ws = watches_[f];
            std::size_t i = 0, j = 0;
            while (i < ws.size()) {
                const Watch w = ws[i++];
                if (value(w.blocker) == 1) {
                    ws[j++] = w;
                    continue;
                }
                Lit* c = &arena_[clauses_[w.clause].start];
                const std::uint32_t n = clauses_[w.clause].size;
                if (c[0] == f) std::swap(c[0], c[1]);
                if (value(c[0]) == 1) {
                    ws[j++] = {w.clause, c[0]};
                    continue;
                }
                bool moved = false;
                for (std::uint32_t k = 2; k < n; ++k)
                    if (value(c[k]) != 0) {
                        std::swap(c[1], c[k]);
                        watches_[c[1]].push_back({w.clause, c[0]});
                        moved = true;
                        break;
                    }
                if (moved) continue;
                ws[j++] = {w.clause, c[0]};
                if (value(c[0]) == 0) {
                    while (i < ws.size()) ws[j++] = ws[i++];
                    ws.resize(j);
                    return std::vector<Lit>(c, c + n);
                }
                assign(c[0], Reason{Reason::Long, w.clause});
                ++stats_.propagations;
            }
            ws.resize(j);
        }
        return std::nullopt;
    }

    void reason_lits(std::uint32_t v, std::vector<Lit>& out) const {
        const Reason r = reasons_[v];
        switch (r.kind) {
        case Reason::None: break;
        case Reason::Binary: out.push_back(r.data); break;
        case Reason::Long: {
            const auto& cr = clauses_[r.data];
            for (std::uint32_t k = 0; k < cr.size; ++k)
                if (var_of(arena_[cr.start + k]) != v) out.push_back(arena_[cr.start + k]);
            break;
        }
        case Reason::Derived:
            for (Lit l : derived_[v])
                if (var_of(l) != v) out.push_back(l);
            break;
        }
    }

    // Derives a clause from the conflict whose only literal at the current
    // level is the first UIP, or the decision itself when `to_decision`.
    std::vector<Lit> analyze(const std::vector<Lit>& conflict, bool to_decision) {
        const auto cur = static_cast<std::uint32_t>(decision_level());
        std::vector<Lit> learnt{0};
        std::vector<Lit> clause = conflict;
        std::vector<std::uint32_t> touched;
        int path = 0;
        std::size_t idx = trail_.size();
        std::optional<std::uint32_t> pvar;
        for (;;) {
            for (Lit q : clause) {
                const auto v = var_of(q);
                if (pvar && v == *pvar) continue;
                if (seen_[v] || level_[v] == 0) continue;
                seen_[v] = 1;
                touched.push_back(v);
                if (level_[v] >= cur) ++path;
                else learnt.push_back(q);
            }
            do {
                --idx;
            } while (!seen_[var_of(trail_[idx])]);
            const Lit p = trail_[idx];
            pvar = var_of(p);
            seen_[*pvar] = 0;
            --path;
            if (path == 0 && (!to_decision || reasons_[*pvar].kind == Reason::None)) {
                learnt[0] = p ^ 1u;
                break;
            }
            clause.clear();
            reason_lits(*pvar, clause);
        }
        for (auto v : touched) seen_[v] = 0;
        return learnt;
    }

    void resolve_conflict(const std::vector<Lit>& conflict) {
        auto learnt = analyze(conflict, !cfg_.backjumping);
        std::size_t target = decision_level() - 1;
        if (cfg_.backjumping) {
            target = 0;
            for (std::size_t k = 1; k < learnt.size(); ++k)
                target = std::max<std::size_t>(target, level_[var_of(learnt[k])]);
        }
        backtrack(target);
        assert_derived(std::move(learnt));
    }

    void assert_derived(std::vector<Lit> clause) {
        const Lit l = clause[0];
        const auto v = var_of(l);
        derived_[v] = std::move(clause);
        assign(l, decision_level() == 0 && derived_[v].size() == 1 ? Reason{} : Reason{Reason::Derived, 0});
    }

    // Number of literals propagated by l, or nullopt if l fails; a failing
    // literal's complement is asserted before returning.
    std::optional<std::size_t> probe(Lit l) {
        const std::size_t before = trail_.size();
        new_level();
        assign(l, Reason{});
        auto conflict = propagate();
        if (!conflict || !cfg_.failed_literals) {
            const std::size_t gained = trail_.size() - before;
            backtrack(decision_level() - 1);
            return gained;
        }
        ++stats_.failed_literals;
        auto learnt = analyze(*conflict, true);
        backtrack(decision_level() - 1);
        if (cfg_.trace)
            *cfg_.trace << "failed " << ((l & 1) ? "not " : "") << prog_.atom_name(var_of(l)) << '\n';
        assert_derived(std::move(learnt));
        return std::nullopt;
    }

    // Decision literal, or nullopt after asserting failed literals (the
    // caller propagates and asks again).
    std::optional<Lit> select() {
        std::vector<std::uint32_t> cands;
        for (AtomId a : choice_atoms_)
            if (var_value(a) < 0) cands.push_back(a);
        if (cands.empty())
            for (std::uint32_t v = 0; v < nvars_; ++v)
                if (var_value(v) < 0) {
                    cands.push_back(v);
                    if (v >= atoms_ || !cfg_.lookahead) break;
                }
        if (!cfg_.lookahead) return make_lit(cands.front(), false);

        std::optional<Lit> best;
        std::pair<std::size_t, std::size_t> best_score{0, 0};
        for (auto v : cands) {
            if (var_value(v) >= 0) continue;
            const auto pos = probe(make_lit(v, false));
            if (!pos) return std::nullopt;
            const auto neg = probe(make_lit(v, true));
            if (!neg) return std::nullopt;
            const std::pair<std::size_t, std::size_t> score{std::min(*pos, *neg), std::max(*pos, *neg)};
            if (!best || score > best_score) {
                best_score = score;
                best = make_lit(v, *neg > *pos);
            }
        }
        return best;
    }

    void check_limits() {
        if (stats_.branches >= cfg_.max_branches)
            throw ResourceLimitExceeded("branch limit of " + std::to_string(cfg_.max_branches) + " reached");
        const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
        if (t > cfg_.time_limit_s)
            throw ResourceLimitExceeded("time limit of " + std::to_string(cfg_.time_limit_s) + " s reached");
    }

    void trace_conflict(const std::vector<Lit>& c) {
        if (!cfg_.trace) return;
        *cfg_.trace << "conflict @" << decision_level() << " size " << c.size() << '\n';
    }

    const Program& prog_;
    SolverConfig cfg_;
    SearchStats stats_;
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();

    std::uint32_t atoms_ = 0, nvars_ = 0;
    bool unsat_ = false;
    std::vector<Lit> units_;
    std::vector<std::int8_t> lit_vals_;   // per literal: 1 true, 0 false, -1 open
    std::vector<std::uint32_t> level_;
    std::vector<Reason> reasons_;
    std::vector<std::vector<Lit>> derived_;
    std::vector<char> seen_;
    std::vector<Lit> trail_;
    std::vector<std::size_t> trail_lim_;
    std::size_t qhead_ = 0;
    std::vector<std::vector<Lit>> bins_;
    struct Watch {
        std::uint32_t clause;
        Lit blocker;   // another literal of the clause; true means nothing to do
    };
    std::vector<std::vector<Watch>> watches_;
    std::vector<ClauseRef> clauses_;
    std::vector<Lit> arena_;
    std::vector<AtomId> choice_atoms_;
};

inline void verify_model(const Program& p, const AtomSet& m) {
    if (!is_stable_model(p, m)) throw Error("solver returned a set that is not a stable model");
}

} // namespace detail

inline SolveResult solve(const Program& p, const std::vector<Literal>& assumptions = {}, SolverConfig cfg = {}) {
    detail::Engine e(p, cfg);
    e.start_clock();
    SolveResult r;
    if (e.assume(assumptions) && e.search()) {
        r.satisfiable = true;
        r.model = e.model();
        if (cfg.verify) detail::verify_model(p, r.model);
    }
    e.stop_clock();
    r.stats = e.stats();
    r.stats.models = r.satisfiable ? 1 : 0;
    return r;
}

struct EnumerateResult {
    std::vector<AtomSet> models;
    SearchStats stats;
};

inline EnumerateResult enumerate_with_stats(const Program& p, std::size_t limit = 0,
                                            const std::vector<Literal>& assumptions = {}, SolverConfig cfg = {}) {
    detail::Engine e(p, cfg);
    e.start_clock();
    EnumerateResult r;
    if (e.assume(assumptions)) {
        while (e.search()) {
            r.models.push_back(e.model());
            if (cfg.verify) detail::verify_model(p, r.models.back());
            if (limit && r.models.size() >= limit) break;
            if (!e.block_model()) break;
        }
    }
    e.stop_clock();
    r.stats = e.stats();
    r.stats.models = r.models.size();
    return r;
}

// Up to `limit` distinct stable models; 0 means all of them.
inline std::vector<AtomSet> enumerate(const Program& p, std::size_t limit = 0, SolverConfig cfg = {}) {
    return enumerate_with_stats(p, limit, {}, cfg).models;
}

// Closes `given` under propagation at decision level 0.
inline PropagationResult propagate(const Program& p, const std::vector<Truth>& given = {}) {
    detail::Engine e(p, SolverConfig{});
    return e.propagate_only(given);
}

} // namespace lpdes
