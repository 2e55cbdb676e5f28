// Acceptance suite: one PASS/FAIL line per criterion. Tolerances and seeds
// are fixed here. Run with criterion numbers as arguments to select a subset.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "lpdes.hpp"
#include "support/cdcl_count.hpp"
#include "support/dpll.hpp"
#include "support/random_circuits.hpp"
#include "support/util.hpp"

using namespace lpdes;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void fail(const std::string& why) {
        pass = false;
        detail << "[" << why << "] ";
    }
    void check(bool ok, const std::string& why) {
        if (!ok) fail(why);
    }
};

// ---- 1 -------------------------------------------------------------------

void cipher_fidelity(Outcome& o) {
    constexpr double kBudget = 1.0;
    struct V {
        const char *pt, *key, *ct;
    };
    const V vectors[] = {
        {"0123456789ABCDEF", "133457799BBCDFF1", "85E813540F0AB405"},
        {"8787878787878787", "0E329232EA6D0D73", "0000000000000000"},
        {"95F8A5E5DD31D900", "0101010101010101", "8000000000000000"},
        {"0000000000000000", "10316E028C8F3B4A", "82DCBAFBDEAB6602"},
        {"4E6F772069732074", "0123456789ABCDEF", "3FA40E8A984D4815"},
    };
    const auto t0 = Clock::now();
    int matched = 0;
    for (const auto& v : vectors) {
        const auto pt = BitBlock::from_hex(v.pt), key = BitBlock::from_hex(v.key);
        const bool ok = encrypt(pt, key, 16).to_hex() == v.ct && decrypt(BitBlock::from_hex(v.ct), key, 16) == pt;
        o.check(ok, std::string("vector ") + v.pt);
        matched += ok;
    }
    SplitMix64 g(2024);
    int trips = 0;
    for (int i = 0; i < 1000; ++i) {
        const BitBlock pt(64, g.next()), key(64, g.next());
        trips += decrypt(encrypt(pt, key, 16), key, 16) == pt;
    }
    o.check(trips == 1000, "round trips failed");
    const double t = seconds_since(t0);
    o.check(t < kBudget, "runtime over 1 s");
    o.detail << matched << "/5 vectors, " << trips << "/1000 round trips, " << t << " s";
}

// ---- 2 -------------------------------------------------------------------

void paper_examples(Outcome& o) {
    using testutil::named;
    using testutil::NamedModels;
    const std::string four = "p :- not q, r.\nq :- not p.\nr :- not s.\ns :- not p.\n";
    auto both = [&](const Program& p) {
        const auto a = named(p, enumerate_stable_models_bruteforce(p));
        const auto b = named(p, enumerate(p));
        if (a != b) o.fail("solver and brute force disagree");
        return a;
    };
    const Program ex1 = parse_program(four);
    o.check(both(ex1) == NamedModels{{"r", "p"}, {"s", "q"}}, "four-rule program");
    const Program ex2 = parse_program(four + ":- not p, s.\n:- r, not q, s.\n");
    o.check(both(ex2) == NamedModels{{"r", "p"}}, "with constraints");

    EquivSet es;
    const auto a = es.var("a"), b = es.var("b"), p1 = es.var("p1"), p2 = es.var("p2"), p3 = es.var("p3");
    es.define(p1, BoolExpr::conj_lits({SignedLit::pos(p2), SignedLit::pos(p3)}));
    es.define(p2, BoolExpr::disj_lits({SignedLit::pos(a), SignedLit::neg(b)}));
    es.define(p3, BoolExpr::exclusive(BoolExpr::literal(SignedLit::neg(a)), BoolExpr::var(b)));
    Translation t = translate_equivset(es);
    t.program.add_rule(force(*t.program.find_atom("p1"), true));
    o.check(both(t.program) == NamedModels{{"a", "b", "p1", "p2", "p3"}, {"a_hat", "b_hat", "p1", "p2", "p3"}},
            "equivalence example");

    Program tp;
    VarAtomMap map;
    for (VarId v = 0; v < 3; ++v) map.bind(v, tp.atom("x" + std::to_string(v + 1)));
    const AtomId f = tp.atom("f");
    const auto table = BoolExpr::table({0, 1, 2}, {true, false, true, false, false, false, true, false});
    add_rules(tp, expr_rules(tp, f, table_to_dnf(table), map));
    Program printed = parse_program("f :- not x1, not x2, not x3.\nf :- not x1, x2, not x3.\nf :- x1, x2, not x3.\n");
    std::set<std::string> got, want;
    auto canon = [](const Program& p, std::set<std::string>& out) {
        for (const auto& r : p.rules()) {
            std::set<std::string> lits;
            for (auto x : r.pos) lits.insert(p.atom_name(x));
            for (auto x : r.neg) lits.insert("not " + p.atom_name(x));
            std::string s = p.atom_name(*r.head) + " :-";
            for (const auto& l : lits) s += " " + l;
            out.insert(s);
        }
    };
    canon(tp, got);
    canon(printed, want);
    o.check(tp.size() == 3 && got == want, "truth table rules");
    o.detail << "4 examples checked";
}

// ---- 3 -------------------------------------------------------------------

// Stable models of a program whose only guessed atoms are the choice pairs
// of `vars`: every guess is closed under the rules (the rest is acyclic) and
// then checked against the definition.
std::vector<AtomSet> guess_and_check(const Program& p, const std::vector<std::pair<AtomId, AtomId>>& pairs) {
    std::vector<AtomSet> out;
    const std::size_t n = pairs.size();
    for (std::uint32_t m = 0; m < (1u << n); ++m) {
        AtomSet s;
        for (std::size_t i = 0; i < n; ++i) s.insert((m >> i) & 1 ? pairs[i].first : pairs[i].second);
        for (std::size_t it = 0; it <= p.atom_count(); ++it) {
            AtomSet next;
            for (const auto& r : p.rules()) {
                if (!r.head) continue;
                const bool body = std::all_of(r.pos.begin(), r.pos.end(), [&](AtomId x) { return s.count(x) > 0; }) &&
                                  std::none_of(r.neg.begin(), r.neg.end(), [&](AtomId x) { return s.count(x) > 0; });
                if (body) next.insert(*r.head);
            }
            if (next == s) break;
            s = std::move(next);
        }
        if (is_stable_model(p, s)) out.push_back(s);
    }
    return out;
}

void translation_correspondence(Outcome& o) {
    constexpr int kFormulas = 200;
    constexpr double kBudget = 60.0;
    const auto t0 = Clock::now();
    std::mt19937_64 g(3003);
    int agreed = 0;
    for (int i = 0; i < kFormulas; ++i) {
        const int vars = 1 + static_cast<int>(g() % 8);
        const BoolExpr phi = testutil::random_expr(g, vars, 4);
        Program p;
        VarAtomMap map;
        std::vector<std::pair<AtomId, AtomId>> pairs;
        for (int v = 0; v < vars; ++v) {
            const AtomId a = p.atom("v" + std::to_string(v));
            map.bind(static_cast<VarId>(v), a);
        }
        for (int v = 0; v < vars; ++v) {
            const AtomId a = map.atom(static_cast<VarId>(v));
            const AtomId h = p.atom(complement_name(p.atom_name(a)));
            add_rules(p, choice_rules(a, h));
            pairs.push_back({a, h});
        }
        const AtomId goal = p.atom("phi");
        add_rules(p, expr_rules(p, goal, phi, map));
        p.add_rule(force(goal, true));

        std::set<std::vector<std::int8_t>> sat;
        for (std::uint32_t m = 0; m < (1u << vars); ++m) {
            Valuation val(vars);
            for (int v = 0; v < vars; ++v) val[v] = (m >> v) & 1;
            if (eval(phi, val)) sat.insert(val);
        }
        auto project = [&](const std::vector<AtomSet>& models) {
            std::set<std::vector<std::int8_t>> out;
            for (const auto& m : models) {
                Valuation val(vars);
                for (int v = 0; v < vars; ++v) val[v] = m.count(map.atom(static_cast<VarId>(v))) ? 1 : 0;
                out.insert(val);
            }
            return out;
        };
        const auto checked = guess_and_check(p, pairs);
        std::vector<AtomSet> solver = enumerate(p);
        bool ok = checked.size() == sat.size() && project(checked) == sat && solver.size() == sat.size() &&
                  project(solver) == sat;
        if (ok && p.atom_count() <= kBruteForceAtomCap)
            ok = enumerate_stable_models_bruteforce(p).size() == sat.size();
        agreed += ok;
        if (!ok) o.fail("formula " + std::to_string(i));
    }
    const double t = seconds_since(t0);
    o.check(t < kBudget, "runtime over 60 s");
    o.detail << agreed << "/" << kFormulas << " formulas, " << t << " s";
}

// ---- 4 -------------------------------------------------------------------

void encryption_soundness(Outcome& o) {
    constexpr double kBudget = 300.0;
    const auto t0 = Clock::now();
    SplitMix64 g(404);
    int good = 0, total = 0;
    for (int rounds = 1; rounds <= 16; ++rounds)
        for (int i = 0; i < 5; ++i) {
            ++total;
            DirectInstance d;
            d.rounds = rounds;
            d.mode = DirectMode::Encrypt;
            d.key = BitBlock(64, g.next());
            d.plaintexts = {BitBlock(64, g.next())};
            const Program p = instantiate(d);
            const auto res = enumerate_with_stats(p, 2);
            const bool ok = res.models.size() == 1 && res.stats.branches == 0 &&
                            cipher_from_model(p, res.models[0], 1) == encrypt(d.plaintexts[0], *d.key, rounds);
            good += ok;
            if (!ok) o.fail("rounds " + std::to_string(rounds) + " instance " + std::to_string(i));
        }
    const double t = seconds_since(t0);
    o.check(t < kBudget, "runtime over 5 min");
    o.detail << good << "/" << total << " instances unique, exact, 0 branches; " << t << " s";
}

// ---- 5 -------------------------------------------------------------------

void direct_attack(Outcome& o) {
    constexpr std::uint64_t kMasterSeed = 42;
    constexpr int kTrials = 10;
    constexpr double kMaxTrialSeconds = 60.0;
    constexpr double kBranchFactor = 50.0;
    const std::map<std::pair<int, int>, double> reference = {
        {{1, 1}, 155}, {{1, 2}, 372}, {{1, 4}, 179}, {{1, 8}, 200},
        {{2, 1}, 151}, {{2, 2}, 98},  {{2, 4}, 51},  {{2, 8}, 39},
    };
    for (const auto& [rb, ref] : reference) {
        const auto [rounds, blocks] = rb;
        const auto rep = benchmark(rounds, blocks, kTrials, Encoding::Direct, kMasterSeed);
        double worst = 0;
        for (const auto& t : rep.trials) worst = std::max(worst, t.time_s + t.preprocess_s);
        const std::string tag = "r" + std::to_string(rounds) + "b" + std::to_string(blocks);
        o.check(rep.success_rate == 1.0, tag + " success " + std::to_string(rep.success_rate));
        o.check(worst <= kMaxTrialSeconds, tag + " trial over 60 s");
        o.check(rep.mean_branches >= ref / kBranchFactor && rep.mean_branches <= ref * kBranchFactor,
                tag + " branches outside 50x band");
        o.detail << tag << ": " << rep.mean_branches << " br (ref " << ref << "), max " << worst << " s; ";
    }
}

// ---- 6 -------------------------------------------------------------------

std::set<std::string> enumerate_keys(const Program& p, const std::function<BitBlock(const AtomSet&)>& key_of) {
    std::set<std::string> out;
    for (const auto& m : enumerate(p)) out.insert(key_of(m).to_hex());
    return out;
}

void optimized_agreement(Outcome& o) {
    constexpr std::uint64_t kMasterSeed = 42;
    constexpr int kTrials = 5;
    constexpr double kThreeRoundCapSeconds = 600.0;
    constexpr int kFreeKeyBits = 16;
    SolverConfig cfg;
    cfg.time_limit_s = kThreeRoundCapSeconds;
    cfg.max_branches = ~std::uint64_t{0};   // the time cap governs here
    for (int rounds = 1; rounds <= 3; ++rounds)
        for (int blocks = 1; blocks <= 2; ++blocks) {
            const auto rep = benchmark(rounds, blocks, kTrials, Encoding::Optimized, kMasterSeed, 1, cfg);
            double worst = 0;
            for (const auto& t : rep.trials) worst = std::max(worst, t.time_s);
            const std::string tag = "r" + std::to_string(rounds) + "b" + std::to_string(blocks);
            o.check(rep.success_rate == 1.0, tag + " success " + std::to_string(rep.success_rate));
            o.detail << tag << " " << static_cast<int>(rep.success_rate * kTrials) << "/" << kTrials << " (max "
                     << worst << " s); ";
        }
    // restricted variant: all but 16 key bits fixed to the hidden key
    for (int rounds = 1; rounds <= 3; ++rounds) {
        const auto inst = gen_instance(rounds, 1, trial_seed(kMasterSeed, 100 + rounds));
        std::map<int, bool> fixed;
        const auto positions = effective_key_positions();
        for (std::size_t i = kFreeKeyBits; i < positions.size(); ++i) fixed[positions[i]] = inst.hidden_key.bit(positions[i]);
        auto d = direct_attack_instance(inst);
        d.fixed_key_bits = fixed;
        const Program dp = instantiate(d);
        const auto direct_keys = enumerate_keys(dp, [&](const AtomSet& m) { return key_from_model(dp, m); });
        auto oi = optimized_attack_instance(inst);
        oi.fixed_key_bits = fixed;
        const EquivSet es = optimized_equivalences(oi);
        const Translation t = emit_program(es);
        const auto opt_keys = enumerate_keys(t.program, [&](const AtomSet& m) { return key_from_optimized_model(es, t, m); });
        bool valid = true;
        for (const auto& k : direct_keys) valid = valid && key_matches(inst, BitBlock::from_hex(k));
        const std::string tag = "restricted r" + std::to_string(rounds);
        o.check(!direct_keys.empty() && valid, tag + " direct keys invalid");
        o.check(direct_keys == opt_keys, tag + " key sets differ");
        o.detail << tag << ": " << direct_keys.size() << " keys both ways; ";
    }
}

// ---- 7 -------------------------------------------------------------------

void solver_oracle(Outcome& o) {
    constexpr int kPrograms = 500;
    constexpr double kBudget = 120.0;
    const auto t0 = Clock::now();
    std::mt19937_64 g(7007);
    int agreed = 0;
    std::size_t models = 0;
    for (int i = 0; i < kPrograms; ++i) {
        const int atoms = 1 + static_cast<int>(g() % 12);
        const Program p = testutil::random_program(g, atoms, 1 + static_cast<int>(g() % 20), true);
        const auto oracle = enumerate_stable_models_bruteforce(p);
        const auto found = enumerate(p);
        const std::set<AtomSet> a(oracle.begin(), oracle.end()), b(found.begin(), found.end());
        const bool ok = a == b && b.size() == found.size();
        agreed += ok;
        models += oracle.size();
        if (!ok) o.fail("program " + std::to_string(i));
    }
    const double t = seconds_since(t0);
    o.check(t < kBudget, "runtime over 2 min");
    o.detail << agreed << "/" << kPrograms << " programs (" << models << " models), " << t << " s";
}

// ---- 8 -------------------------------------------------------------------

void completion_parity(Outcome& o) {
    constexpr int kPrograms = 100;
    std::mt19937_64 g(8008);
    int agreed = 0;
    for (int i = 0; i < kPrograms; ++i) {
        const int atoms = 1 + static_cast<int>(g() % 16);
        const Program p = testutil::random_program(g, atoms, 1 + static_cast<int>(g() % 24), true);
        const auto cnf = static_cast<std::uint64_t>(testutil::count_models(completion(p)));
        const auto stable = enumerate(p).size();
        agreed += cnf == stable;
        if (cnf != stable) o.fail("program " + std::to_string(i));
    }
    o.detail << agreed << "/" << kPrograms << " random programs; ";
    const auto inst = gen_instance(1, 8, trial_seed(42, 800));
    const Program p = instantiate(direct_attack_instance(inst));
    // thousands of variables: the plain DPLL counter cannot close this one
    const auto cnf = testutil::count_models_cdcl(completion(p));
    const auto models = enumerate(p);
    bool keys_ok = true;
    for (const auto& m : models) keys_ok = keys_ok && key_matches(inst, key_from_model(p, m));
    o.check(cnf == models.size(), "attack instance counts differ");
    o.check(keys_ok, "attack instance key fails re-encryption");
    o.detail << "1-round 8-block attack: " << cnf << " CNF models, " << models.size() << " stable models";
}

// ---- 9 -------------------------------------------------------------------

void simplification_soundness(Outcome& o) {
    constexpr int kSets = 200;
    std::mt19937_64 g(9009);
    int agreed = 0, inconsistent = 0;
    for (int i = 0; i < kSets; ++i) {
        const int vars = 1 + static_cast<int>(g() % 12);
        const EquivSet es = testutil::random_equivset(g, vars, 1 + static_cast<int>(g() % 8), true);
        auto projected = [](const EquivSet& s, const std::vector<VarId>& keep) {
            std::set<std::vector<std::int8_t>> out;
            const std::size_t n = s.vars.size();
            for (std::uint32_t m = 0; m < (1u << n); ++m) {
                Valuation v(n);
                for (std::size_t k = 0; k < n; ++k) v[k] = (m >> k) & 1;
                if (!satisfies(s, v)) continue;
                std::vector<std::int8_t> p;
                for (VarId k : keep) p.push_back(v[k]);
                out.insert(p);
            }
            return out;
        };
        bool ok;
        try {
            const EquivSet s = simplify_to_saturation(es);
            std::vector<VarId> keep;
            for (VarId v = 0; v < es.vars.size(); ++v)
                if (!s.aliases.count(v)) keep.push_back(v);
            ok = projected(es, keep).size() == projected(s, keep).size();
        } catch (const InconsistentInstance&) {
            ++inconsistent;
            ok = projected(es, {}).empty();
        }
        agreed += ok;
        if (!ok) o.fail("set " + std::to_string(i));
    }
    o.detail << agreed << "/" << kSets << " sets (" << inconsistent << " found inconsistent)";
}

} // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
        {"cipher fidelity", cipher_fidelity},
        {"worked examples", paper_examples},
        {"translation correspondence", translation_correspondence},
        {"direct-encoding encryption", encryption_soundness},
        {"direct-encoding attack", direct_attack},
        {"optimized-encoding agreement", optimized_agreement},
        {"solver vs brute force", solver_oracle},
        {"completion parity", completion_parity},
        {"simplification soundness", simplification_soundness},
    };
    std::set<int> only;
    for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const int id = static_cast<int>(i) + 1;
        if (!only.empty() && !only.count(id)) continue;
        Outcome o;
        const auto t0 = Clock::now();
        try {
            criteria[i].second(o);
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        failed += !o.pass;
        std::printf("%s %d %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first.c_str(),
                    o.detail.str().c_str(), seconds_since(t0));
        std::fflush(stdout);
    }
    return failed == 0 ? 0 : 1;
}
