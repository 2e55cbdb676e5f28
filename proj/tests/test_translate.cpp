#include <gtest/gtest.h>

#include <random>

#include "lpdes/cnf.hpp"
#include "lpdes/logic_program.hpp"
#include "lpdes/program_text.hpp"
#include "lpdes/simplify.hpp"
#include "lpdes/translate.hpp"
#include "support/cdcl_count.hpp"
#include "support/dpll.hpp"
#include "support/random_circuits.hpp"
#include "support/util.hpp"

using namespace lpdes;
using testutil::named;
using testutil::NamedModels;

namespace {

using L = SignedLit;

// Rules as (head, sorted positive body, sorted negative body) over names.
std::set<std::string> canonical_rules(const Program& p) {
    std::set<std::string> out;
    for (const auto& r : p.rules()) {
        std::set<std::string> pos, neg;
        for (auto a : r.pos) pos.insert(p.atom_name(a));
        for (auto a : r.neg) neg.insert("not " + p.atom_name(a));
        std::string s = r.head ? p.atom_name(*r.head) : "";
        s += " :-";
        for (const auto& x : pos) s += " " + x;
        for (const auto& x : neg) s += " " + x;
        out.insert(s);
    }
    return out;
}

// Solutions over the variables the set mentions; the rest of the table is ignored.
std::size_t count_solutions(const EquivSet& es) {
    std::size_t n = 0;
    const auto used = vars_of(es);
    const std::vector<VarId> vars(used.begin(), used.end());
    for (std::uint32_t m = 0; m < (1u << vars.size()); ++m) {
        Valuation v(es.vars.size(), 0);
        for (std::size_t i = 0; i < vars.size(); ++i) v[vars[i]] = (m >> i) & 1;
        n += satisfies(es, v);
    }
    return n;
}

EquivSet example_equivset() {
    EquivSet es;
    const auto a = es.var("a"), b = es.var("b"), p1 = es.var("p1"), p2 = es.var("p2"), p3 = es.var("p3");
    es.define(p1, BoolExpr::conj_lits({L::pos(p2), L::pos(p3)}));
    es.define(p2, BoolExpr::disj_lits({L::pos(a), L::neg(b)}));
    es.define(p3, BoolExpr::exclusive(BoolExpr::literal(L::neg(a)), BoolExpr::var(b)));
    return es;
}

} // namespace

TEST(Translate, EquivalenceExampleRules) {
    const Translation t = translate_equivset(example_equivset());
    EXPECT_EQ(canonical_rules(t.program), (std::set<std::string>{
                                              "p1 :- p2 p3",
                                              "p2 :- a",
                                              "p2 :- not b",
                                              "p3 :- not a not b",
                                              "p3 :- a b",
                                              "a :- not a_hat",
                                              "a_hat :- not a",
                                              "b :- not b_hat",
                                              "b_hat :- not b",
                                          }));
    EXPECT_EQ(t.program.size(), 9u);
}

TEST(Translate, EquivalenceExampleWithGoal) {
    Translation t = translate_equivset(example_equivset());
    t.program.add_rule(force(*t.program.find_atom("p1"), true));
    EXPECT_EQ(named(t.program, enumerate_stable_models_bruteforce(t.program)),
              (NamedModels{{"a", "b", "p1", "p2", "p3"}, {"a_hat", "b_hat", "p1", "p2", "p3"}}));
}

TEST(Translate, TruthTableExample) {
    EquivSet es;
    es.var("x1");
    es.var("x2");
    es.var("x3");
    const auto f = es.var("f");
    Program p;
    VarAtomMap map;
    for (VarId v = 0; v < 4; ++v) map.bind(v, p.atom(es.vars.name(v)));
    const BoolExpr table = BoolExpr::table({0, 1, 2}, {true, false, true, false, false, false, true, false});
    EXPECT_THROW(expr_rules(p, map.atom(f), table, map), MustMinimizeFirst);
    add_rules(p, expr_rules(p, map.atom(f), table_to_dnf(table), map));
    EXPECT_EQ(canonical_rules(p), (std::set<std::string>{
                                      "f :- not x1 not x2 not x3",
                                      "f :- x2 not x1 not x3",
                                      "f :- x1 x2 not x3",
                                  }));
}

TEST(Translate, NestedSubformulasGetAuxiliaryAtoms) {
    Program p;
    VarAtomMap map;
    map.bind(0, p.atom("x"));
    map.bind(1, p.atom("y"));
    map.bind(2, p.atom("z"));
    const AtomId g = p.atom("g");
    // g <-> (x | y) & not (y & z)
    const BoolExpr e = BoolExpr::conj({BoolExpr::disj_lits({L::pos(0), L::pos(1)}),
                                       BoolExpr::negation(BoolExpr::conj_lits({L::pos(1), L::pos(2)}))});
    add_rules(p, expr_rules(p, g, e, map));
    EXPECT_TRUE(p.find_atom("g__sub1"));
    EXPECT_TRUE(p.find_atom("g__sub2"));
    EXPECT_EQ(decorate("m(1,203,2)", "__sub1"), "m__sub1(1,203,2)");
}

TEST(Translate, ChoiceAndForce) {
    Program p;
    const AtomId a = p.atom("a"), h = p.atom("a_hat");
    add_rules(p, choice_rules(a, h));
    EXPECT_EQ(named(p, enumerate_stable_models_bruteforce(p)), (NamedModels{{"a"}, {"a_hat"}}));
    Program q = p;
    q.add_rule(force(a, false));
    EXPECT_EQ(named(q, enumerate_stable_models_bruteforce(q)), (NamedModels{{"a_hat"}}));
    EXPECT_EQ(program_to_text(q), "a :- not a_hat.\na_hat :- not a.\n:- a.\n");
}

TEST(Translate, RepeatedDefinitionsKeepEquivalence) {
    // a <-> x and a <-> y: solutions are x = y = a
    EquivSet es;
    const auto a = es.var("a"), x = es.var("x"), y = es.var("y");
    es.define(a, BoolExpr::var(x));
    es.define(a, BoolExpr::var(y));
    const Translation t = translate_equivset(es);
    EXPECT_EQ(enumerate_stable_models_bruteforce(t.program).size(), 2u);
    // negative left side on the second definition: -a <-> y
    EquivSet neg;
    neg.var("a");
    neg.var("x");
    neg.var("y");
    neg.define(a, BoolExpr::var(x));
    neg.define(L::neg(a), BoolExpr::var(y));
    const Translation tn = translate_equivset(neg);
    EXPECT_EQ(enumerate_stable_models_bruteforce(tn.program).size(), count_solutions(neg));
}

TEST(Translate, CyclicDefinitionsStayTight) {
    // a <-> b & c, b <-> a | c: only one of them can define its atom
    EquivSet es;
    const auto a = es.var("a"), b = es.var("b"), c = es.var("c");
    es.define(a, BoolExpr::conj_lits({L::pos(b), L::pos(c)}));
    es.define(b, BoolExpr::disj_lits({L::pos(a), L::pos(c)}));
    const Translation t = translate_equivset(es);
    EXPECT_TRUE(check_tight(t.program).tight);
    EXPECT_EQ(enumerate_stable_models_bruteforce(t.program).size(), count_solutions(es));
}

TEST(Translate, RandomEquivSetsKeepSolutionCount) {
    std::mt19937_64 g(42);
    for (int t = 0; t < 250; ++t) {
        const EquivSet es = testutil::random_equivset(g, 2 + static_cast<int>(g() % 4), 1 + static_cast<int>(g() % 4));
        Translation tr;
        try {
            tr = translate_equivset(es);
        } catch (const InconsistentInstance&) {
            ASSERT_EQ(count_solutions(es), 0u) << dump(es);
            continue;
        }
        if (tr.program.atom_count() > 20) continue;
        const auto models = enumerate_stable_models_bruteforce(tr.program, 20);
        ASSERT_EQ(models.size(), count_solutions(es)) << dump(es) << program_to_text(tr.program);
        // each model reads back as a solution
        for (const auto& m : models) {
            Valuation v(es.vars.size(), 0);
            for (const auto& [var, atom] : tr.map.vars()) v[var] = m.count(atom) ? 1 : 0;
            ASSERT_TRUE(satisfies(es, v));
        }
    }
}

TEST(Completion, SmallExample) {
    const Program p = parse_program("p :- not q, r.\nq :- not p.\nr :- not s.\ns :- not p.\n");
    const CnfFormula f = completion(p);
    EXPECT_EQ(testutil::count_models_bruteforce(f), 2u);
    // an atom without rules is fixed false by a unit clause
    const CnfFormula g = completion(parse_program("a :- b.\n"));
    bool unit = false;
    for (const auto& c : g.clauses) unit = unit || c == Clause{-2};
    EXPECT_TRUE(unit);
    EXPECT_THROW(completion(parse_program("a :- b.\nb :- a.\n")), TightnessRequired);
}

TEST(Completion, CountsMatchStableModels) {
    std::mt19937_64 g(8);
    for (int t = 0; t < 200; ++t) {
        const Program p = testutil::random_program(g, 2 + static_cast<int>(g() % 9), 1 + static_cast<int>(g() % 12), true);
        const CnfFormula f = completion(p);
        const auto n = enumerate_stable_models_bruteforce(p).size();
        ASSERT_EQ(static_cast<std::uint64_t>(testutil::count_models(f)), n) << program_to_text(p);
        if (f.num_vars <= 20) ASSERT_EQ(testutil::count_models_bruteforce(f), n);
    }
}

TEST(Completion, CountersAgreeOnRandomCnf) {
    std::mt19937_64 g(81);
    for (int t = 0; t < 400; ++t) {
        CnfFormula f;
        f.num_vars = 1 + static_cast<int>(g() % 14);
        const int clauses = static_cast<int>(g() % 40);
        for (int c = 0; c < clauses; ++c) {
            Clause cl;
            const int len = 1 + static_cast<int>(g() % 4);
            for (int k = 0; k < len; ++k) {
                const int v = 1 + static_cast<int>(g() % f.num_vars);
                cl.push_back(g() % 2 ? v : -v);
            }
            f.clauses.push_back(cl);
        }
        const auto brute = testutil::count_models_bruteforce(f);
        ASSERT_EQ(testutil::count_models_cdcl(f), brute) << emit_dimacs(f);
        ASSERT_EQ(static_cast<std::uint64_t>(testutil::count_models(f)), brute);
    }
    const Program p = testutil::random_program(g, 12, 20, true);
    EXPECT_EQ(testutil::count_models_cdcl(completion(p)), enumerate_stable_models_bruteforce(p).size());
    CnfFormula many;
    many.num_vars = 30;
    EXPECT_THROW(testutil::count_models_cdcl(many, 1000), std::overflow_error);
}

TEST(Dimacs, WriteAndParse) {
    const Program p = parse_program("a :- not b.\nb :- not a.\nc :- a, b.\n");
    const CnfFormula f = completion(p);
    const std::string text = emit_dimacs(f);
    EXPECT_NE(text.find("c map 1 a\n"), std::string::npos);
    EXPECT_NE(text.find("p cnf " + std::to_string(f.num_vars) + " " + std::to_string(f.clauses.size())), std::string::npos);
    const CnfFormula back = parse_dimacs(text);
    EXPECT_EQ(back.num_vars, f.num_vars);
    EXPECT_EQ(back.clauses, f.clauses);
    EXPECT_EQ(back.names, f.names);
    EXPECT_THROW(parse_dimacs("1 2 0\n"), ParseError);
    EXPECT_THROW(parse_dimacs("p cnf 2 1\n1 3 0\n"), Error);
}

TEST(Dimacs, ClauseNormalization) {
    CnfFormula f;
    f.num_vars = 3;
    f.add_clause({3, -1, 3});
    f.add_clause({1, -1});
    ASSERT_EQ(f.clauses.size(), 1u);
    EXPECT_EQ(f.clauses[0], (Clause{-1, 3}));
    EXPECT_THROW(f.add_clause({4}), InvalidArgument);
}
