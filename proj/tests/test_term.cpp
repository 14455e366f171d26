#include <gtest/gtest.h>

#include "lpterm/parser.hpp"
#include "lpterm/term.hpp"
#include "support.hpp"

using namespace lpterm;
using namespace lpterm::testing;

namespace {

Atom atom(const std::string& text) {
    // parse "p(...)" as a term, then lift to an atom
    Term t = parse_term(text);
    return Atom::make(t.name(), t.args());
}

}  // namespace

TEST(Substitution, ApplyBindsOnlyDomainVariables) {
    Substitution s{{VarId{"X"}, fn("f", {var("W")})}};
    EXPECT_EQ(apply_substitution(atom("p(X,Y)"), s), atom("p(f(W),Y)"));
    Substitution t{{VarId{"X"}, cst("b")}};
    EXPECT_EQ(apply_substitution(atom("p(a)"), t), atom("p(a)"));
    Substitution u{{VarId{"X"}, var("W")}, {VarId{"Y"}, var("Z")}};
    EXPECT_EQ(apply_substitution(atom("q(X,f(Y))"), u), atom("q(W,f(Z))"));
}

TEST(Substitution, IdentityBindingIsDropped) {
    Substitution s;
    s.bind(VarId{"X"}, var("X"));
    EXPECT_TRUE(s.empty());
}

TEST(Compose, SetConstruction) {
    VarId X{"X"}, Y{"Y"};
    Substitution xy{{X, var("Y")}}, ya{{Y, cst("a")}};
    EXPECT_EQ(compose(xy, ya), (Substitution{{X, cst("a")}, {Y, cst("a")}}));

    Substitution xa{{X, cst("a")}}, xb{{X, cst("b")}};
    EXPECT_EQ(compose(xa, xb), xa);

    Substitution yx{{Y, var("X")}};
    EXPECT_EQ(compose(xy, yx), yx);
}

TEST(Mgu, OrientationReproducesPathExamples) {
    auto t1 = mgu(atom("p(X,Y)"), atom("p(W,Z)"));
    ASSERT_TRUE(t1);
    EXPECT_EQ(*t1, (Substitution{{VarId{"X"}, var("W")}, {VarId{"Y"}, var("Z")}}));

    auto t2 = mgu(atom("q(W,f(Z))"), atom("q(f(X),Y)"));
    ASSERT_TRUE(t2);
    EXPECT_EQ(*t2, (Substitution{{VarId{"W"}, fn("f", {var("X")})}, {VarId{"Y"}, fn("f", {var("Z")})}}));
}

TEST(Mgu, FailureCases) {
    EXPECT_FALSE(mgu(atom("p(f(X))"), atom("q(f(Y))")));
    EXPECT_FALSE(mgu(atom("p(X)"), atom("p(f(X))")));  // occurs check
    EXPECT_FALSE(mgu(atom("p(a)"), atom("p(b)")));
    EXPECT_FALSE(mgu(atom("p(X,Y)"), atom("p(X)")));
    EXPECT_FALSE(mgu(Atom::comparison(Builtin::le, var("X"), var("Y")),
                     Atom::comparison(Builtin::le, var("X"), var("Y"))));
}

TEST(Mgu, ChainedBindingsStayIdempotent) {
    auto t = mgu(atom("p(X,Y,Z)"), atom("p(Y,Z,a)"));
    ASSERT_TRUE(t);
    EXPECT_TRUE(t->is_idempotent());
    EXPECT_EQ(apply_substitution(var("X"), *t), cst("a"));
}

TEST(RenameApart, TagsEveryVariable) {
    Program p = parse_program("p(X) :- q(X).");
    Rule r = rename_apart(p[0], 2);
    EXPECT_EQ(r.head_atom().args[0], var("X", 2));
    EXPECT_EQ(r.body[0].args[0], var("X", 2));

    Program f = parse_program("p(a, f(b)).");
    EXPECT_EQ(rename_apart(f[0], 7).head_atom(), f[0].head_atom());

    Rule c1 = rename_apart(p[0], 1), c2 = rename_apart(p[0], 2);
    auto v1 = variables_of(c1), v2 = variables_of(c2);
    for (const auto& v : v1) EXPECT_FALSE(v2.count(v));
}

TEST(StTransform, SplitsDisjunctionAndDropsNegation) {
    Program p = parse_program("a(X) | b(X) :- c(X), not d(X).");
    Program s = st_transform(p);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_TRUE(s.is_positive_normal());
    EXPECT_EQ(render_rule(s[0]), "a(X) :- c(X).");
    EXPECT_EQ(render_rule(s[1]), "b(X) :- c(X).");

    Program q = parse_program("p(X) :- q(X), not p(X).");
    Program t = st_transform(q);
    ASSERT_EQ(t.size(), 1u);
    EXPECT_EQ(render_rule(t[0]), "p(X) :- q(X).");

    Program n = parse_program("p(X) :- q(X).\nq(a).");
    EXPECT_EQ(render_program(st_transform(n)), render_program(n));
}

TEST(StTransform, RuleCountIsSumOfHeadCounts) {
    Program p = parse_program("a | b | c :- d.\ne :- not f, d.\ng | h.\nd.");
    EXPECT_EQ(st_transform(p).size(), 3u + 1u + 2u + 1u);
}

TEST(TermOrder, NumbersThenConstantsThenCompounds) {
    EXPECT_TRUE(term_order(cst("2"), cst("10")) < 0);
    EXPECT_TRUE(term_order(cst("-3"), cst("1")) < 0);
    EXPECT_TRUE(term_order(cst("9"), cst("a")) < 0);
    EXPECT_TRUE(term_order(cst("zz"), fn("a", {cst("b")})) < 0);
    EXPECT_TRUE(term_order(fn("f", {cst("a")}), fn("f", {cst("b")})) < 0);
    EXPECT_TRUE(term_order(fn("f", {cst("a")}), fn("f", {cst("a"), cst("a")})) < 0);
    EXPECT_TRUE(term_order(fn("g", {cst("1")}), fn("g", {cst("1")})) == 0);
}

// -- properties ---------------------------------------------------------------

namespace {

void collect_subterms(const Term& t, std::vector<Term>& out) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    for (const auto& a : t.args()) collect_subterms(a, out);
}

// Does any substitution mapping each variable to one of `pool`, applied twice,
// make the two terms equal?
bool unifiable_by_search(const Term& a, const Term& b, const std::vector<VarId>& vars,
                         const std::vector<Term>& pool) {
    std::vector<std::size_t> idx(vars.size(), 0);
    for (;;) {
        Substitution s;
        for (std::size_t i = 0; i < vars.size(); ++i) s.bind(vars[i], pool[idx[i]]);
        if (apply_substitution(apply_substitution(a, s), s) ==
            apply_substitution(apply_substitution(b, s), s))
            return true;
        std::size_t i = vars.size();
        while (i > 0 && idx[i - 1] + 1 == pool.size()) idx[--i] = 0;
        if (i == 0) return false;
        ++idx[i - 1];
    }
}

}  // namespace

TEST(MguProperty, RandomPairs) {
    std::mt19937 rng(20261016);
    TermGen gen1{rng, {var("X", 1), var("Y", 1)}};
    TermGen gen2{rng, {var("X", 2), var("Z", 2)}};
    int unified = 0, failed = 0;
    for (int i = 0; i < 400; ++i) {
        Term a = gen1(2), b = gen2(2);
        Atom A = Atom::make("p", {a}), B = Atom::make("p", {b});
        auto theta = mgu(A, B);
        if (theta) {
            ++unified;
            EXPECT_TRUE(theta->is_idempotent());
            EXPECT_EQ(apply_substitution(A, *theta), apply_substitution(B, *theta));
            EXPECT_EQ(apply_substitution(apply_substitution(A, *theta), *theta),
                      apply_substitution(A, *theta));
        } else {
            ++failed;
            std::vector<Term> pool;
            collect_subterms(a, pool);
            collect_subterms(b, pool);
            std::set<VarId> vs = variables_of(a);
            for (const auto& v : variables_of(b)) vs.insert(v);
            std::vector<VarId> vars(vs.begin(), vs.end());
            if (!vars.empty()) {
                EXPECT_FALSE(unifiable_by_search(a, b, vars, pool));
            }
        }
        // renaming apart does not change unifiability when variables are disjoint
        EXPECT_EQ(theta.has_value(), mgu(retag(A, 5), retag(B, 6)).has_value());
    }
    EXPECT_GT(unified, 20);
    EXPECT_GT(failed, 20);
}
