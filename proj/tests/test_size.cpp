#include <gtest/gtest.h>

#include "lpterm/parser.hpp"
#include "lpterm/size.hpp"
#include "support.hpp"

using namespace lpterm;
using namespace lpterm::testing;

namespace {

Atom atom(const std::string& text) {
    Term t = parse_term(text);
    return Atom::make(t.name(), t.args());
}

SizeExpr expr(std::int64_t c, std::map<std::string, std::int64_t> coeffs) { return {c, std::move(coeffs)}; }

}  // namespace

TEST(TermSize, Examples) {
    EXPECT_EQ(term_size(parse_term("[X|[Y|T]]")), expr(4, {{"x", 1}, {"y", 1}, {"t", 1}}));
    EXPECT_EQ(term_size(parse_term("c")), expr(0, {}));
    EXPECT_EQ(term_size(parse_term("42")), expr(0, {}));
    EXPECT_EQ(term_size(parse_term("f(Y)")), expr(1, {{"y", 1}}));
    EXPECT_EQ(term_size(parse_term("g(X,X)")), expr(2, {{"x", 2}}));
}

TEST(TermSize, NaturalVariableNaming) {
    EXPECT_EQ(natural_variable(VarId{"X", 2}), "x_2");
    EXPECT_EQ(natural_variable(VarId{"Cur", 3}), "cur_3");
    EXPECT_EQ(natural_variable(VarId{"Y"}), "y");
}

TEST(AtomSize, Vectors) {
    EXPECT_EQ(atom_size_vector(atom("bub([Y|T],[X|Cur],Sol)")),
              (SizeVector{expr(2, {{"y", 1}, {"t", 1}}), expr(2, {{"x", 1}, {"cur", 1}}), expr(0, {{"sol", 1}})}));
    EXPECT_TRUE(atom_size_vector(Atom::make("p")).empty());
    EXPECT_EQ(atom_size_vector(atom("q(X,f(Y))")), (SizeVector{expr(0, {{"x", 1}}), expr(1, {{"y", 1}})}));
    EXPECT_THROW(atom_size_vector(Atom::comparison(Builtin::lt, var("X"), var("Y"))), std::invalid_argument);
}

TEST(AtomSize, Totals) {
    EXPECT_EQ(atom_total_size(atom("bub([Y|T],[X|Cur],Sol)")),
              expr(4, {{"y", 1}, {"t", 1}, {"x", 1}, {"cur", 1}, {"sol", 1}}));
    EXPECT_EQ(atom_total_size(Atom::make("p")), expr(0, {}));
    EXPECT_EQ(atom_total_size(atom("q(X,f(Y))")), expr(1, {{"x", 1}, {"y", 1}}));
}

TEST(RenderSize, Text) {
    EXPECT_EQ(render_size(expr(2, {{"x", 1}, {"y", 3}})), "2 + x + 3*y");
    EXPECT_EQ(render_size(expr(0, {})), "0");
    EXPECT_EQ(render_size(expr(0, {{"x", 1}})), "x");
}

namespace {

// argument slots of non-constant function symbols, counted iteratively
std::int64_t slot_count(const Term& t) {
    std::int64_t n = 0;
    std::vector<Term> stack{t};
    while (!stack.empty()) {
        Term u = stack.back();
        stack.pop_back();
        n += static_cast<std::int64_t>(u.args().size());
        for (const auto& a : u.args()) stack.push_back(a);
    }
    return n;
}

}  // namespace

TEST(SizeProperty, GroundingCommutesWithSize) {
    std::mt19937 rng(7);
    std::vector<Term> vars{var("X"), var("Y"), var("Z")};
    TermGen gen{rng, vars};
    TermGen ground{rng, {cst("a")}};
    for (int i = 0; i < 300; ++i) {
        Term t = gen(3);
        Substitution theta;
        std::map<std::string, std::int64_t> at;
        for (const auto& v : vars) {
            Term g = ground(2);
            theta.bind(v.var(), g);
            at[natural_variable(v.var())] = term_size(g).constant;
        }
        Term tg = apply_substitution(t, theta);
        ASSERT_TRUE(tg.is_ground());
        SizeExpr sz = term_size(t);
        std::map<std::string, std::int64_t> used;
        for (const auto& [x, _] : sz.coefficients) used[x] = at.at(x);
        EXPECT_EQ(sz.evaluate(used), term_size(tg).constant);
        EXPECT_EQ(ground_size(tg), slot_count(tg));
        EXPECT_TRUE(term_size(tg).coefficients.empty());
    }
}
