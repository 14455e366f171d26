#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "size.hpp"
#include "term.hpp"

namespace lpterm {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline Integer floor_of(const Rational& q) {
    Integer n = boost::multiprecision::numerator(q);
    Integer d = boost::multiprecision::denominator(q);
    Integer f = n / d;
    if (n % d != 0 && n < 0) --f;
    return f;
}

inline Integer ceil_of(const Rational& q) {
    Integer f = floor_of(q);
    return Rational(f) == q ? f : f + 1;
}

inline bool is_integral(const Rational& q) { return boost::multiprecision::denominator(q) == 1; }

// ---------------------------------------------------------------------------
// Linear expressions over named rational variables
// ---------------------------------------------------------------------------

class LinExpr {
public:
    LinExpr() = default;
    explicit LinExpr(Rational c) : constant_(std::move(c)) {}

    static LinExpr variable(const std::string& name, const Rational& coeff = 1) {
        LinExpr e;
        e.add(name, coeff);
        return e;
    }

    static LinExpr from_size(const SizeExpr& s) {
        LinExpr e{Rational(s.constant)};
        for (const auto& [x, c] : s.coefficients) e.add(x, Rational(c));
        return e;
    }

    void add(const std::string& name, const Rational& coeff) {
        if (coeff == 0) return;
        auto [it, fresh] = coeffs_.try_emplace(name, coeff);
        if (!fresh) {
            it->second += coeff;
            if (it->second == 0) coeffs_.erase(it);
        }
    }

    void add_constant(const Rational& c) { constant_ += c; }

    const Rational& constant() const { return constant_; }
    const std::map<std::string, Rational>& coefficients() const { return coeffs_; }

    Rational coefficient(const std::string& name) const {
        auto it = coeffs_.find(name);
        return it == coeffs_.end() ? Rational(0) : it->second;
    }

    bool is_constant() const { return coeffs_.empty(); }
    bool is_zero() const { return coeffs_.empty() && constant_ == 0; }

    LinExpr& operator+=(const LinExpr& o) {
        constant_ += o.constant_;
        for (const auto& [x, c] : o.coeffs_) add(x, c);
        return *this;
    }
    LinExpr& operator-=(const LinExpr& o) {
        constant_ -= o.constant_;
        for (const auto& [x, c] : o.coeffs_) add(x, -c);
        return *this;
    }
    LinExpr& operator*=(const Rational& k) {
        if (k == 0) {
            coeffs_.clear();
            constant_ = 0;
            return *this;
        }
        constant_ *= k;
        for (auto& [x, c] : coeffs_) c *= k;
        return *this;
    }

    friend LinExpr operator+(LinExpr a, const LinExpr& b) { return a += b; }
    friend LinExpr operator-(LinExpr a, const LinExpr& b) { return a -= b; }
    friend LinExpr operator*(LinExpr a, const Rational& k) { return a *= k; }
    friend LinExpr operator*(const Rational& k, LinExpr a) { return a *= k; }

    // Replaces `name` by `repl`.
    LinExpr substitute(const std::string& name, const LinExpr& repl) const {
        auto it = coeffs_.find(name);
        if (it == coeffs_.end()) return *this;
        LinExpr out = *this;
        Rational k = it->second;
        out.coeffs_.erase(name);
        out += repl * k;
        return out;
    }

    // Missing variables evaluate to `fallback` when given, otherwise throw.
    Rational evaluate(const std::map<std::string, Rational>& at,
                      const Rational* fallback = nullptr) const {
        Rational v = constant_;
        for (const auto& [x, c] : coeffs_) {
            auto f = at.find(x);
            if (f != at.end()) {
                v += c * f->second;
            } else if (fallback) {
                v += c * *fallback;
            } else {
                throw std::out_of_range("no value for variable " + x);
            }
        }
        return v;
    }

    // Least common multiple of all denominators.
    Integer denominator_lcm() const {
        Integer l = boost::multiprecision::denominator(constant_);
        for (const auto& [x, c] : coeffs_)
            l = boost::multiprecision::lcm(l, Integer(boost::multiprecision::denominator(c)));
        return l;
    }

    friend bool operator==(const LinExpr&, const LinExpr&) = default;

private:
    std::map<std::string, Rational> coeffs_;
    Rational constant_ = 0;
};

using Assignment = std::map<std::string, Rational>;

namespace detail {
inline void render_coeff_term(std::string& out, const Rational& c, const std::string& name,
                              bool first) {
    Rational mag = c < 0 ? Rational(-c) : c;
    if (first) {
        if (c < 0) out += "-";
    } else {
        out += c < 0 ? " - " : " + ";
    }
    if (name.empty()) {
        out += mag.str();
        return;
    }
    if (mag != 1) out += mag.str() + "*";
    out += name;
}
}  // namespace detail

// "2*alpha_bub[1] - 2*alpha_bub[2] + 3"; "0" when empty.
inline std::string render_linexpr(const LinExpr& e) {
    std::string out;
    bool first = true;
    for (const auto& [x, c] : e.coefficients()) {
        detail::render_coeff_term(out, c, x, first);
        first = false;
    }
    if (e.constant() != 0 || first) detail::render_coeff_term(out, e.constant(), "", first);
    return out;
}

// ---------------------------------------------------------------------------
// Constraints and systems
// ---------------------------------------------------------------------------

// expr = 0, expr >= 0, expr > 0
enum class Relation { eq, ge, gt };

struct LinearConstraint {
    LinExpr expr;
    Relation rel = Relation::ge;

    static LinearConstraint eq(const LinExpr& lhs, const LinExpr& rhs) {
        return {lhs - rhs, Relation::eq};
    }
    static LinearConstraint ge(const LinExpr& lhs, const LinExpr& rhs = LinExpr{}) {
        return {lhs - rhs, Relation::ge};
    }
    static LinearConstraint gt(const LinExpr& lhs, const LinExpr& rhs = LinExpr{}) {
        return {lhs - rhs, Relation::gt};
    }
    static LinearConstraint le(const LinExpr& lhs, const LinExpr& rhs = LinExpr{}) {
        return {rhs - lhs, Relation::ge};
    }
    static LinearConstraint lt(const LinExpr& lhs, const LinExpr& rhs = LinExpr{}) {
        return {rhs - lhs, Relation::gt};
    }

    bool holds(const Assignment& at, const Rational* fallback = nullptr) const {
        Rational v = expr.evaluate(at, fallback);
        switch (rel) {
            case Relation::eq: return v == 0;
            case Relation::ge: return v >= 0;
            case Relation::gt: return v > 0;
        }
        return false;
    }

    friend bool operator==(const LinearConstraint&, const LinearConstraint&) = default;
};

// One constraint per line with integer coefficients: "2 x - y >= -3".
inline std::string render_constraint(const LinearConstraint& c) {
    LinExpr e = c.expr * Rational(c.expr.denominator_lcm());
    std::string out;
    bool first = true;
    for (const auto& [x, k] : e.coefficients()) {
        Rational mag = k < 0 ? Rational(-k) : k;
        if (first)
            out += k < 0 ? "-" : "";
        else
            out += k < 0 ? " - " : " + ";
        first = false;
        if (mag != 1) out += mag.str() + " ";
        out += x;
    }
    if (first) out += "0";
    out += c.rel == Relation::eq ? " = " : c.rel == Relation::ge ? " >= " : " > ";
    out += Rational(-e.constant()).str();
    return out;
}

struct LinearSystem {
    std::vector<LinearConstraint> constraints;

    std::set<std::string> variables() const {
        std::set<std::string> out;
        for (const auto& c : constraints)
            for (const auto& [x, _] : c.expr.coefficients()) out.insert(x);
        return out;
    }

    bool holds(const Assignment& at, const Rational* fallback = nullptr) const {
        return std::all_of(constraints.begin(), constraints.end(),
                           [&](const LinearConstraint& c) { return c.holds(at, fallback); });
    }
};

// LP-like text dump; `title` becomes a leading comment line.
inline std::string dump_system(const LinearSystem& s, const std::string& title = {}) {
    std::string out;
    if (!title.empty()) out += "# " + title + "\n";
    for (std::size_t i = 0; i < s.constraints.size(); ++i)
        out += "c" + std::to_string(i + 1) + ": " + render_constraint(s.constraints[i]) + "\n";
    return out;
}

class SolverLimit : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct SolverOptions {
    // Fourier-Motzkin working-set size guard.
    std::size_t max_constraints = 20000;
    // Branch-and-bound node guard for non-homogeneous integer witnesses.
    std::size_t max_branch_nodes = 20000;
};

// ---------------------------------------------------------------------------
// Equality elimination
// ---------------------------------------------------------------------------

struct EqualityElimination {
    bool consistent = true;
    // var = expr, every expr over free (non-eliminated) variables only
    std::vector<std::pair<std::string, LinExpr>> solved;
};

// Gaussian elimination. For each equality the first variable of `preferred`
// still present is used as pivot, otherwise the smallest name.
inline EqualityElimination eliminate_equalities(std::vector<LinExpr> equalities,
                                                const std::vector<std::string>& preferred = {}) {
    EqualityElimination out;
    for (std::size_t i = 0; i < equalities.size(); ++i) {
        LinExpr e = equalities[i];
        if (e.is_constant()) {
            if (e.constant() != 0) {
                out.consistent = false;
                return out;
            }
            continue;
        }
        std::string pivot = e.coefficients().begin()->first;
        for (const auto& p : preferred)
            if (e.coefficient(p) != 0) {
                pivot = p;
                break;
            }
        Rational k = e.coefficient(pivot);
        LinExpr repl = e.substitute(pivot, LinExpr{}) * Rational(-1 / k);
        for (std::size_t j = i + 1; j < equalities.size(); ++j)
            equalities[j] = equalities[j].substitute(pivot, repl);
        for (auto& [v, ex] : out.solved) ex = ex.substitute(pivot, repl);
        out.solved.emplace_back(pivot, std::move(repl));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Fourier-Motzkin with strictness tracking
// ---------------------------------------------------------------------------

namespace detail {

struct Ineq {
    LinExpr expr;  // expr >= 0, or > 0 when strict
    bool strict = false;
};

struct Bound {
    LinExpr expr;
    bool strict = false;
};

struct EliminationStep {
    std::string var;
    std::vector<Bound> lower;  // var >= expr
    std::vector<Bound> upper;  // var <= expr
};

// Scales so the smallest-named variable has coefficient +-1.
inline Ineq normalized(Ineq q) {
    if (q.expr.is_constant()) return q;
    Rational lead = q.expr.coefficients().begin()->second;
    if (lead < 0) lead = -lead;
    q.expr *= Rational(1) / lead;
    return q;
}

// Returns false when a constant constraint is violated.
inline bool add_reduced(std::map<std::map<std::string, Rational>, Ineq>& set, Ineq q) {
    q = normalized(std::move(q));
    if (q.expr.is_constant()) {
        const Rational& c = q.expr.constant();
        return q.strict ? c > 0 : c >= 0;
    }
    auto [it, fresh] = set.try_emplace(q.expr.coefficients(), q);
    if (!fresh) {
        // same left-hand side: keep the tighter constant
        Ineq& cur = it->second;
        const Rational& a = cur.expr.constant();
        const Rational& b = q.expr.constant();
        if (b < a || (b == a && q.strict && !cur.strict)) cur = q;
    }
    return true;
}

// Prefers the smallest integer inside the interval, then 0 when only an
// upper bound exists.
inline Rational pick_value(const std::optional<Bound>& lo, const Rational& lov,
                           const std::optional<Bound>& hi, const Rational& hiv) {
    if (!lo && !hi) return 0;
    if (!lo) {
        Integer c = hi->strict ? ceil_of(hiv) - 1 : floor_of(hiv);
        return Rational(c < 0 ? c : Integer(0));
    }
    Rational cand(lo->strict ? floor_of(lov) + 1 : ceil_of(lov));
    if (!hi || cand < hiv || (cand == hiv && !hi->strict)) return cand;
    if (!lo->strict) return lov;
    return (lov + hiv) / 2;
}

}  // namespace detail

// Decides the conjunction of `constraints` over the rationals, with optional
// per-variable lower bounds. Returns a witness or nullopt when infeasible.
inline std::optional<Assignment> solve_rational(const std::vector<LinearConstraint>& constraints,
                                                const std::map<std::string, Rational>& lower = {},
                                                const SolverOptions& opt = {}) {
    std::vector<LinExpr> eqs;
    std::vector<detail::Ineq> ineqs;
    std::set<std::string> all_vars;
    for (const auto& c : constraints) {
        for (const auto& [x, _] : c.expr.coefficients()) all_vars.insert(x);
        if (c.rel == Relation::eq)
            eqs.push_back(c.expr);
        else
            ineqs.push_back({c.expr, c.rel == Relation::gt});
    }
    for (const auto& [x, lb] : lower) {
        all_vars.insert(x);
        ineqs.push_back({LinExpr::variable(x) - LinExpr(lb), false});
    }

    EqualityElimination elim = eliminate_equalities(eqs);
    if (!elim.consistent) return std::nullopt;

    std::map<std::map<std::string, Rational>, detail::Ineq> work;
    for (auto& q : ineqs) {
        for (const auto& [v, ex] : elim.solved) q.expr = q.expr.substitute(v, ex);
        if (!detail::add_reduced(work, std::move(q))) return std::nullopt;
    }

    std::vector<detail::EliminationStep> steps;
    while (!work.empty()) {
        // variable minimizing the number of generated combinations
        std::map<std::string, std::pair<std::size_t, std::size_t>> counts;
        for (const auto& [_, q] : work)
            for (const auto& [x, c] : q.expr.coefficients())
                (c > 0 ? counts[x].first : counts[x].second)++;
        std::string var;
        std::size_t best = 0;
        bool have = false;
        for (const auto& [x, pn] : counts) {
            std::size_t cost = pn.first * pn.second;
            if (!have || cost < best) {
                var = x;
                best = cost;
                have = true;
            }
        }

        detail::EliminationStep step{var, {}, {}};
        std::vector<detail::Ineq> pos, neg;
        std::map<std::map<std::string, Rational>, detail::Ineq> next;
        for (auto& [_, q] : work) {
            Rational c = q.expr.coefficient(var);
            if (c == 0) {
                next.emplace(q.expr.coefficients(), q);
                continue;
            }
            LinExpr rest = q.expr.substitute(var, LinExpr{});
            if (c > 0) {
                step.lower.push_back({rest * Rational(-1 / c), q.strict});
                pos.push_back({rest * Rational(1 / c), q.strict});
            } else {
                step.upper.push_back({rest * Rational(-1 / c), q.strict});
                neg.push_back({rest * Rational(-1 / c), q.strict});
            }
        }
        // x >= -p and x <= n  =>  p + n >= 0
        for (const auto& p : pos) {
            for (const auto& n : neg) {
                if (!detail::add_reduced(next, {p.expr + n.expr, p.strict || n.strict}))
                    return std::nullopt;
                if (next.size() > opt.max_constraints)
                    throw SolverLimit("Fourier-Motzkin working set exceeded " +
                                      std::to_string(opt.max_constraints) + " constraints");
            }
        }
        steps.push_back(std::move(step));
        work = std::move(next);
    }

    Assignment at;
    for (auto it = steps.rbegin(); it != steps.rend(); ++it) {
        std::optional<detail::Bound> lo, hi;
        Rational lov, hiv;
        for (const auto& b : it->lower) {
            Rational v = b.expr.evaluate(at);
            if (!lo || v > lov || (v == lov && b.strict)) {
                lo = b;
                lov = v;
            }
        }
        for (const auto& b : it->upper) {
            Rational v = b.expr.evaluate(at);
            if (!hi || v < hiv || (v == hiv && b.strict)) {
                hi = b;
                hiv = v;
            }
        }
        at[it->var] = detail::pick_value(lo, lov, hi, hiv);
    }
    Rational zero = 0;
    for (const auto& x : all_vars)
        if (!at.count(x) && std::none_of(elim.solved.begin(), elim.solved.end(),
                                         [&](const auto& s) { return s.first == x; }))
            at[x] = 0;
    for (auto it = elim.solved.rbegin(); it != elim.solved.rend(); ++it)
        at[it->first] = it->second.evaluate(at, &zero);

    for (const auto& c : constraints)
        if (!c.holds(at)) throw std::logic_error("solver witness violates " + render_constraint(c));
    for (const auto& [x, lb] : lower)
        if (at.at(x) < lb) throw std::logic_error("solver witness violates lower bound of " + x);
    return at;
}

// Satisfiability over non-negative rationals; strict constraints allowed.
inline std::optional<Assignment> satisfiable_nonneg(const LinearSystem& sys,
                                                    const SolverOptions& opt = {}) {
    std::map<std::string, Rational> lower;
    for (const auto& x : sys.variables()) lower[x] = 0;
    return solve_rational(sys.constraints, lower, opt);
}

// ---------------------------------------------------------------------------
// Alpha variables and the for-all reduction
// ---------------------------------------------------------------------------

struct AlphaVar {
    std::string predicate;
    std::size_t index = 1;  // 1-based argument position

    auto operator<=>(const AlphaVar&) const = default;
    std::string name() const { return "alpha_" + predicate + "[" + std::to_string(index) + "]"; }
};

inline std::vector<std::string> alpha_names(const PredicateKey& p) {
    std::vector<std::string> out;
    for (std::size_t i = 1; i <= p.arity; ++i) out.push_back(AlphaVar{p.name, i}.name());
    return out;
}

// alpha_body . size(body) - alpha_head . size(head) >= 0
struct BilinearInequality {
    PredicateKey body_predicate;
    SizeVector body_size;
    PredicateKey head_predicate;
    SizeVector head_size;
};

// sum over natural variables x of groups[x] * x + constant_group >= 0, every
// group a linear expression over alpha variables.
struct GroupedInequality {
    std::map<std::string, LinExpr> groups;
    LinExpr constant_group;

    Rational evaluate(const Assignment& alpha, const std::map<std::string, Rational>& x) const {
        Rational v = constant_group.evaluate(alpha);
        for (const auto& [name, g] : groups) v += g.evaluate(alpha) * x.at(name);
        return v;
    }

    friend bool operator==(const GroupedInequality&, const GroupedInequality&) = default;
};

inline GroupedInequality group_by_variable(const BilinearInequality& b) {
    if (b.body_size.size() != b.body_predicate.arity || b.head_size.size() != b.head_predicate.arity)
        throw std::invalid_argument("size vector length does not match arity");
    GroupedInequality g;
    auto accumulate = [&](const PredicateKey& p, const SizeVector& sv, int sign) {
        for (std::size_t k = 0; k < sv.size(); ++k) {
            std::string a = AlphaVar{p.name, k + 1}.name();
            for (const auto& [x, c] : sv[k].coefficients) g.groups[x].add(a, Rational(sign * c));
            g.constant_group.add(a, Rational(sign * sv[k].constant));
        }
    };
    accumulate(b.body_predicate, b.body_size, 1);
    accumulate(b.head_predicate, b.head_size, -1);
    std::erase_if(g.groups, [](const auto& kv) { return kv.second.is_zero(); });
    return g;
}

// "(alpha_q[1] - alpha_s[1])*x + ... + (alpha_q[2] - alpha_s[1]) >= 0"
inline std::string render_grouped(const GroupedInequality& g) {
    std::string out;
    for (const auto& [x, e] : g.groups) {
        if (!out.empty()) out += " + ";
        out += "(" + render_linexpr(e) + ")*" + x;
    }
    if (!g.constant_group.is_zero() || out.empty()) {
        if (!out.empty()) out += " + ";
        out += "(" + render_linexpr(g.constant_group) + ")";
    }
    return out + " >= 0";
}

// The grouped inequality holds for every non-negative value of its natural
// variables iff every group is non-negative.
inline std::vector<LinearConstraint> forall_reduction(const GroupedInequality& g) {
    std::vector<LinearConstraint> out;
    for (const auto& [x, e] : g.groups)
        if (!e.is_zero()) out.push_back(LinearConstraint::ge(e));
    if (!g.constant_group.is_zero()) out.push_back(LinearConstraint::ge(g.constant_group));
    return out;
}

using AlphaAssignment = std::map<std::string, Integer>;

inline Assignment to_rational(const AlphaAssignment& a) {
    Assignment out;
    for (const auto& [x, v] : a) out[x] = Rational(v);
    return out;
}

inline bool verifies(const std::vector<LinearConstraint>& cs, const AlphaAssignment& a) {
    Assignment at = to_rational(a);
    Rational one = 1;
    return std::all_of(cs.begin(), cs.end(),
                       [&](const LinearConstraint& c) { return c.holds(at, &one); });
}

namespace detail {
inline std::set<std::string> collect_vars(const std::vector<LinearConstraint>& cs,
                                          const std::vector<std::string>& extra) {
    std::set<std::string> vars(extra.begin(), extra.end());
    for (const auto& c : cs)
        for (const auto& [x, _] : c.expr.coefficients()) vars.insert(x);
    return vars;
}

inline std::optional<AlphaAssignment> integral_branch(std::vector<LinearConstraint> cs,
                                                      const std::map<std::string, Rational>& lower,
                                                      const SolverOptions& opt,
                                                      std::size_t& nodes) {
    if (++nodes > opt.max_branch_nodes)
        throw SolverLimit("branch-and-bound exceeded " + std::to_string(opt.max_branch_nodes) +
                          " nodes");
    auto sol = solve_rational(cs, lower, opt);
    if (!sol) return std::nullopt;
    for (const auto& [x, v] : *sol) {
        if (is_integral(v)) continue;
        auto down = cs;
        down.push_back(LinearConstraint::le(LinExpr::variable(x), LinExpr(Rational(floor_of(v)))));
        if (auto r = integral_branch(std::move(down), lower, opt, nodes)) return r;
        cs.push_back(LinearConstraint::ge(LinExpr::variable(x), LinExpr(Rational(ceil_of(v)))));
        return integral_branch(std::move(cs), lower, opt, nodes);
    }
    AlphaAssignment out;
    for (const auto& [x, v] : *sol) out[x] = boost::multiprecision::numerator(v);
    return out;
}
}  // namespace detail

// Positive-integer alpha satisfying every constraint, or nullopt. `extra`
// names alpha variables that must be part of the witness even if no
// constraint mentions them.
inline std::optional<AlphaAssignment> feasible_alpha(const std::vector<LinearConstraint>& cs,
                                                     const std::vector<std::string>& extra = {},
                                                     const SolverOptions& opt = {}) {
    auto vars = detail::collect_vars(cs, extra);
    std::map<std::string, Rational> lower;
    for (const auto& x : vars) lower[x] = 1;
    auto sol = solve_rational(cs, lower, opt);
    if (!sol) return std::nullopt;

    AlphaAssignment out;
    Integer scale = 1;
    for (const auto& [x, v] : *sol)
        scale = boost::multiprecision::lcm(scale, Integer(boost::multiprecision::denominator(v)));
    bool homogeneous = std::all_of(cs.begin(), cs.end(), [](const LinearConstraint& c) {
        return c.expr.constant() == 0;
    });
    if (scale == 1 || homogeneous) {
        // homogeneous constraints survive scaling; alpha >= 1 only gets looser
        for (const auto& [x, v] : *sol) out[x] = boost::multiprecision::numerator(Rational(v * scale));
    } else {
        std::size_t nodes = 0;
        auto r = detail::integral_branch(cs, lower, opt, nodes);
        if (!r) return std::nullopt;
        out = std::move(*r);
    }
    if (!verifies(cs, out)) throw std::logic_error("alpha witness failed verification");
    return out;
}

// Exhaustive search over {1..bound}^k in lexicographic order (test oracle).
inline std::optional<AlphaAssignment> brute_force_alpha(const std::vector<LinearConstraint>& cs,
                                                        int bound,
                                                        const std::vector<std::string>& extra = {}) {
    if (bound < 1) throw std::invalid_argument("bound must be >= 1");
    auto set = detail::collect_vars(cs, extra);
    std::vector<std::string> vars(set.begin(), set.end());
    if (vars.size() > 8) throw std::invalid_argument("brute_force_alpha: more than 8 variables");
    std::vector<int> v(vars.size(), 1);
    for (;;) {
        AlphaAssignment a;
        for (std::size_t i = 0; i < vars.size(); ++i) a[vars[i]] = v[i];
        if (verifies(cs, a)) return a;
        std::size_t i = vars.size();
        while (i > 0 && v[i - 1] == bound) v[--i] = 1;
        if (i == 0) return std::nullopt;
        ++v[i - 1];
    }
}

}  // namespace lpterm
