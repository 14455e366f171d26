// Acceptance run: one PASS/FAIL line per criterion, details indented below.
// Every sample size, bound, seed and tolerance is fixed here.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <type_traits>

#include "lpterm/cycle_bounded.hpp"
#include "lpterm/evaluator.hpp"
#include "lpterm/report.hpp"
#include "lpterm/rule_bounded.hpp"
#include "support.hpp"

using namespace lpterm;
using namespace lpterm::testing;

namespace {

constexpr double kMaxSecondsPerProgram = 1.0;
constexpr int kSoundnessFactSets = 20;
constexpr int kReductionDraws = 500;
constexpr int kReductionBruteBound = 4;
constexpr int kSignDraws = 500;
constexpr int kSignSampleBound = 5;
constexpr std::uint32_t kSeed = 20261016;

struct Criterion {
    bool ok = true;
    std::vector<std::string> notes;

    void check(bool cond, const std::string& what) {
        if (!cond) ok = false;
        notes.push_back(std::string(cond ? "ok   " : "FAIL ") + what);
    }
    void note(const std::string& s) { notes.push_back("     " + s); }
};

int failures = 0;

void report(int n, const std::string& title, const Criterion& c) {
    std::printf("%s %d %s\n", c.ok ? "PASS" : "FAIL", n, title.c_str());
    for (const auto& s : c.notes) std::printf("       %s\n", s.c_str());
    std::fflush(stdout);
    if (!c.ok) ++failures;
}

std::size_t nontrivial(const ProgramAnalysis& a, std::size_t nth = 0) {
    for (std::size_t c = 0; c < a.sccs.components.size(); ++c)
        if (a.sccs.nontrivial[c] && nth-- == 0) return c;
    throw std::logic_error("missing component");
}

AlphaAssignment alpha_of(const std::string& pred, const std::vector<int>& v) {
    AlphaAssignment out;
    for (std::size_t i = 0; i < v.size(); ++i) out[AlphaVar{pred, i + 1}.name()] = v[i];
    return out;
}

FactStore facts_of(const std::string& name) {
    return corpus_has_facts(name) ? facts_from_program(corpus_facts(name)) : FactStore{};
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// -- 1 --------------------------------------------------------------------------

void corpus_table() {
    Criterion c;
    struct Row {
        std::string name;
        std::optional<BoundStatus> rb, cb;
        std::function<bool(const Program&, const ProgramAnalysis&, const RuleBoundedVerdict&)> extra;
        std::string label;
    };
    auto one_scc = [](const std::string& pred, std::vector<int> w) {
        return [pred, w](const Program&, const ProgramAnalysis& a, const RuleBoundedVerdict& v) {
            const auto& s = v.sccs[nontrivial(a)];
            return s.status == BoundStatus::bounded && s.grouped.size() == s.relevant_rules.size() &&
                   verifies(s.constraints, alpha_of(pred, w));
        };
    };
    std::vector<Row> rows = {
        {"bubble", BoundStatus::bounded, {}, one_scc("bub", {1, 1, 1}), "alpha_bub=(1,1,1) verifies 3 grouped inequalities"},
        {"visit", BoundStatus::bounded, {}, one_scc("visit", {2, 1, 2}), "alpha_visit=(2,1,2) verifies"},
        {"append", BoundStatus::bounded, {},
         [](const Program&, const ProgramAnalysis& a, const RuleBoundedVerdict& v) {
             for (std::size_t k = 0; k < 2; ++k) {
                 const auto& s = v.sccs[nontrivial(a, k)];
                 std::string pred = a.sccs.predicates[s.component].begin()->name;
                 if (s.status != BoundStatus::bounded ||
                     s.alpha.at(AlphaVar{pred, 1}.name()) < s.alpha.at(AlphaVar{pred, 2}.name()))
                     return false;
             }
             return true;
         },
         "both components feasible with alpha[1] >= alpha[2]"},
        {"sq", BoundStatus::bounded, {},
         [](const Program&, const ProgramAnalysis& a, const RuleBoundedVerdict& v) {
             auto ones = alpha_of("s", {1, 1});
             ones.merge(alpha_of("q", {1, 1}));
             return verifies(v.sccs[nontrivial(a)].constraints, ones);
         },
         "all-ones witness verifies"},
        {"pq_cycle", BoundStatus::unbounded, BoundStatus::bounded, nullptr, ""},
        {"shift", BoundStatus::unbounded, {}, nullptr, ""},
        {"nested", BoundStatus::bounded, BoundStatus::unbounded, nullptr, ""},
        {"rotate", {}, BoundStatus::bounded, nullptr, ""},
    };
    for (const auto& row : rows) {
        auto t0 = std::chrono::steady_clock::now();
        Program p = st_transform(corpus_program(row.name));
        auto a = analyze_structure(p);
        auto rb = check_program_rule_bounded(p, a);
        auto cb = check_program_cycle_bounded(p);
        double secs = seconds_since(t0);
        std::ostringstream what;
        what << row.name << ": " << rule_verdict_name(rb.status) << ", " << cycle_verdict_name(cb.status);
        bool ok = (!row.rb || rb.status == *row.rb) && (!row.cb || cb.status == *row.cb);
        if (row.extra) {
            bool extra = row.extra(p, a, rb);
            ok = ok && extra;
            what << "; " << row.label << (extra ? "" : " [does not hold]");
        }
        ok = ok && secs < kMaxSecondsPerProgram;
        char t[32];
        std::snprintf(t, sizeof t, "%.3f", secs);
        what << "; " << t << " s";
        c.check(ok, what.str());
    }
    report(1, "corpus verdict table", c);
}

// -- 2 --------------------------------------------------------------------------

void soundness_oracle() {
    Criterion c;
    std::mt19937 rng(kSeed);
    std::size_t runs = 0, counterexamples = 0;
    for (const auto& name : corpus_names()) {
        Program p = st_transform(corpus_program(name));
        bool rb = check_program_rule_bounded(p).status == BoundStatus::bounded;
        bool cb = check_program_cycle_bounded(p).status == BoundStatus::bounded;
        if (!rb && !cb) continue;
        std::size_t bad = 0;
        for (int i = 0; i < kSoundnessFactSets; ++i) {
            auto o = fixpoint(p, FactStore(random_facts(p, rng)));
            ++runs;
            if (o.status != EvalStatus::fixpoint) ++bad;
        }
        counterexamples += bad;
        c.check(bad == 0, name + ": " + std::to_string(kSoundnessFactSets - bad) + "/" +
                              std::to_string(kSoundnessFactSets) + " fact sets reach FIXPOINT");
    }
    c.note(std::to_string(runs) + " runs, " + std::to_string(counterexamples) + " counterexamples");
    report(2, "soundness oracle on random fact sets", c);
}

// -- 3 --------------------------------------------------------------------------

void reduction_oracle() {
    Criterion c;
    std::mt19937 rng(kSeed);
    std::uniform_int_distribution<int> coef(-3, 3), nvars(1, 3), nalpha(1, 4), coin(0, 2);
    int missed = 0, unverified = 0, both = 0, neither = 0, beyond_bound = 0;
    for (int round = 0; round < kReductionDraws; ++round) {
        std::vector<std::string> alphas;
        for (int i = nalpha(rng); i > 0; --i) alphas.push_back("alpha_p[" + std::to_string(alphas.size() + 1) + "]");
        auto random_expr = [&] {
            LinExpr e;
            for (const auto& a : alphas) e.add(a, coef(rng));
            return e;
        };
        GroupedInequality g;
        std::vector<std::string> xs;
        for (int i = nvars(rng); i > 0; --i) {
            xs.push_back("x" + std::to_string(xs.size()));
            LinExpr e = random_expr();
            if (!e.is_zero()) g.groups[xs.back()] = e;
        }
        g.constant_group = random_expr();
        if (coin(rng) == 0) g.constant_group.add_constant(coef(rng));

        auto cs = forall_reduction(g);
        auto fa = feasible_alpha(cs, alphas);
        auto bf = brute_force_alpha(cs, kReductionBruteBound, alphas);
        if (bf && !fa) ++missed;
        if (fa) {
            // re-verify on the reduced system and directly on x in {0..5}^n
            bool ok = verifies(cs, *fa);
            Assignment al = to_rational(*fa);
            std::vector<int> x(xs.size(), 0);
            for (;;) {
                std::map<std::string, Rational> at;
                for (std::size_t i = 0; i < xs.size(); ++i) at[xs[i]] = x[i];
                ok = ok && g.evaluate(al, at) >= 0;
                std::size_t i = xs.size();
                while (i > 0 && x[i - 1] == 5) x[--i] = 0;
                if (i == 0) break;
                ++x[i - 1];
            }
            for (const auto& [name, v] : *fa) ok = ok && v >= 1;
            if (!ok) ++unverified;
            if (bf) ++both;
            else ++beyond_bound;
        } else if (!bf) {
            ++neither;
        }
    }
    c.check(missed == 0, std::to_string(missed) + " draws where brute force found alpha and the reduction did not");
    c.check(unverified == 0, std::to_string(unverified) + " returned witnesses failed re-verification");
    c.note(std::to_string(both) + " feasible by both, " + std::to_string(neither) + " infeasible by both, " +
           std::to_string(beyond_bound) + " feasible only beyond bound " + std::to_string(kReductionBruteBound));
    report(3, "forall reduction vs brute-force alpha (500 draws, bound 4)", c);
}

// -- 4 --------------------------------------------------------------------------

void sign_condition_closed_form() {
    Criterion c;
    std::mt19937 rng(kSeed);
    std::uniform_int_distribution<int> len(1, 4), entry(-3, 3);
    int mismatches = 0;
    std::string first;
    for (int round = 0; round < kSignDraws; ++round) {
        std::vector<int> w(len(rng));
        for (auto& e : w) e = entry(rng);
        // closed form: every alpha >= 1 gives alpha.w < 0 iff all w_i <= 0 and one < 0
        bool all_le = std::all_of(w.begin(), w.end(), [](int v) { return v <= 0; });
        bool one_lt = std::any_of(w.begin(), w.end(), [](int v) { return v < 0; });
        bool closed_negative = all_le && one_lt;
        bool sampled_negative = true;
        std::vector<int> a(w.size(), 1);
        for (;;) {
            int dot = 0;
            for (std::size_t i = 0; i < w.size(); ++i) dot += a[i] * w[i];
            if (dot >= 0) sampled_negative = false;
            std::size_t i = a.size();
            while (i > 0 && a[i - 1] == kSignSampleBound) a[--i] = 1;
            if (i == 0) break;
            ++a[i - 1];
        }
        if (closed_negative != sampled_negative) {
            ++mismatches;
            if (first.empty()) {
                first = "w=(";
                for (std::size_t i = 0; i < w.size(); ++i) first += (i ? "," : "") + std::to_string(w[i]);
                first += ")";
            }
        }
    }
    c.check(mismatches == 0, std::to_string(mismatches) + " of " + std::to_string(kSignDraws) +
                                 " vectors disagree with sampling over {1..5}^n");
    if (!first.empty())
        c.note("first disagreement " + first +
               ": a non-negative product needs some alpha_i above the sampling bound");
    report(4, "closed-form sign condition vs alpha sampling (500 draws, bound 5)", c);
}

// -- 5 --------------------------------------------------------------------------

void expansion_cross_check() {
    Criterion c;
    std::size_t checked = 0;
    for (const auto& name : corpus_names()) {
        Program p = st_transform(corpus_program(name));
        auto a = analyze_structure(p);
        auto v = check_program_rule_bounded(p, a);
        for (const auto& s : v.sccs) {
            if (s.status != BoundStatus::bounded) continue;
            Program rel = relevant_subprogram(p, a, s.component);
            if (rel.size() == 0) continue;
            auto w = weights_from_alpha(s.alpha, a.sccs.predicates[s.component]);
            auto sb = check_size_bounded(expand_program(rel, w));
            ++checked;
            c.check(sb.size_bounded, name + " C" + std::to_string(s.component) + ": expansion is size-bounded");
        }
    }
    c.check(checked > 0, std::to_string(checked) + " bounded components expanded");
    report(5, "expansion of bounded components is size-bounded", c);
}

// -- 6 --------------------------------------------------------------------------

void evaluator_ground_truth() {
    Criterion c;
    auto bubble = fixpoint(corpus_program("bubble"), facts_of("bubble"));
    c.check(bubble.status == EvalStatus::fixpoint &&
                bubble.model.contains(parse_program("bub([],[],[1,2]).")[0].head_atom()),
            "bubble + input([2,1]) contains bub([],[],[1,2])");
    auto visit = fixpoint(corpus_program("visit"), facts_of("visit"));
    c.check(visit.status == EvalStatus::fixpoint &&
                visit.model.contains(parse_program("visit(null,[b,d,c,a],[]).")[0].head_atom()),
            "visit + tree fact contains visit(null,[b,d,c,a],[])");
    EvalBudget b;
    b.max_iterations = 200;
    for (const auto& name : corpus_names()) {
        Program p = st_transform(corpus_program(name));
        auto semi = fixpoint(p, facts_of(name), b);
        auto naive = naive_fixpoint(p, facts_of(name), b);
        bool ok = semi.status == naive.status &&
                  (semi.status != EvalStatus::fixpoint || semi.model == naive.model);
        c.check(ok, name + ": semi-naive " +
                        (semi.status == EvalStatus::fixpoint ? "model equals naive model (" +
                                                                   std::to_string(semi.model.size()) + " atoms)"
                                                             : "and naive both stop at the iteration budget"));
    }
    report(6, "evaluator ground truth and semi-naive/naive agreement", c);
}

// -- 7 --------------------------------------------------------------------------

void firing_graph_regression() {
    Criterion c;
    auto a = analyze_structure(corpus_program("bubble"));
    using V = std::vector<std::size_t>;
    c.check(a.sccs.components == std::vector<V>{{0}, {1, 2, 3}}, "components {r0}, {r1,r2,r3}");
    c.check(a.sccs.nontrivial == std::vector<bool>{false, true}, "only {r1,r2,r3} is non-trivial");
    report(7, "firing graph of bubble sort", c);
}

// -- 8 --------------------------------------------------------------------------

void structural_coverage() {
    Criterion c;
    Program late = parse_program("p(f(X)) :- p(X), p(f(f(X))).");
    RuleBoundedOptions choices;
    choices.max_choices = 1;
    c.check(check_program_rule_bounded(late, choices).status == BoundStatus::unknown &&
                check_program_rule_bounded(late).status == BoundStatus::bounded,
            "choice cap yields UNKNOWN, lifting it yields BOUNDED");
    CycleOptions paths;
    paths.max_paths = 1;
    c.check(check_program_cycle_bounded(corpus_program("pq_cycle"), paths).status == BoundStatus::unknown,
            "path cap yields UNKNOWN");
    CycleOptions versions;
    versions.max_linear_versions = 1;
    c.check(check_program_cycle_bounded(corpus_program("nested"), versions).status == BoundStatus::unknown,
            "linear-version cap yields UNKNOWN");
    c.check(std::string(rule_verdict_name(BoundStatus::unknown)) != rule_verdict_name(BoundStatus::unbounded) &&
                std::string(cycle_verdict_name(BoundStatus::unknown)) != cycle_verdict_name(BoundStatus::unbounded),
            "UNKNOWN is reported apart from the negative verdicts");
    static_assert(std::is_same_v<Rational, boost::multiprecision::cpp_rational>);
    // 3^60 overflows 64-bit arithmetic; the solver must stay exact
    Integer big = 1;
    for (int i = 0; i < 60; ++i) big *= 3;
    LinExpr e = LinExpr::variable("alpha_p[1]", Rational(big)) - LinExpr::variable("alpha_p[2]", Rational(big + 1));
    auto fa = feasible_alpha({LinearConstraint::ge(e)}, {"alpha_p[1]", "alpha_p[2]"});
    c.check(fa && verifies({LinearConstraint::ge(e)}, *fa), "solver arithmetic is exact (3^60-sized coefficients)");
    report(8, "caps, UNKNOWN verdicts and exact arithmetic", c);
}

}  // namespace

int main() {
    std::printf("acceptance run, seed %u\n", kSeed);
    corpus_table();
    soundness_oracle();
    reduction_oracle();
    sign_condition_closed_form();
    expansion_cross_check();
    evaluator_ground_truth();
    firing_graph_regression();
    structural_coverage();
    std::printf("%d criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
