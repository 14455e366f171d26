#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"
#include "linsolve.hpp"
#include "rule_bounded.hpp"
#include "size.hpp"
#include "term.hpp"

namespace lpterm {

// ---------------------------------------------------------------------------
// Linear versions
// ---------------------------------------------------------------------------

struct LinearProgram {
    Program program;
    // per original rule: the body position kept, or nullopt when the rule had
    // an empty rbody and was carried over unchanged
    std::vector<std::optional<std::size_t>> kept;
};

enum class EnumerationEnd { completed, capped, stopped };

// Number of linear versions, saturating at `limit`.
inline std::size_t linear_version_count(const BodyClassification& bodies,
                                        std::size_t limit = static_cast<std::size_t>(-1)) {
    std::size_t n = 1;
    for (const auto& bc : bodies) {
        if (bc.rbody.empty()) continue;
        if (n > limit / bc.rbody.size()) return limit;
        n *= bc.rbody.size();
    }
    return std::min(n, limit);
}

inline LinearProgram make_linear_version(const Program& p, const BodyClassification& bodies,
                                         const std::vector<std::optional<std::size_t>>& kept) {
    std::vector<Rule> rules;
    for (const auto& r : p.rules()) {
        const auto& k = kept.at(r.id);
        if (!k) {
            rules.push_back(r);
            continue;
        }
        if (std::find(bodies[r.id].rbody.begin(), bodies[r.id].rbody.end(), *k) ==
            bodies[r.id].rbody.end())
            throw std::invalid_argument("kept atom of r" + std::to_string(r.id) + " is not in rbody");
        Rule n;
        n.head = r.head;
        n.body = {r.body[*k]};
        n.span = r.span;
        rules.push_back(std::move(n));
    }
    return {Program(std::move(rules)), kept};
}

// Cartesian product over the rules with non-empty rbody, last rule varying
// fastest. `visit` returns false to stop early.
inline EnumerationEnd for_each_linear_version(const Program& p, const BodyClassification& bodies,
                                              std::size_t cap,
                                              const std::function<bool(const LinearProgram&)>& visit) {
    std::vector<std::size_t> choosers;
    for (std::size_t r = 0; r < bodies.size(); ++r)
        if (!bodies[r].rbody.empty()) choosers.push_back(r);
    std::vector<std::size_t> odometer(choosers.size(), 0);
    std::size_t produced = 0;
    for (;;) {
        if (produced == cap) return EnumerationEnd::capped;
        std::vector<std::optional<std::size_t>> kept(p.size());
        for (std::size_t i = 0; i < choosers.size(); ++i)
            kept[choosers[i]] = bodies[choosers[i]].rbody[odometer[i]];
        ++produced;
        if (!visit(make_linear_version(p, bodies, kept))) return EnumerationEnd::stopped;

        std::size_t i = choosers.size();
        while (i > 0 && odometer[i - 1] + 1 == bodies[choosers[i - 1]].rbody.size())
            odometer[--i] = 0;
        if (i == 0) return EnumerationEnd::completed;
        ++odometer[i - 1];
    }
}

inline std::vector<LinearProgram> linear_versions(const Program& p, std::size_t cap = 256) {
    auto a = analyze_structure(p);
    std::vector<LinearProgram> out;
    if (for_each_linear_version(p, a.bodies, cap, [&](const LinearProgram& l) {
            out.push_back(l);
            return true;
        }) == EnumerationEnd::capped &&
        linear_version_count(a.bodies, cap + 1) > cap)
        throw std::length_error("more than " + std::to_string(cap) + " linear versions");
    return out;
}

// ---------------------------------------------------------------------------
// Basic cyclic paths
// ---------------------------------------------------------------------------

namespace detail {
struct CycleSearch {
    const FiringGraph& g;
    const std::vector<bool>& allowed;
    std::size_t cap;
    const std::function<bool(const std::vector<std::size_t>&)>& visit;
    std::vector<bool> used;
    std::vector<std::size_t> nodes;
    std::size_t found = 0;
    EnumerationEnd end = EnumerationEnd::completed;

    // returns false once enumeration must stop
    bool extend(std::size_t at, std::size_t start) {
        for (auto ei : g.out_edges(at)) {
            if (used[ei]) continue;
            const auto& e = g.edges()[ei];
            if (!allowed[e.to]) continue;
            used[ei] = true;
            bool go_on = true;
            if (e.to == start) {
                if (found == cap) {
                    end = EnumerationEnd::capped;
                    go_on = false;
                } else {
                    ++found;
                    if (!visit(nodes)) {
                        end = EnumerationEnd::stopped;
                        go_on = false;
                    }
                }
            }
            if (go_on) {
                nodes.push_back(e.to);
                go_on = extend(e.to, start);
                nodes.pop_back();
            }
            used[ei] = false;
            if (!go_on) return false;
        }
        return true;
    }
};
}  // namespace detail

// Edge-distinct cycles anchored at every starting edge, so each rotation of a
// cycle is reported separately. A path r1..rn stands for the edges
// <r1,r2>, ..., <rn,r1>. Nodes outside `allowed` (empty = all) are skipped.
inline EnumerationEnd for_each_basic_cycle(const FiringGraph& g, std::vector<bool> allowed,
                                           std::size_t cap,
                                           const std::function<bool(const std::vector<std::size_t>&)>& visit) {
    if (allowed.empty()) allowed.assign(g.node_count(), true);
    detail::CycleSearch s{g, allowed, cap, visit, std::vector<bool>(g.edges().size(), false), {}};
    for (std::size_t ei = 0; ei < g.edges().size(); ++ei) {
        const auto& e = g.edges()[ei];
        if (!allowed[e.from] || !allowed[e.to]) continue;
        s.used[ei] = true;
        s.nodes = {e.from};
        bool go_on = true;
        if (e.to == e.from) {
            if (s.found == cap) {
                s.end = EnumerationEnd::capped;
                go_on = false;
            } else {
                ++s.found;
                if (!visit(s.nodes)) {
                    s.end = EnumerationEnd::stopped;
                    go_on = false;
                }
            }
        }
        if (go_on) {
            s.nodes.push_back(e.to);
            go_on = s.extend(e.to, e.from);
        }
        s.used[ei] = false;
        if (!go_on) return s.end;
    }
    return EnumerationEnd::completed;
}

struct CyclePaths {
    std::vector<std::vector<std::size_t>> paths;
    bool capped = false;
};

inline CyclePaths basic_cyclic_paths(const FiringGraph& g, std::size_t cap = 10000,
                                     const std::vector<bool>& allowed = {}) {
    CyclePaths out;
    out.capped = for_each_basic_cycle(g, allowed, cap, [&](const std::vector<std::size_t>& p) {
                     out.paths.push_back(p);
                     return true;
                 }) == EnumerationEnd::capped;
    return out;
}

// ---------------------------------------------------------------------------
// Paths, eq(pi) and the per-path check
// ---------------------------------------------------------------------------

struct CyclicPath {
    std::vector<std::size_t> rules;  // r1..rn
    std::vector<Rule> renamed;       // step i renamed with tag i (1-based)
    std::vector<Atom> rbody;         // the mutually recursive body atom of each step
    std::vector<Substitution> mgus;  // theta_i for i < n
};

inline CyclicPath make_cyclic_path(const Program& lin, const BodyClassification& bodies,
                                   const std::vector<std::size_t>& rules) {
    if (rules.empty()) throw std::invalid_argument("empty cyclic path");
    CyclicPath pi;
    pi.rules = rules;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        const auto& rb = bodies.at(rules[i]).rbody;
        if (rb.size() != 1)
            throw std::logic_error("rule r" + std::to_string(rules[i]) + " on a path is not linear");
        pi.renamed.push_back(rename_apart(lin[rules[i]], static_cast<int>(i + 1)));
        pi.rbody.push_back(pi.renamed.back().body[rb.front()]);
    }
    for (std::size_t i = 0; i + 1 < rules.size(); ++i) {
        auto theta = mgu(pi.renamed[i].head_atom(), pi.rbody[i + 1]);
        if (!theta)
            throw std::logic_error("no mgu along edge <r" + std::to_string(rules[i]) + ",r" +
                                   std::to_string(rules[i + 1]) + ">");
        pi.mgus.push_back(std::move(*theta));
    }
    return pi;
}

// One equality x = size(t) per binding X/t of every theta_i.
inline LinearSystem path_equalities(const CyclicPath& pi) {
    LinearSystem sys;
    for (const auto& theta : pi.mgus)
        for (const auto& [v, t] : theta)
            sys.constraints.push_back(LinearConstraint::eq(LinExpr::variable(natural_variable(v)),
                                                           LinExpr::from_size(term_size(t))));
    return sys;
}

// w_k = size(rbody(r1))[k] - size(head(rn))[k]
inline std::vector<LinExpr> path_w(const CyclicPath& pi) {
    auto body = atom_size_vector(pi.rbody.front());
    auto head = atom_size_vector(pi.renamed.back().head_atom());
    if (body.size() != head.size()) throw std::logic_error("closing edge joins different arities");
    std::vector<LinExpr> w;
    for (std::size_t k = 0; k < body.size(); ++k)
        w.push_back(LinExpr::from_size(body[k]) - LinExpr::from_size(head[k]));
    return w;
}

enum class PathStatus { cycle_bounded, fail_eq_unsat, fail_complement, unknown };

inline const char* to_string(PathStatus s) {
    switch (s) {
        case PathStatus::cycle_bounded: return "CYCLE_BOUNDED";
        case PathStatus::fail_eq_unsat: return "FAIL_EQ_UNSAT";
        case PathStatus::fail_complement: return "FAIL_COMPLEMENT";
        case PathStatus::unknown: return "UNKNOWN";
    }
    return "?";
}

struct PathVerdict {
    PathStatus status = PathStatus::unknown;
    LinearSystem eq;
    std::vector<LinExpr> w;
    // FAIL_COMPLEMENT: 0-based index j and the rational solution
    std::optional<std::size_t> j;
    Assignment witness;
    bool integrality_unverified = false;
    // direct alpha witness found by substituting eq(pi) into the w's
    GroupedInequality direct;
    std::optional<AlphaAssignment> alpha;
    // false when the direct search and the complement procedure disagree
    bool agrees = true;
    std::string reason;
};

// eq(pi) together with w_i <= 0 for all i and w_j < 0.
inline LinearSystem complement_system(const LinearSystem& eq, const std::vector<LinExpr>& w,
                                      std::size_t j) {
    LinearSystem sys = eq;
    for (std::size_t i = 0; i < w.size(); ++i)
        sys.constraints.push_back(i == j ? LinearConstraint::lt(w[i]) : LinearConstraint::le(w[i]));
    return sys;
}

namespace detail {
inline void direct_alpha(const CyclicPath& pi, PathVerdict& v, const SolverOptions& opt) {
    std::vector<LinExpr> eqs;
    for (const auto& c : v.eq.constraints) eqs.push_back(c.expr);
    // pivot on the bound side of each x = size(t)
    std::vector<std::string> bound;
    for (const auto& theta : pi.mgus)
        for (const auto& [var, _] : theta) bound.push_back(natural_variable(var));
    auto elim = eliminate_equalities(eqs, bound);
    if (!elim.consistent) return;
    auto alphas = alpha_names(pi.renamed.back().head_atom().key());
    GroupedInequality g;
    for (std::size_t k = 0; k < v.w.size(); ++k) {
        LinExpr wk = v.w[k];
        for (const auto& [x, repl] : elim.solved) wk = wk.substitute(x, repl);
        for (const auto& [x, c] : wk.coefficients()) g.groups[x].add(alphas[k], c);
        g.constant_group.add(alphas[k], wk.constant());
    }
    std::erase_if(g.groups, [](const auto& kv) { return kv.second.is_zero(); });
    v.direct = g;
    v.alpha = feasible_alpha(forall_reduction(g), alphas, opt);
}
}  // namespace detail

struct CycleOptions {
    std::size_t max_linear_versions = 256;
    std::size_t max_paths = 10000;
    // treat FAIL_EQ_UNSAT paths as bounded (deviates from the definition)
    bool vacuous_bounded = false;
    SolverOptions solver{};
};

inline PathVerdict check_path(const CyclicPath& pi, const SolverOptions& opt = {}) {
    PathVerdict v;
    v.eq = path_equalities(pi);
    v.w = path_w(pi);
    try {
        if (!satisfiable_nonneg(v.eq, opt)) {
            v.status = PathStatus::fail_eq_unsat;
            v.reason = "eq(pi) has no non-negative solution";
            return v;
        }
        for (std::size_t j = 0; j < v.w.size(); ++j) {
            if (auto sol = satisfiable_nonneg(complement_system(v.eq, v.w, j), opt)) {
                v.status = PathStatus::fail_complement;
                v.j = j;
                v.witness = std::move(*sol);
                for (const auto& [x, q] : v.witness)
                    if (!is_integral(q)) v.integrality_unverified = true;
                v.reason = "w_" + std::to_string(j + 1) + " < 0 with every w_i <= 0 is satisfiable";
                break;
            }
        }
        detail::direct_alpha(pi, v, opt);
    } catch (const SolverLimit& e) {
        v.status = PathStatus::unknown;
        v.reason = e.what();
        return v;
    }
    if (v.status == PathStatus::unknown) v.status = PathStatus::cycle_bounded;
    v.agrees = (v.status == PathStatus::cycle_bounded) == v.alpha.has_value();
    return v;
}

// Re-checks a FAIL_COMPLEMENT witness in exact arithmetic.
inline bool complement_witness_holds(const PathVerdict& v) {
    if (v.status != PathStatus::fail_complement || !v.j) return false;
    auto sys = complement_system(v.eq, v.w, *v.j);
    for (const auto& x : sys.variables()) {
        auto it = v.witness.find(x);
        if (it == v.witness.end() || it->second < 0) return false;
    }
    return sys.holds(v.witness);
}

// ---------------------------------------------------------------------------
// Program level
// ---------------------------------------------------------------------------

struct PathReport {
    std::size_t version = 0;
    std::vector<std::optional<std::size_t>> kept;
    CyclicPath path;
    PathVerdict verdict;
};

struct CycleBoundedVerdict {
    BoundStatus status = BoundStatus::bounded;
    std::size_t linear_versions_checked = 0;
    std::size_t paths_checked = 0;
    std::optional<PathReport> failure;
    // first `max_reported` checked paths, in enumeration order
    std::vector<PathReport> paths;
    std::size_t disagreements = 0;
    std::size_t vacuous_paths = 0;
    std::string reason;
};

inline CycleBoundedVerdict check_program_cycle_bounded(const Program& p,
                                                       const CycleOptions& opt = {},
                                                       std::size_t max_reported = 64) {
    auto a = analyze_structure(p);
    CycleBoundedVerdict out;
    bool unknown = false;
    std::string unknown_reason;

    auto versions_end = for_each_linear_version(p, a.bodies, opt.max_linear_versions,
        [&](const LinearProgram& lin) {
            std::size_t version = out.linear_versions_checked++;
            auto la = analyze_structure(lin.program);
            std::vector<bool> relevant(lin.program.size());
            for (std::size_t r = 0; r < relevant.size(); ++r) relevant[r] = la.bodies[r].relevant;

            auto paths_end = for_each_basic_cycle(la.graph, relevant, opt.max_paths,
                [&](const std::vector<std::size_t>& nodes) {
                    PathReport rep{version, lin.kept, make_cyclic_path(lin.program, la.bodies, nodes), {}};
                    rep.verdict = check_path(rep.path, opt.solver);
                    ++out.paths_checked;
                    if (!rep.verdict.agrees) ++out.disagreements;
                    bool failed = false;
                    switch (rep.verdict.status) {
                        case PathStatus::cycle_bounded: break;
                        case PathStatus::unknown:
                            unknown = true;
                            unknown_reason = rep.verdict.reason;
                            break;
                        case PathStatus::fail_eq_unsat:
                            if (opt.vacuous_bounded) ++out.vacuous_paths;
                            else failed = true;
                            break;
                        case PathStatus::fail_complement: failed = true; break;
                    }
                    if (out.paths.size() < max_reported) out.paths.push_back(rep);
                    if (failed) out.failure = std::move(rep);
                    return !failed;
                });
            if (paths_end == EnumerationEnd::capped) {
                unknown = true;
                unknown_reason = "more than " + std::to_string(opt.max_paths) +
                                 " basic cyclic paths in linear version " + std::to_string(version);
            }
            return !out.failure;
        });
    if (versions_end == EnumerationEnd::capped &&
        linear_version_count(a.bodies, opt.max_linear_versions + 1) > opt.max_linear_versions) {
        unknown = true;
        unknown_reason = "more than " + std::to_string(opt.max_linear_versions) + " linear versions";
    }

    if (out.failure) {
        out.status = BoundStatus::unbounded;
        out.reason = out.failure->verdict.reason;
    } else if (unknown) {
        out.status = BoundStatus::unknown;
        out.reason = unknown_reason;
    } else {
        out.status = BoundStatus::bounded;
    }
    return out;
}

inline std::string render_path(const CyclicPath& pi) {
    std::string out;
    for (auto r : pi.rules) out += "r" + std::to_string(r) + " -> ";
    return out + "r" + std::to_string(pi.rules.front());
}

// LP-like dump of eq(pi), the w's and every complement system.
inline std::string dump_path(const CyclicPath& pi, const PathVerdict& v) {
    std::string out = dump_system(v.eq, "eq(pi) for " + render_path(pi));
    for (std::size_t k = 0; k < v.w.size(); ++k)
        out += "# w" + std::to_string(k + 1) + " = " + render_linexpr(v.w[k]) + "\n";
    for (std::size_t j = 0; j < v.w.size(); ++j)
        out += dump_system(complement_system(v.eq, v.w, j),
                           "complement j=" + std::to_string(j + 1));
    return out;
}

}  // namespace lpterm
