#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "graph.hpp"
#include "linsolve.hpp"
#include "size.hpp"
#include "term.hpp"

namespace lpterm {

enum class BoundStatus { bounded, unbounded, unknown, skipped_trivial };

inline const char* to_string(BoundStatus s) {
    switch (s) {
        case BoundStatus::bounded: return "BOUNDED";
        case BoundStatus::unbounded: return "UNBOUNDED";
        case BoundStatus::unknown: return "UNKNOWN";
        case BoundStatus::skipped_trivial: return "SKIPPED_TRIVIAL";
    }
    return "?";
}

class EmptySrbody : public std::runtime_error {
public:
    explicit EmptySrbody(std::size_t rule)
        : std::runtime_error("relevant rule r" + std::to_string(rule) + " has empty srbody"),
          rule_(rule) {}
    std::size_t rule() const { return rule_; }

private:
    std::size_t rule_;
};

struct RuleBoundedOptions {
    std::size_t max_choices = 4096;
    SolverOptions solver{};
};

// rule id -> position of the chosen srbody atom
using SrbodyChoice = std::map<std::size_t, std::size_t>;

struct SccRuleBounded {
    std::size_t component = 0;
    std::vector<std::size_t> rules;
    std::vector<std::size_t> relevant_rules;
    BoundStatus status = BoundStatus::skipped_trivial;
    // witness (bounded) or the first system tried (unbounded)
    SrbodyChoice choice;
    std::vector<GroupedInequality> grouped;
    std::vector<LinearConstraint> constraints;
    AlphaAssignment alpha;
    std::size_t choices_tried = 0;
    std::optional<std::size_t> empty_srbody_rule;
    std::string reason;
};

struct RuleBoundedVerdict {
    BoundStatus status = BoundStatus::bounded;
    std::vector<SccRuleBounded> sccs;
};

// alpha_pj . size(B) - alpha_pi . size(head) >= 0 for every relevant rule of
// the component, B the chosen srbody atom.
inline std::vector<BilinearInequality> scc_constraint_system(const Program& p,
                                                             const ProgramAnalysis& a,
                                                             std::size_t component,
                                                             const SrbodyChoice& choice) {
    std::vector<BilinearInequality> out;
    for (auto r : a.sccs.components.at(component)) {
        const BodyClass& bc = a.bodies[r];
        if (!bc.relevant) continue;
        if (bc.srbody.empty()) throw EmptySrbody(r);
        auto it = choice.find(r);
        if (it == choice.end() ||
            std::find(bc.srbody.begin(), bc.srbody.end(), it->second) == bc.srbody.end())
            throw std::invalid_argument("choice for r" + std::to_string(r) +
                                        " is not an srbody atom");
        const Atom& head = p[r].head_atom();
        const Atom& body = p[r].body[it->second];
        out.push_back({body.key(), atom_size_vector(body), head.key(), atom_size_vector(head)});
    }
    return out;
}

namespace detail {
inline std::vector<std::string> component_alpha_names(const SccInfo& s, std::size_t c) {
    std::vector<std::string> out;
    for (const auto& p : s.predicates.at(c))
        for (auto& n : alpha_names(p)) out.push_back(std::move(n));
    return out;
}

inline std::vector<LinearConstraint> reduce_all(const std::vector<GroupedInequality>& gs) {
    std::vector<LinearConstraint> out;
    for (const auto& g : gs)
        for (auto& c : forall_reduction(g)) out.push_back(std::move(c));
    return out;
}
}  // namespace detail

// Enumerates srbody choices (rules in id order, atoms in body order, last rule
// varying fastest) until one admits a positive-integer alpha.
inline SccRuleBounded check_scc_rule_bounded(const Program& p, const ProgramAnalysis& a,
                                             std::size_t component,
                                             const RuleBoundedOptions& opt = {}) {
    SccRuleBounded out;
    out.component = component;
    out.rules = a.sccs.components.at(component);
    if (!a.sccs.nontrivial.at(component)) {
        out.status = BoundStatus::skipped_trivial;
        return out;
    }
    for (auto r : out.rules) {
        if (!a.bodies[r].relevant) continue;
        out.relevant_rules.push_back(r);
        if (a.bodies[r].srbody.empty()) {
            out.status = BoundStatus::unbounded;
            out.empty_srbody_rule = r;
            out.reason = "relevant rule r" + std::to_string(r) + " has no srbody atom";
            return out;
        }
    }
    auto alphas = detail::component_alpha_names(a.sccs, component);

    std::vector<std::size_t> odometer(out.relevant_rules.size(), 0);
    for (;;) {
        if (out.choices_tried == opt.max_choices) {
            out.status = BoundStatus::unknown;
            out.reason = "choice cap of " + std::to_string(opt.max_choices) + " systems exceeded";
            return out;
        }
        SrbodyChoice choice;
        for (std::size_t i = 0; i < odometer.size(); ++i) {
            auto r = out.relevant_rules[i];
            choice[r] = a.bodies[r].srbody[odometer[i]];
        }
        std::vector<GroupedInequality> grouped;
        for (const auto& b : scc_constraint_system(p, a, component, choice))
            grouped.push_back(group_by_variable(b));
        auto constraints = detail::reduce_all(grouped);
        ++out.choices_tried;

        std::optional<AlphaAssignment> alpha;
        try {
            alpha = feasible_alpha(constraints, alphas, opt.solver);
        } catch (const SolverLimit& e) {
            out.status = BoundStatus::unknown;
            out.reason = e.what();
            out.choice = choice;
            out.grouped = std::move(grouped);
            out.constraints = std::move(constraints);
            return out;
        }
        if (alpha || out.choices_tried == 1) {
            out.choice = choice;
            out.grouped = std::move(grouped);
            out.constraints = std::move(constraints);
        }
        if (alpha) {
            out.status = BoundStatus::bounded;
            out.alpha = std::move(*alpha);
            return out;
        }

        std::size_t i = odometer.size();
        while (i > 0 && odometer[i - 1] + 1 == a.bodies[out.relevant_rules[i - 1]].srbody.size())
            odometer[--i] = 0;
        if (i == 0) break;
        ++odometer[i - 1];
    }
    out.status = BoundStatus::unbounded;
    out.reason = "no positive integer alpha for any of " + std::to_string(out.choices_tried) +
                 " srbody choice(s)";
    return out;
}

inline RuleBoundedVerdict check_program_rule_bounded(const Program& p, const ProgramAnalysis& a,
                                                     const RuleBoundedOptions& opt = {}) {
    RuleBoundedVerdict v;
    bool unknown = false, unbounded = false;
    for (std::size_t c = 0; c < a.sccs.components.size(); ++c) {
        v.sccs.push_back(check_scc_rule_bounded(p, a, c, opt));
        unknown = unknown || v.sccs.back().status == BoundStatus::unknown;
        unbounded = unbounded || v.sccs.back().status == BoundStatus::unbounded;
    }
    v.status = unbounded ? BoundStatus::unbounded
               : unknown ? BoundStatus::unknown
                         : BoundStatus::bounded;
    return v;
}

inline RuleBoundedVerdict check_program_rule_bounded(const Program& p,
                                                     const RuleBoundedOptions& opt = {}) {
    return check_program_rule_bounded(p, analyze_structure(p), opt);
}

// Re-evaluates every grouped inequality of a bounded component at its alpha.
inline bool witness_verifies(const SccRuleBounded& s) {
    return s.status == BoundStatus::bounded && verifies(s.constraints, s.alpha);
}

// ---------------------------------------------------------------------------
// Size-bounded programs and program expansion
// ---------------------------------------------------------------------------

struct SizeBoundedVerdict {
    bool size_bounded = true;
    // per rule: the sbody position whose total size dominates the head
    std::vector<std::optional<std::size_t>> witness;
    std::optional<std::size_t> failing_rule;
};

// tsize(B) - tsize(head) >= 0 for all non-negative naturals iff every
// coefficient and the constant are non-negative.
inline bool dominates_total_size(const Atom& body, const Atom& head) {
    LinExpr d = LinExpr::from_size(atom_total_size(body)) - LinExpr::from_size(atom_total_size(head));
    if (d.constant() < 0) return false;
    for (const auto& [x, c] : d.coefficients())
        if (c < 0) return false;
    return true;
}

inline SizeBoundedVerdict check_size_bounded(const Program& p) {
    require_positive_normal(p);
    SizeBoundedVerdict v;
    v.witness.resize(p.size());
    for (const auto& r : p.rules()) {
        if (r.is_fact()) continue;
        const Atom& head = r.head_atom();
        auto head_vars = variables_of(head);
        for (std::size_t i = 0; i < r.body.size() && !v.witness[r.id]; ++i) {
            const Atom& b = r.body[i];
            if (b.is_builtin()) continue;
            auto bv = variables_of(b);
            if (!std::includes(bv.begin(), bv.end(), head_vars.begin(), head_vars.end())) continue;
            if (dominates_total_size(b, head)) v.witness[r.id] = i;
        }
        if (!v.witness[r.id] && v.size_bounded) {
            v.size_bounded = false;
            v.failing_rule = r.id;
        }
    }
    return v;
}

// predicate name -> positive weight per argument
using ExpansionWeights = std::map<std::string, std::vector<std::size_t>>;

// Every argument t_j of an atom over a weighted predicate is repeated
// weights[p][j] times.
inline Program expand_program(const Program& p, const ExpansionWeights& w) {
    for (const auto& [key, _] : p.defining_rules())
        if (!w.count(key.name))
            throw std::invalid_argument("no expansion weights for " + key.display());
    auto expand = [&](const Atom& a) {
        if (a.is_builtin()) return a;
        auto it = w.find(a.predicate);
        if (it == w.end()) return a;
        if (it->second.size() != a.arity())
            throw std::invalid_argument("expansion weights for " + a.predicate +
                                        " do not match its arity");
        Atom out{a.predicate, {}, Builtin::none};
        for (std::size_t j = 0; j < a.arity(); ++j) {
            if (it->second[j] == 0) throw std::invalid_argument("expansion weight must be positive");
            for (std::size_t k = 0; k < it->second[j]; ++k) out.args.push_back(a.args[j]);
        }
        return out;
    };
    std::vector<Rule> rules;
    for (const auto& r : p.rules()) {
        Rule n = r;
        for (auto* part : {&n.head, &n.body, &n.negative_body})
            for (auto& atom : *part) atom = expand(atom);
        rules.push_back(std::move(n));
    }
    return Program(std::move(rules));
}

inline ExpansionWeights weights_from_alpha(const AlphaAssignment& alpha,
                                           const std::set<PredicateKey>& preds) {
    ExpansionWeights w;
    for (const auto& p : preds) {
        auto& v = w[p.name];
        for (const auto& n : alpha_names(p)) v.push_back(alpha.at(n).convert_to<std::size_t>());
    }
    return w;
}

// Rel(C): the relevant rules of a component as a program of their own.
inline Program relevant_subprogram(const Program& p, const ProgramAnalysis& a,
                                   std::size_t component) {
    std::vector<Rule> rules;
    for (auto r : a.sccs.components.at(component))
        if (a.bodies[r].relevant) rules.push_back(p[r]);
    return Program(std::move(rules));
}

}  // namespace lpterm
