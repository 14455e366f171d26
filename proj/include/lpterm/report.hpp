#pragma once

#include <limits>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cycle_bounded.hpp"
#include "evaluator.hpp"
#include "parser.hpp"
#include "rule_bounded.hpp"

namespace lpterm {

inline constexpr int report_schema_version = 1;

inline const char* rule_verdict_name(BoundStatus s) {
    switch (s) {
        case BoundStatus::bounded: return "RULE_BOUNDED";
        case BoundStatus::unbounded: return "NOT_RULE_BOUNDED";
        default: return "UNKNOWN";
    }
}

inline const char* cycle_verdict_name(BoundStatus s) {
    switch (s) {
        case BoundStatus::bounded: return "CYCLE_BOUNDED";
        case BoundStatus::unbounded: return "NOT_CYCLE_BOUNDED";
        default: return "UNKNOWN";
    }
}

namespace detail {
inline nlohmann::json integer_json(const Integer& v) {
    if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
        return v.convert_to<std::int64_t>();
    return v.str();
}

inline std::string rational_text(const Rational& q) {
    if (is_integral(q)) return boost::multiprecision::numerator(q).str();
    return boost::multiprecision::numerator(q).str() + "/" + boost::multiprecision::denominator(q).str();
}

// {"bub": [1, 1, 1], ...} over the given predicates
inline nlohmann::json alpha_json(const AlphaAssignment& alpha, const std::set<PredicateKey>& preds) {
    nlohmann::json out = nlohmann::json::object();
    for (const auto& p : preds) {
        nlohmann::json v = nlohmann::json::array();
        for (const auto& n : alpha_names(p)) {
            auto it = alpha.find(n);
            v.push_back(it == alpha.end() ? nlohmann::json(nullptr) : integer_json(it->second));
        }
        out[p.name] = std::move(v);
    }
    return out;
}

inline std::vector<std::string> render_constraints(const std::vector<LinearConstraint>& cs) {
    std::vector<std::string> out;
    for (const auto& c : cs) out.push_back(render_constraint(c));
    return out;
}
}  // namespace detail

inline nlohmann::json scc_json(const Program& p, const ProgramAnalysis& a, const SccRuleBounded& s) {
    nlohmann::json j;
    j["component"] = s.component;
    j["rules"] = s.rules;
    j["nontrivial"] = static_cast<bool>(a.sccs.nontrivial[s.component]);
    j["status"] = to_string(s.status);
    if (s.status == BoundStatus::skipped_trivial) return j;
    j["relevant_rules"] = s.relevant_rules;
    j["choices_tried"] = s.choices_tried;
    nlohmann::json choice = nlohmann::json::object();
    for (const auto& [r, pos] : s.choice) choice["r" + std::to_string(r)] = render_atom(p[r].body[pos]);
    j["choice"] = std::move(choice);
    std::vector<std::string> grouped;
    for (const auto& g : s.grouped) grouped.push_back(render_grouped(g));
    j["grouped"] = grouped;
    j["constraints"] = detail::render_constraints(s.constraints);
    j["alpha"] = s.status == BoundStatus::bounded
                     ? detail::alpha_json(s.alpha, a.sccs.predicates[s.component])
                     : nlohmann::json(nullptr);
    if (s.empty_srbody_rule) j["empty_srbody_rule"] = *s.empty_srbody_rule;
    if (!s.reason.empty()) j["reason"] = s.reason;
    return j;
}

inline nlohmann::json rule_bounded_json(const Program& p, const ProgramAnalysis& a,
                                        const RuleBoundedVerdict& v) {
    nlohmann::json j;
    j["verdict"] = rule_verdict_name(v.status);
    std::string reason;
    for (const auto& s : v.sccs)
        if (s.status == v.status && !s.reason.empty()) {
            reason = "C" + std::to_string(s.component) + ": " + s.reason;
            break;
        }
    j["reason"] = reason;
    j["sccs"] = nlohmann::json::array();
    for (const auto& s : v.sccs) j["sccs"].push_back(scc_json(p, a, s));
    return j;
}

inline nlohmann::json path_json(const PathReport& r) {
    const auto& v = r.verdict;
    nlohmann::json j;
    j["version"] = r.version;
    j["rules"] = r.path.rules;
    j["status"] = to_string(v.status);
    j["eq"] = detail::render_constraints(v.eq.constraints);
    std::vector<std::string> w;
    for (const auto& e : v.w) w.push_back(render_linexpr(e));
    j["w"] = w;
    j["j"] = v.j ? nlohmann::json(*v.j + 1) : nlohmann::json(nullptr);
    nlohmann::json witness = nlohmann::json::object();
    for (const auto& [x, q] : v.witness) witness[x] = detail::rational_text(q);
    j["witness"] = std::move(witness);
    j["integrality_unverified"] = v.integrality_unverified;
    if (v.alpha) {
        std::set<PredicateKey> pred{r.path.renamed.back().head_atom().key()};
        j["alpha"] = detail::alpha_json(*v.alpha, pred);
    } else {
        j["alpha"] = nullptr;
    }
    j["agrees"] = v.agrees;
    if (!v.reason.empty()) j["reason"] = v.reason;
    return j;
}

inline nlohmann::json cycle_bounded_json(const CycleBoundedVerdict& v, const CycleOptions& opt) {
    nlohmann::json j;
    j["verdict"] = cycle_verdict_name(v.status);
    j["reason"] = v.reason;
    j["linear_versions_checked"] = v.linear_versions_checked;
    j["paths_checked"] = v.paths_checked;
    j["vacuous_cycles"] = opt.vacuous_bounded ? "bounded" : "fail";
    j["vacuous_paths"] = v.vacuous_paths;
    j["disagreements"] = v.disagreements;
    j["failure"] = v.failure ? path_json(*v.failure) : nlohmann::json(nullptr);
    j["paths"] = nlohmann::json::array();
    for (const auto& r : v.paths) j["paths"].push_back(path_json(r));
    return j;
}

inline nlohmann::json eval_json(const EvalOutcome& o) {
    nlohmann::json j;
    j["status"] = o.status == EvalStatus::fixpoint ? "FIXPOINT" : "BUDGET_EXCEEDED";
    j["budget"] = o.status == EvalStatus::fixpoint ? nlohmann::json(nullptr) : nlohmann::json(to_string(o.exceeded));
    j["iterations"] = o.iterations;
    j["atoms"] = o.model.size();
    j["max_term_size"] = o.max_term_size;
    std::vector<std::string> model;
    for (const auto& a : o.model.sorted()) model.push_back(render_atom(a));
    j["model"] = model;
    return j;
}

}  // namespace lpterm
