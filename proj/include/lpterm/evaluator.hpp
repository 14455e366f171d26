#pragma once

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "graph.hpp"
#include "size.hpp"
#include "term.hpp"

namespace lpterm {

// Ground atoms, deduplicated by structural hash, indexed by predicate and by
// the top functor of the first argument.
class FactStore {
public:
    FactStore() = default;
    explicit FactStore(const std::vector<Atom>& atoms) {
        for (const auto& a : atoms) insert(a);
    }

    bool insert(const Atom& a) {
        if (!a.is_ground()) throw std::logic_error("non-ground atom " + a.predicate + " in fact store");
        if (a.is_builtin()) throw std::invalid_argument("builtin atom in fact store");
        if (!set_.insert(a).second) return false;
        std::size_t i = atoms_.size();
        atoms_.push_back(a);
        by_pred_[a.key()].push_back(i);
        if (a.arity() > 0) by_first_[{a.key(), functor_of(a.args[0])}].push_back(i);
        return true;
    }

    bool contains(const Atom& a) const { return set_.count(a) > 0; }
    std::size_t size() const { return atoms_.size(); }
    bool empty() const { return atoms_.empty(); }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const Atom& operator[](std::size_t i) const { return atoms_[i]; }

    // indices of atoms that can match `pattern`, whose first argument has
    // already been instantiated as far as possible
    const std::vector<std::size_t>& candidates(const Atom& pattern) const {
        static const std::vector<std::size_t> none;
        if (pattern.arity() > 0 && !pattern.args[0].is_variable()) {
            auto it = by_first_.find({pattern.key(), functor_of(pattern.args[0])});
            return it == by_first_.end() ? none : it->second;
        }
        auto it = by_pred_.find(pattern.key());
        return it == by_pred_.end() ? none : it->second;
    }

    std::vector<Atom> sorted() const {
        auto out = atoms_;
        std::sort(out.begin(), out.end(), [](const Atom& a, const Atom& b) { return atom_order(a, b) < 0; });
        return out;
    }

    friend bool operator==(const FactStore& a, const FactStore& b) { return a.set_ == b.set_; }

private:
    using Functor = std::pair<std::string, std::size_t>;
    static Functor functor_of(const Term& t) { return {t.name(), t.arity()}; }

    std::unordered_set<Atom, AtomHash> set_;
    std::vector<Atom> atoms_;
    std::map<PredicateKey, std::vector<std::size_t>> by_pred_;
    std::map<std::pair<PredicateKey, Functor>, std::vector<std::size_t>> by_first_;
};

struct EvalBudget {
    std::size_t max_iterations = 10000;
    std::size_t max_derived_atoms = 1000000;
    std::int64_t max_ground_term_size = 10000;
    std::int64_t wall_clock_ms = 30000;
};

enum class EvalStatus { fixpoint, budget_exceeded };
enum class BudgetKind { none, iterations, atoms, term_size, wall_clock };

inline const char* to_string(BudgetKind b) {
    switch (b) {
        case BudgetKind::none: return "none";
        case BudgetKind::iterations: return "iterations";
        case BudgetKind::atoms: return "atoms";
        case BudgetKind::term_size: return "term_size";
        case BudgetKind::wall_clock: return "wall_clock";
    }
    return "?";
}

struct EvalOutcome {
    EvalStatus status = EvalStatus::fixpoint;
    BudgetKind exceeded = BudgetKind::none;
    FactStore model;  // the partial store when a budget tripped
    std::size_t iterations = 0;
    std::int64_t max_term_size = 0;
};

// One-way matching of a rule atom against a ground atom.
inline bool match_term(const Term& pattern, const Term& ground, Substitution& s) {
    if (pattern.is_variable()) {
        if (const Term* b = s.lookup(pattern.var())) return *b == ground;
        s.bind(pattern.var(), ground);
        return true;
    }
    if (pattern.is_ground()) return pattern == ground;
    if (pattern.name() != ground.name() || pattern.arity() != ground.arity()) return false;
    for (std::size_t i = 0; i < pattern.arity(); ++i)
        if (!match_term(pattern.args()[i], ground.args()[i], s)) return false;
    return true;
}

inline bool match_atom(const Atom& pattern, const Atom& ground, Substitution& s) {
    if (pattern.predicate != ground.predicate || pattern.arity() != ground.arity()) return false;
    for (std::size_t i = 0; i < pattern.arity(); ++i)
        if (!match_term(pattern.args[i], ground.args[i], s)) return false;
    return true;
}

inline bool eval_builtin(const Atom& a) {
    if (!a.is_ground()) throw std::logic_error("builtin evaluated before its variables are bound");
    auto c = term_order(a.args[0], a.args[1]);
    switch (a.builtin) {
        case Builtin::lt: return c < 0;
        case Builtin::le: return c <= 0;
        case Builtin::gt: return c > 0;
        case Builtin::ge: return c >= 0;
        case Builtin::eq: return c == 0;
        case Builtin::ne: return c != 0;
        case Builtin::none: break;
    }
    throw std::logic_error("not a builtin");
}

namespace detail {

// Which part of the store a body position draws from.
enum class Source { old_only, delta_only, full };

struct Join {
    const Rule& rule;
    std::vector<std::size_t> positive;  // non-builtin body positions
    std::vector<Source> sources;        // parallel to `positive`
    const FactStore& store;
    const FactStore& delta;
    const std::function<void(const Atom&)>& emit;
    std::vector<bool> builtin_done;

    void run(std::size_t k, Substitution& s) {
        // builtins whose variables are now all bound
        std::vector<std::size_t> checked;
        for (std::size_t i = 0; i < rule.body.size(); ++i) {
            const Atom& b = rule.body[i];
            if (!b.is_builtin() || builtin_done[i]) continue;
            Atom g = apply_substitution(b, s);
            if (!g.is_ground()) continue;
            if (!eval_builtin(g)) {
                for (auto c : checked) builtin_done[c] = false;
                return;
            }
            builtin_done[i] = true;
            checked.push_back(i);
        }
        if (k == positive.size()) {
            Atom head = apply_substitution(rule.head_atom(), s);
            if (!head.is_ground())
                throw std::logic_error("non-ground derivation from rule r" + std::to_string(rule.id));
            emit(head);
        } else {
            const Atom& pat = rule.body[positive[k]];
            Atom inst = apply_substitution(pat, s);
            auto visit = [&](const FactStore& from, bool skip_delta) {
                for (auto idx : from.candidates(inst)) {
                    const Atom& fact = from[idx];
                    if (skip_delta && delta.contains(fact)) continue;
                    Substitution next = s;
                    if (match_atom(inst, fact, next)) run(k + 1, next);
                }
            };
            switch (sources[k]) {
                case Source::old_only: visit(store, true); break;
                case Source::delta_only: visit(delta, false); break;
                case Source::full:
                    visit(store, false);
                    // delta atoms not yet merged into the store
                    for (auto idx : delta.candidates(inst)) {
                        const Atom& fact = delta[idx];
                        if (store.contains(fact)) continue;
                        Substitution next = s;
                        if (match_atom(inst, fact, next)) run(k + 1, next);
                    }
                    break;
            }
        }
        for (auto c : checked) builtin_done[c] = false;
    }
};

inline void join_rule(const Rule& r, const std::vector<Source>& sources, const FactStore& store,
                      const FactStore& delta, const std::function<void(const Atom&)>& emit) {
    Join j{r, {}, sources, store, delta, emit, std::vector<bool>(r.body.size(), false)};
    for (std::size_t i = 0; i < r.body.size(); ++i)
        if (!r.body[i].is_builtin()) j.positive.push_back(i);
    Substitution s;
    j.run(0, s);
}

inline std::size_t positive_count(const Rule& r) {
    return static_cast<std::size_t>(
        std::count_if(r.body.begin(), r.body.end(), [](const Atom& a) { return !a.is_builtin(); }));
}

}  // namespace detail

// Semi-naive step. The full interpretation is store ∪ delta; body position i
// reads delta, positions before i read (store ∪ delta) ∖ delta, positions after
// i read everything. Returns the derived atoms not already in store or delta.
inline FactStore immediate_consequence(const Program& p, const FactStore& store,
                                       const FactStore& delta) {
    FactStore out;
    std::function<void(const Atom&)> emit = [&](const Atom& a) {
        if (!store.contains(a) && !delta.contains(a)) out.insert(a);
    };
    if (delta.empty()) return out;
    for (const auto& r : p.rules()) {
        std::size_t m = detail::positive_count(r);
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<detail::Source> src(m, detail::Source::full);
            for (std::size_t k = 0; k < i; ++k) src[k] = detail::Source::old_only;
            src[i] = detail::Source::delta_only;
            detail::join_rule(r, src, store, delta, emit);
        }
    }
    return out;
}

// Plain T_P over the whole interpretation.
inline FactStore apply_tp(const Program& p, const FactStore& interp) {
    FactStore out;
    FactStore empty;
    std::function<void(const Atom&)> emit = [&](const Atom& a) { out.insert(a); };
    for (const auto& r : p.rules()) {
        if (r.body.empty()) {
            out.insert(r.head_atom());
            continue;
        }
        std::vector<detail::Source> src(detail::positive_count(r), detail::Source::full);
        detail::join_rule(r, src, interp, empty, emit);
    }
    return out;
}

namespace detail {
struct BudgetTracker {
    const EvalBudget& b;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    BudgetKind check_growth(const FactStore& fresh, std::size_t total, std::int64_t& max_size) const {
        for (const auto& a : fresh.atoms())
            for (const auto& t : a.args) max_size = std::max(max_size, ground_size(t));
        if (max_size > b.max_ground_term_size) return BudgetKind::term_size;
        if (total > b.max_derived_atoms) return BudgetKind::atoms;
        if (std::chrono::steady_clock::now() - start > std::chrono::milliseconds(b.wall_clock_ms))
            return BudgetKind::wall_clock;
        return BudgetKind::none;
    }
};

inline FactStore initial_facts(const Program& p, const FactStore& facts) {
    FactStore init = facts;
    FactStore empty;
    std::function<void(const Atom&)> emit = [&](const Atom& a) { init.insert(a); };
    for (const auto& r : p.rules()) {
        if (r.is_fact()) init.insert(r.head_atom());
        // bodies made of ground comparisons only never see a delta atom
        else if (positive_count(r) == 0) join_rule(r, {}, empty, empty, emit);
    }
    return init;
}
}  // namespace detail

inline EvalOutcome fixpoint(const Program& p, const FactStore& facts, const EvalBudget& b = {}) {
    require_positive_normal(p);
    detail::BudgetTracker tracker{b};
    EvalOutcome out;
    FactStore delta = detail::initial_facts(p, facts);
    FactStore store;
    auto trip = [&](BudgetKind k) {
        out.status = EvalStatus::budget_exceeded;
        out.exceeded = k;
        for (const auto& a : delta.atoms()) store.insert(a);
        out.model = std::move(store);
        return out;
    };
    if (auto k = tracker.check_growth(delta, delta.size(), out.max_term_size); k != BudgetKind::none)
        return trip(k);
    for (;;) {
        FactStore fresh = immediate_consequence(p, store, delta);
        for (const auto& a : delta.atoms()) store.insert(a);
        delta = std::move(fresh);
        if (delta.empty()) break;
        if (out.iterations == b.max_iterations) return trip(BudgetKind::iterations);
        ++out.iterations;
        if (auto k = tracker.check_growth(delta, store.size() + delta.size(), out.max_term_size);
            k != BudgetKind::none)
            return trip(k);
    }
    out.model = std::move(store);
    return out;
}

// Naive iteration I_{k+1} = T_P(I_k) ∪ facts, used to cross-check fixpoint().
inline EvalOutcome naive_fixpoint(const Program& p, const FactStore& facts, const EvalBudget& b = {}) {
    require_positive_normal(p);
    detail::BudgetTracker tracker{b};
    EvalOutcome out;
    FactStore interp = detail::initial_facts(p, facts);
    for (;;) {
        FactStore next = apply_tp(p, interp);
        FactStore fresh;
        for (const auto& a : next.atoms())
            if (!interp.contains(a)) fresh.insert(a);
        if (fresh.empty()) break;
        if (out.iterations == b.max_iterations) {
            out.status = EvalStatus::budget_exceeded;
            out.exceeded = BudgetKind::iterations;
            break;
        }
        ++out.iterations;
        for (const auto& a : fresh.atoms()) interp.insert(a);
        if (auto k = tracker.check_growth(fresh, interp.size(), out.max_term_size);
            k != BudgetKind::none) {
            out.status = EvalStatus::budget_exceeded;
            out.exceeded = k;
            break;
        }
    }
    out.model = std::move(interp);
    return out;
}

// Facts file: every clause must be a ground fact.
inline FactStore facts_from_program(const Program& p) {
    FactStore out;
    for (const auto& r : p.rules()) {
        if (!r.is_fact()) throw std::invalid_argument("facts input contains a non-fact clause");
        out.insert(r.head_atom());
    }
    return out;
}

}  // namespace lpterm
