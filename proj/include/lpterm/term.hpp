#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstddef>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lpterm {

struct SourceSpan {
    std::size_t line = 0;
    std::size_t column = 0;
    std::size_t offset = 0;
};

// A logical variable. The tag separates copies of the same source variable:
// rules are renamed apart with tag = rule id, path steps with tag = step.
struct VarId {
    std::string name;
    int tag = -1;

    auto operator<=>(const VarId&) const = default;

    std::string display() const {
        return tag < 0 ? name : name + "_" + std::to_string(tag);
    }
};

inline bool is_numeric_name(const std::string& s) {
    if (s.empty()) return false;
    std::size_t i = (s[0] == '-') ? 1 : 0;
    if (i == s.size()) return false;
    return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                       [](char c) { return c >= '0' && c <= '9'; });
}

class Term {
public:
    Term() = default;

    static Term variable(std::string name, int tag = -1) {
        if (name.empty()) throw std::invalid_argument("empty variable name");
        auto n = std::make_shared<Node>();
        n->is_var = true;
        n->name = std::move(name);
        n->tag = tag;
        n->ground = false;
        n->hash = std::hash<std::string>{}(n->name) * 31u + std::hash<int>{}(tag) + 0x9e3779b9u;
        return Term(std::move(n));
    }

    static Term variable(const VarId& v) { return variable(v.name, v.tag); }

    static Term compound(std::string functor, std::vector<Term> args = {}) {
        if (functor.empty()) throw std::invalid_argument("empty functor name");
        auto n = std::make_shared<Node>();
        n->name = std::move(functor);
        std::size_t h = std::hash<std::string>{}(n->name) ^ (args.size() * 0x100000001b3ull);
        bool ground = true;
        for (const auto& a : args) {
            h = h * 1099511628211ull ^ a.hash();
            ground = ground && a.is_ground();
        }
        n->args = std::move(args);
        n->hash = h;
        n->ground = ground;
        return Term(std::move(n));
    }

    static Term constant(std::string name) { return compound(std::move(name)); }

    bool valid() const { return node_ != nullptr; }
    bool is_variable() const { return node_->is_var; }
    bool is_compound() const { return !node_->is_var; }
    bool is_constant() const { return !node_->is_var && node_->args.empty(); }
    bool is_numeric() const { return is_constant() && is_numeric_name(node_->name); }
    bool is_ground() const { return node_->ground; }

    const std::string& name() const { return node_->name; }
    int tag() const { return node_->tag; }
    VarId var() const { return {node_->name, node_->tag}; }
    std::size_t arity() const { return node_->args.size(); }
    const std::vector<Term>& args() const { return node_->args; }
    std::size_t hash() const { return node_->hash; }

    friend bool operator==(const Term& a, const Term& b) {
        if (a.node_ == b.node_) return true;
        if (!a.node_ || !b.node_) return false;
        const Node& x = *a.node_;
        const Node& y = *b.node_;
        if (x.hash != y.hash || x.is_var != y.is_var || x.tag != y.tag || x.name != y.name ||
            x.args.size() != y.args.size())
            return false;
        for (std::size_t i = 0; i < x.args.size(); ++i)
            if (!(x.args[i] == y.args[i])) return false;
        return true;
    }

private:
    struct Node {
        bool is_var = false;
        std::string name;
        int tag = -1;
        std::vector<Term> args;
        std::size_t hash = 0;
        bool ground = true;
    };

    explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    std::shared_ptr<const Node> node_;
};

struct TermHash {
    std::size_t operator()(const Term& t) const { return t.hash(); }
};

namespace detail {
inline std::strong_ordering compare_numeric(const std::string& a, const std::string& b) {
    long long x = 0, y = 0;
    auto ra = std::from_chars(a.data(), a.data() + a.size(), x);
    auto rb = std::from_chars(b.data(), b.data() + b.size(), y);
    if (ra.ec == std::errc{} && rb.ec == std::errc{}) return x <=> y;
    // out of range for long long: compare sign, then magnitude by length and digits
    bool na = a[0] == '-', nb = b[0] == '-';
    if (na != nb) return na ? std::strong_ordering::less : std::strong_ordering::greater;
    auto mag = (a.size() != b.size()) ? (a.size() <=> b.size()) : (a <=> b);
    return na ? 0 <=> mag : mag;
}
}  // namespace detail

// Total order on terms: variables < numeric constants (by value) < symbolic
// constants (by name) < compounds (by functor, arity, then argumentwise).
inline std::strong_ordering term_order(const Term& a, const Term& b) {
    auto rank = [](const Term& t) {
        if (t.is_variable()) return 0;
        if (t.is_numeric()) return 1;
        if (t.is_constant()) return 2;
        return 3;
    };
    int ra = rank(a), rb = rank(b);
    if (ra != rb) return ra <=> rb;
    switch (ra) {
        case 0:
            return a.var() <=> b.var();
        case 1:
            return detail::compare_numeric(a.name(), b.name());
        case 2:
            return a.name() <=> b.name();
        default:
            break;
    }
    if (auto c = a.name() <=> b.name(); c != 0) return c;
    if (auto c = a.arity() <=> b.arity(); c != 0) return c;
    for (std::size_t i = 0; i < a.arity(); ++i)
        if (auto c = term_order(a.args()[i], b.args()[i]); c != 0) return c;
    return std::strong_ordering::equal;
}

struct TermLess {
    bool operator()(const Term& a, const Term& b) const { return term_order(a, b) < 0; }
};

enum class Builtin { none, lt, le, gt, ge, eq, ne };

inline const char* builtin_symbol(Builtin b) {
    switch (b) {
        case Builtin::lt: return "<";
        case Builtin::le: return "<=";
        case Builtin::gt: return ">";
        case Builtin::ge: return ">=";
        case Builtin::eq: return "=";
        case Builtin::ne: return "!=";
        case Builtin::none: break;
    }
    return "";
}

struct PredicateKey {
    std::string name;
    std::size_t arity = 0;

    auto operator<=>(const PredicateKey&) const = default;
    std::string display() const { return name + "/" + std::to_string(arity); }
};

struct Atom {
    std::string predicate;
    std::vector<Term> args;
    Builtin builtin = Builtin::none;

    static Atom make(std::string pred, std::vector<Term> args = {}) {
        return Atom{std::move(pred), std::move(args), Builtin::none};
    }
    static Atom comparison(Builtin op, Term lhs, Term rhs) {
        return Atom{builtin_symbol(op), {std::move(lhs), std::move(rhs)}, op};
    }

    bool is_builtin() const { return builtin != Builtin::none; }
    std::size_t arity() const { return args.size(); }
    PredicateKey key() const { return {predicate, args.size()}; }
    bool is_ground() const {
        return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
    }

    friend bool operator==(const Atom&, const Atom&) = default;
};

struct AtomHash {
    std::size_t operator()(const Atom& a) const {
        std::size_t h = std::hash<std::string>{}(a.predicate) + static_cast<std::size_t>(a.builtin);
        for (const auto& t : a.args) h = h * 1099511628211ull ^ t.hash();
        return h;
    }
};

inline std::strong_ordering atom_order(const Atom& a, const Atom& b) {
    if (auto c = a.predicate <=> b.predicate; c != 0) return c;
    if (auto c = a.args.size() <=> b.args.size(); c != 0) return c;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (auto c = term_order(a.args[i], b.args[i]); c != 0) return c;
    return static_cast<int>(a.builtin) <=> static_cast<int>(b.builtin);
}

// A rule A1 | ... | Am :- B1, ..., Bk, not C1, ..., not Cn. Normal rules have
// exactly one head atom; positive rules have no negative literals. Builtin
// comparisons live in `body`.
struct Rule {
    std::vector<Atom> head;
    std::vector<Atom> body;
    std::vector<Atom> negative_body;
    std::size_t id = 0;
    SourceSpan span{};

    bool is_normal() const { return head.size() == 1; }
    bool is_positive() const { return negative_body.empty(); }
    bool is_fact() const { return is_normal() && body.empty() && negative_body.empty(); }

    const Atom& head_atom() const {
        if (!is_normal()) throw std::logic_error("head_atom() on a disjunctive rule");
        return head.front();
    }
};

inline void collect_variables(const Term& t, std::set<VarId>& out) {
    if (t.is_variable()) {
        out.insert(t.var());
        return;
    }
    if (t.is_ground()) return;
    for (const auto& a : t.args()) collect_variables(a, out);
}

inline std::set<VarId> variables_of(const Term& t) {
    std::set<VarId> out;
    collect_variables(t, out);
    return out;
}

inline std::set<VarId> variables_of(const Atom& a) {
    std::set<VarId> out;
    for (const auto& t : a.args) collect_variables(t, out);
    return out;
}

inline std::set<VarId> variables_of(const Rule& r) {
    std::set<VarId> out;
    for (const auto* part : {&r.head, &r.body, &r.negative_body})
        for (const auto& a : *part)
            for (const auto& t : a.args) collect_variables(t, out);
    return out;
}

inline bool occurs_in(const VarId& v, const Term& t) {
    if (t.is_variable()) return t.var() == v;
    if (t.is_ground()) return false;
    return std::any_of(t.args().begin(), t.args().end(),
                       [&](const Term& a) { return occurs_in(v, a); });
}

// ---------------------------------------------------------------------------
// Substitutions
// ---------------------------------------------------------------------------

class Substitution {
public:
    Substitution() = default;
    Substitution(std::initializer_list<std::pair<VarId, Term>> init) {
        for (const auto& [v, t] : init) bind(v, t);
    }

    // Identity bindings X/X are dropped.
    void bind(const VarId& v, Term t) {
        if (t.is_variable() && t.var() == v) {
            bindings_.erase(v);
            return;
        }
        bindings_.insert_or_assign(v, std::move(t));
    }

    const Term* lookup(const VarId& v) const {
        auto it = bindings_.find(v);
        return it == bindings_.end() ? nullptr : &it->second;
    }

    bool empty() const { return bindings_.empty(); }
    std::size_t size() const { return bindings_.size(); }
    const std::map<VarId, Term>& bindings() const { return bindings_; }
    auto begin() const { return bindings_.begin(); }
    auto end() const { return bindings_.end(); }

    bool is_idempotent() const {
        for (const auto& [v, t] : bindings_)
            for (const auto& [w, _] : bindings_)
                if (occurs_in(w, t)) return false;
        return true;
    }

    friend bool operator==(const Substitution&, const Substitution&) = default;

private:
    std::map<VarId, Term> bindings_;
};

inline Term apply_substitution(const Term& t, const Substitution& s) {
    if (t.is_variable()) {
        const Term* img = s.lookup(t.var());
        return img ? *img : t;
    }
    if (t.is_ground() || s.empty()) return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    bool changed = false;
    for (const auto& a : t.args()) {
        args.push_back(apply_substitution(a, s));
        changed = changed || !(args.back() == a);
    }
    return changed ? Term::compound(t.name(), std::move(args)) : t;
}

inline Atom apply_substitution(const Atom& a, const Substitution& s) {
    Atom out{a.predicate, {}, a.builtin};
    out.args.reserve(a.args.size());
    for (const auto& t : a.args) out.args.push_back(apply_substitution(t, s));
    return out;
}

// s1 ∘ s2: apply s1 first, then s2.
inline Substitution compose(const Substitution& s1, const Substitution& s2) {
    Substitution out;
    for (const auto& [v, t] : s1) out.bind(v, apply_substitution(t, s2));
    for (const auto& [v, t] : s2)
        if (!s1.lookup(v)) out.bind(v, t);
    return out;
}

namespace detail {
// Robinson unification with occurs check over an idempotent accumulator.
// Variable-variable pairs bind the variable coming from the left operand.
inline bool unify_into(const Term& lhs, const Term& rhs, Substitution& acc) {
    std::vector<std::pair<Term, Term>> work{{lhs, rhs}};
    while (!work.empty()) {
        auto [a, b] = std::move(work.back());
        work.pop_back();
        a = apply_substitution(a, acc);
        b = apply_substitution(b, acc);
        if (a == b) continue;
        if (a.is_variable() || b.is_variable()) {
            const Term& var = a.is_variable() ? a : b;
            const Term& val = a.is_variable() ? b : a;
            if (occurs_in(var.var(), val)) return false;
            Substitution single;
            single.bind(var.var(), val);
            acc = compose(acc, single);
            continue;
        }
        if (a.name() != b.name() || a.arity() != b.arity()) return false;
        for (std::size_t i = a.arity(); i-- > 0;) work.emplace_back(a.args()[i], b.args()[i]);
    }
    return true;
}
}  // namespace detail

inline std::optional<Substitution> mgu(const Term& a, const Term& b) {
    Substitution acc;
    if (!detail::unify_into(a, b, acc)) return std::nullopt;
    return acc;
}

// Builtin atoms never unify: no rule defines them.
inline std::optional<Substitution> mgu(const Atom& a, const Atom& b) {
    if (a.is_builtin() || b.is_builtin()) return std::nullopt;
    if (a.predicate != b.predicate || a.args.size() != b.args.size()) return std::nullopt;
    Substitution acc;
    for (std::size_t i = 0; i < a.args.size(); ++i)
        if (!detail::unify_into(a.args[i], b.args[i], acc)) return std::nullopt;
    return acc;
}

// ---------------------------------------------------------------------------
// Renaming
// ---------------------------------------------------------------------------

inline Term retag(const Term& t, int tag) {
    if (t.is_variable()) return Term::variable(t.name(), tag);
    if (t.is_ground()) return t;
    std::vector<Term> args;
    args.reserve(t.arity());
    for (const auto& a : t.args()) args.push_back(retag(a, tag));
    return Term::compound(t.name(), std::move(args));
}

inline Atom retag(const Atom& a, int tag) {
    Atom out{a.predicate, {}, a.builtin};
    out.args.reserve(a.args.size());
    for (const auto& t : a.args) out.args.push_back(retag(t, tag));
    return out;
}

inline Rule rename_apart(const Rule& r, int tag) {
    Rule out = r;
    for (auto* part : {&out.head, &out.body, &out.negative_body})
        for (auto& a : *part) a = retag(a, tag);
    return out;
}

// ---------------------------------------------------------------------------
// Programs
// ---------------------------------------------------------------------------

// Returns the first variable (in VarId order) that violates range restriction:
// every variable must occur in a positive non-builtin body atom, and facts
// must be ground.
inline std::optional<VarId> range_restriction_violation(const Rule& r) {
    std::set<VarId> bound;
    for (const auto& b : r.body)
        if (!b.is_builtin())
            for (const auto& t : b.args) collect_variables(t, bound);
    for (const auto& v : variables_of(r))
        if (!bound.count(v)) return v;
    return std::nullopt;
}

class Program {
public:
    Program() = default;

    // Assigns dense ids in order and renames every rule apart (tag = id).
    explicit Program(std::vector<Rule> rules) : rules_(std::move(rules)) {
        for (std::size_t i = 0; i < rules_.size(); ++i) {
            SourceSpan span = rules_[i].span;
            rules_[i] = rename_apart(rules_[i], static_cast<int>(i));
            rules_[i].id = i;
            rules_[i].span = span;
            for (const auto& h : rules_[i].head) defining_[h.key()].push_back(i);
        }
    }

    const std::vector<Rule>& rules() const { return rules_; }
    std::size_t size() const { return rules_.size(); }
    const Rule& operator[](std::size_t i) const { return rules_.at(i); }

    const std::map<PredicateKey, std::vector<std::size_t>>& defining_rules() const {
        return defining_;
    }

    bool is_positive_normal() const {
        return std::all_of(rules_.begin(), rules_.end(),
                           [](const Rule& r) { return r.is_normal() && r.is_positive(); });
    }

    std::set<PredicateKey> predicates() const {
        std::set<PredicateKey> out;
        for (const auto& r : rules_)
            for (const auto* part : {&r.head, &r.body, &r.negative_body})
                for (const auto& a : *part)
                    if (!a.is_builtin()) out.insert(a.key());
        return out;
    }

private:
    std::vector<Rule> rules_;
    std::map<PredicateKey, std::vector<std::size_t>> defining_;
};

// Positive normal approximation: every A1|...|Am :- body becomes m rules
// Ai :- body+ with negative literals deleted.
inline Program st_transform(const Program& p) {
    std::vector<Rule> out;
    for (const auto& r : p.rules()) {
        for (const auto& h : r.head) {
            Rule n;
            n.head = {h};
            n.body = r.body;
            n.span = r.span;
            out.push_back(std::move(n));
        }
    }
    return Program(std::move(out));
}

}  // namespace lpterm
