#pragma once

#include <cctype>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "term.hpp"

namespace lpterm {

// Natural variable standing for the size of a logical variable: X_2 -> x_2,
// Cur_3 -> cur_3.
inline std::string natural_variable(const VarId& v) {
    std::string s = v.display();
    if (!s.empty()) s[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
    return s;
}

// constant + sum of coeff * x over natural variables; coefficients are positive.
struct SizeExpr {
    std::int64_t constant = 0;
    std::map<std::string, std::int64_t> coefficients;

    SizeExpr& operator+=(const SizeExpr& o) {
        constant += o.constant;
        for (const auto& [x, c] : o.coefficients) coefficients[x] += c;
        return *this;
    }

    std::int64_t evaluate(const std::map<std::string, std::int64_t>& at) const {
        std::int64_t v = constant;
        for (const auto& [x, c] : coefficients) {
            auto it = at.find(x);
            if (it == at.end()) throw std::out_of_range("no value for natural variable " + x);
            v += c * it->second;
        }
        return v;
    }

    friend bool operator==(const SizeExpr&, const SizeExpr&) = default;
};

inline SizeExpr operator+(SizeExpr a, const SizeExpr& b) { return a += b; }

// "2 + x + 3*y"; variables in name order, constant first.
inline std::string render_size(const SizeExpr& e) {
    std::string out;
    if (e.constant != 0 || e.coefficients.empty()) out = std::to_string(e.constant);
    for (const auto& [x, c] : e.coefficients) {
        if (!out.empty()) out += " + ";
        if (c != 1) out += std::to_string(c) + "*";
        out += x;
    }
    return out;
}

using SizeVector = std::vector<SizeExpr>;

// size(X) = x; size(f(t1..tm)) = m + sum size(ti); constants have size 0.
inline SizeExpr term_size(const Term& t) {
    SizeExpr e;
    if (t.is_variable()) {
        e.coefficients[natural_variable(t.var())] = 1;
        return e;
    }
    e.constant = static_cast<std::int64_t>(t.arity());
    for (const auto& a : t.args()) e += term_size(a);
    return e;
}

inline SizeVector atom_size_vector(const Atom& a) {
    if (a.is_builtin()) throw std::invalid_argument("size of builtin atom " + a.predicate);
    SizeVector v;
    v.reserve(a.args.size());
    for (const auto& t : a.args) v.push_back(term_size(t));
    return v;
}

inline SizeExpr atom_total_size(const Atom& a) {
    SizeExpr total;
    for (const auto& e : atom_size_vector(a)) total += e;
    return total;
}

// Size of a ground term as a plain number.
inline std::int64_t ground_size(const Term& t) {
    std::int64_t s = static_cast<std::int64_t>(t.arity());
    for (const auto& a : t.args()) s += ground_size(a);
    return s;
}

}  // namespace lpterm
