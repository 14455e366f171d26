#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lpterm/parser.hpp"
#include "lpterm/term.hpp"

namespace lpterm::testing {

namespace fs = std::filesystem;

inline std::string read_text(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline fs::path corpus_dir() { return fs::path(LPTERM_CORPUS_DIR); }

// Program files of the corpus (facts files excluded), sorted by name.
inline std::vector<std::string> corpus_names() {
    std::vector<std::string> out;
    for (const auto& e : fs::directory_iterator(corpus_dir())) {
        auto name = e.path().filename().string();
        if (e.path().extension() != ".lp" || name.ends_with(".facts.lp")) continue;
        out.push_back(e.path().stem().string());
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline Program corpus_program(const std::string& name) {
    return parse_program(read_text(corpus_dir() / (name + ".lp")));
}

inline bool corpus_has_facts(const std::string& name) {
    return fs::exists(corpus_dir() / (name + ".facts.lp"));
}

inline Program corpus_facts(const std::string& name) {
    return parse_program(read_text(corpus_dir() / (name + ".facts.lp")));
}

inline Term var(const std::string& n, int tag = -1) { return Term::variable(n, tag); }
inline Term cst(const std::string& n) { return Term::constant(n); }
inline Term fn(const std::string& f, std::vector<Term> args) { return Term::compound(f, std::move(args)); }

// Random terms over f/1, g/2, a, b and the given variables.
struct TermGen {
    std::mt19937& rng;
    std::vector<Term> vars;

    Term operator()(int depth) {
        std::uniform_int_distribution<int> pick(0, depth > 0 ? 4 : 1);
        switch (pick(rng)) {
            case 0: {
                std::uniform_int_distribution<std::size_t> v(0, vars.size() - 1);
                return vars[v(rng)];
            }
            case 1: return cst(std::uniform_int_distribution<int>(0, 1)(rng) ? "a" : "b");
            case 2:
            case 3: return fn("f", {(*this)(depth - 1)});
            default: return fn("g", {(*this)(depth - 1), (*this)(depth - 1)});
        }
    }
};

// Small random ground terms: lists and binary trees of at most six elements,
// short f/1 chains, and constants.
struct FactGen {
    std::mt19937& rng;

    int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

    Term constant() {
        static const char* cs[] = {"a", "b", "c", "null", "1", "2", "3"};
        return cst(cs[pick(0, 6)]);
    }
    Term list() {
        Term t = cst("nil");
        for (int n = pick(0, 6); n > 0; --n) t = fn("lc", {constant(), t});
        return t;
    }
    Term tree(int& budget) {
        if (budget == 0 || pick(0, 2) == 0) return cst("null");
        --budget;
        Term l = tree(budget);
        Term r = tree(budget);
        return fn("tree", {constant(), l, r});
    }
    Term chain() {
        Term t = constant();
        for (int n = pick(1, 3); n > 0; --n) t = pick(0, 1) ? fn("f", {t}) : fn("f", {t, constant()});
        return t;
    }
    Term operator()() {
        switch (pick(0, 3)) {
            case 0: return constant();
            case 1: return list();
            case 2: {
                int budget = 6;
                return tree(budget);
            }
            default: return chain();
        }
    }
};

// Up to three random facts for every predicate the program mentions.
inline std::vector<Atom> random_facts(const Program& p, std::mt19937& rng) {
    std::set<PredicateKey> preds;
    for (const auto& r : p.rules()) {
        preds.insert(r.head_atom().key());
        for (const auto& b : r.body)
            if (!b.is_builtin()) preds.insert(b.key());
    }
    FactGen gen{rng};
    std::vector<Atom> out;
    for (const auto& k : preds)
        for (int n = gen.pick(0, 3); n > 0; --n) {
            std::vector<Term> args;
            for (std::size_t i = 0; i < k.arity; ++i) args.push_back(gen());
            out.push_back(Atom::make(k.name, args));
        }
    return out;
}

}  // namespace lpterm::testing
