#pragma once

#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "term.hpp"

namespace lpterm {

inline constexpr const char* list_nil = "nil";
inline constexpr const char* list_cons = "lc";

class ParseError : public std::runtime_error {
public:
    enum class Kind { syntax, arity_conflict, range_restriction };

    ParseError(Kind kind, SourceSpan span, const std::string& message)
        : std::runtime_error(format(span, message)), kind_(kind), span_(span) {}

    Kind kind() const { return kind_; }
    const SourceSpan& span() const { return span_; }

private:
    static std::string format(const SourceSpan& s, const std::string& m) {
        return std::to_string(s.line) + ":" + std::to_string(s.column) + ": " + m;
    }

    Kind kind_;
    SourceSpan span_;
};

namespace detail {

enum class Tok {
    end, lower, variable, number, quoted, lparen, rparen, lbracket, rbracket,
    comma, dot, bar, arrow, lt, le, gt, ge, eq, ne
};

struct Token {
    Tok kind = Tok::end;
    std::string text;
    SourceSpan span;
};

class Lexer {
public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> run() {
        std::vector<Token> out;
        for (;;) {
            skip_space();
            Token t;
            t.span = here();
            if (pos_ >= src_.size()) {
                out.push_back(t);
                return out;
            }
            char c = src_[pos_];
            if (std::islower(static_cast<unsigned char>(c))) {
                t.kind = Tok::lower;
                t.text = ident();
            } else if (std::isupper(static_cast<unsigned char>(c)) || c == '_') {
                t.kind = Tok::variable;
                t.text = ident();
            } else if (std::isdigit(static_cast<unsigned char>(c)) ||
                       (c == '-' && pos_ + 1 < src_.size() &&
                        std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
                t.kind = Tok::number;
                std::size_t start = pos_;
                advance();
                while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
                    advance();
                t.text = std::string(src_.substr(start, pos_ - start));
            } else if (c == '\'') {
                t.kind = Tok::quoted;
                t.text = quoted(t.span);
            } else {
                t.kind = punct(t.span);
            }
            out.push_back(std::move(t));
        }
    }

private:
    SourceSpan here() const { return {line_, col_, pos_}; }

    void advance() {
        if (src_[pos_] == '\n') {
            ++line_;
            col_ = 1;
        } else {
            ++col_;
        }
        ++pos_;
    }

    void skip_space() {
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '%') {
                while (pos_ < src_.size() && src_[pos_] != '\n') advance();
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance();
            } else {
                break;
            }
        }
    }

    std::string ident() {
        std::size_t start = pos_;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
            advance();
        return std::string(src_.substr(start, pos_ - start));
    }

    std::string quoted(const SourceSpan& at) {
        advance();
        std::string out;
        while (pos_ < src_.size()) {
            char c = src_[pos_];
            if (c == '\\' && pos_ + 1 < src_.size()) {
                advance();
                out.push_back(src_[pos_]);
                advance();
                continue;
            }
            if (c == '\'') {
                advance();
                if (out.empty()) throw ParseError(ParseError::Kind::syntax, at, "empty quoted name");
                return out;
            }
            if (c == '\n') break;
            out.push_back(c);
            advance();
        }
        throw ParseError(ParseError::Kind::syntax, at, "unterminated quoted name");
    }

    Tok punct(const SourceSpan& at) {
        auto two = [&](char a, char b) {
            return src_[pos_] == a && pos_ + 1 < src_.size() && src_[pos_ + 1] == b;
        };
        auto take = [&](std::size_t n, Tok k) {
            for (std::size_t i = 0; i < n; ++i) advance();
            return k;
        };
        if (two(':', '-')) return take(2, Tok::arrow);
        if (two('<', '=')) return take(2, Tok::le);
        if (two('>', '=')) return take(2, Tok::ge);
        if (two('!', '=')) return take(2, Tok::ne);
        switch (src_[pos_]) {
            case '(': return take(1, Tok::lparen);
            case ')': return take(1, Tok::rparen);
            case '[': return take(1, Tok::lbracket);
            case ']': return take(1, Tok::rbracket);
            case ',': return take(1, Tok::comma);
            case '.': return take(1, Tok::dot);
            case '|': return take(1, Tok::bar);
            case '<': return take(1, Tok::lt);
            case '>': return take(1, Tok::gt);
            case '=': return take(1, Tok::eq);
            default: break;
        }
        throw ParseError(ParseError::Kind::syntax, at,
                         std::string("unexpected character '") + src_[pos_] + "'");
    }

    std::string_view src_;
    std::size_t pos_ = 0;
    std::size_t line_ = 1;
    std::size_t col_ = 1;
};

inline Builtin comparison_of(Tok k) {
    switch (k) {
        case Tok::lt: return Builtin::lt;
        case Tok::le: return Builtin::le;
        case Tok::gt: return Builtin::gt;
        case Tok::ge: return Builtin::ge;
        case Tok::eq: return Builtin::eq;
        case Tok::ne: return Builtin::ne;
        default: return Builtin::none;
    }
}

class Parser {
public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    std::vector<Rule> rules() {
        std::vector<Rule> out;
        while (peek().kind != Tok::end) out.push_back(clause());
        return out;
    }

    Term single_term() {
        Term t = term();
        expect(Tok::end, "end of input");
        return t;
    }

private:
    const Token& peek(std::size_t k = 0) const {
        return toks_[std::min(pos_ + k, toks_.size() - 1)];
    }
    Token next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

    [[noreturn]] void fail(const Token& t, const std::string& what) const {
        std::string got = t.kind == Tok::end ? "end of input" : "'" + describe(t) + "'";
        throw ParseError(ParseError::Kind::syntax, t.span, "expected " + what + ", got " + got);
    }

    static std::string describe(const Token& t) {
        if (!t.text.empty()) return t.text;
        switch (t.kind) {
            case Tok::lparen: return "(";
            case Tok::rparen: return ")";
            case Tok::lbracket: return "[";
            case Tok::rbracket: return "]";
            case Tok::comma: return ",";
            case Tok::dot: return ".";
            case Tok::bar: return "|";
            case Tok::arrow: return ":-";
            default: return builtin_symbol(comparison_of(t.kind));
        }
    }

    Token expect(Tok k, const std::string& what) {
        if (peek().kind != k) fail(peek(), what);
        return next();
    }

    Rule clause() {
        Rule r;
        r.span = peek().span;
        r.head.push_back(head_atom());
        while (peek().kind == Tok::bar) {
            next();
            r.head.push_back(head_atom());
        }
        if (peek().kind == Tok::arrow) {
            next();
            literal(r);
            while (peek().kind == Tok::comma) {
                next();
                literal(r);
            }
        }
        expect(Tok::dot, "'.'");
        return r;
    }

    Atom head_atom() {
        const Token& t = peek();
        Term term = this->term();
        if (comparison_of(peek().kind) != Builtin::none)
            throw ParseError(ParseError::Kind::syntax, t.span, "comparison in rule head");
        return to_atom(term, t);
    }

    void literal(Rule& r) {
        if (peek().kind == Tok::lower && peek().text == "not" &&
            (peek(1).kind == Tok::lower || peek(1).kind == Tok::quoted)) {
            next();
            const Token& t = peek();
            r.negative_body.push_back(to_atom(term(), t));
            return;
        }
        const Token& t = peek();
        Term lhs = term();
        Builtin op = comparison_of(peek().kind);
        if (op != Builtin::none) {
            next();
            r.body.push_back(Atom::comparison(op, lhs, term()));
            return;
        }
        r.body.push_back(to_atom(lhs, t));
    }

    static Atom to_atom(const Term& t, const Token& at) {
        if (t.is_variable() || t.is_numeric())
            throw ParseError(ParseError::Kind::syntax, at.span,
                             "expected an atom, got '" + at.text + "'");
        return Atom::make(t.name(), t.args());
    }

    Term term() {
        Token t = next();
        switch (t.kind) {
            case Tok::variable:
                if (t.text == "_") return Term::variable("_G" + std::to_string(anon_++));
                return Term::variable(t.text);
            case Tok::number:
                return Term::constant(t.text);
            case Tok::lower:
            case Tok::quoted: {
                if (peek().kind != Tok::lparen) return Term::constant(t.text);
                next();
                std::vector<Term> args{term()};
                while (peek().kind == Tok::comma) {
                    next();
                    args.push_back(term());
                }
                expect(Tok::rparen, "')'");
                return Term::compound(t.text, std::move(args));
            }
            case Tok::lbracket:
                return list_tail();
            default:
                fail(t, "a term");
        }
    }

    // after '['
    Term list_tail() {
        if (peek().kind == Tok::rbracket) {
            next();
            return Term::constant(list_nil);
        }
        std::vector<Term> items{term()};
        while (peek().kind == Tok::comma) {
            next();
            items.push_back(term());
        }
        Term tail = Term::constant(list_nil);
        if (peek().kind == Tok::bar) {
            next();
            tail = term();
        }
        expect(Tok::rbracket, "']'");
        for (auto it = items.rbegin(); it != items.rend(); ++it)
            tail = Term::compound(list_cons, {*it, tail});
        return tail;
    }

    std::vector<Token> toks_;
    std::size_t pos_ = 0;
    int anon_ = 0;
};

}  // namespace detail

// Parses `.lp` text. Rules are renamed apart on load; predicate arities must
// be consistent and every rule range restricted.
inline Program parse_program(std::string_view text) {
    std::vector<Rule> rules = detail::Parser(detail::Lexer(text).run()).rules();

    std::map<std::string, std::pair<std::size_t, SourceSpan>> arity;
    for (const auto& r : rules) {
        for (const auto* part : {&r.head, &r.body, &r.negative_body}) {
            for (const auto& a : *part) {
                if (a.is_builtin()) continue;
                auto [it, fresh] = arity.try_emplace(a.predicate, a.arity(), r.span);
                if (!fresh && it->second.first != a.arity())
                    throw ParseError(ParseError::Kind::arity_conflict, r.span,
                                     "predicate '" + a.predicate + "' used with arity " +
                                         std::to_string(a.arity()) + " and " +
                                         std::to_string(it->second.first));
            }
        }
    }
    for (std::size_t i = 0; i < rules.size(); ++i) {
        if (auto v = range_restriction_violation(rules[i])) {
            std::string what = rules[i].body.empty() ? "fact is not ground: variable '"
                                                     : "variable '";
            throw ParseError(ParseError::Kind::range_restriction, rules[i].span,
                             what + v->name + "' of rule r" + std::to_string(i) +
                                 " does not occur in a positive body atom");
        }
    }
    return Program(std::move(rules));
}

inline Term parse_term(std::string_view text) {
    return detail::Parser(detail::Lexer(text).run()).single_term();
}

// ---------------------------------------------------------------------------
// Rendering
// ---------------------------------------------------------------------------

struct RenderOptions {
    // Show rename-apart tags (X_3). Off for program text, where each rule is
    // its own variable scope.
    bool tagged_variables = false;
};

namespace detail {
inline bool plain_functor(const std::string& s) {
    if (is_numeric_name(s)) return true;
    if (s.empty() || !std::islower(static_cast<unsigned char>(s[0]))) return false;
    return std::all_of(s.begin(), s.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    });
}

inline void render_functor(const std::string& s, std::string& out) {
    if (plain_functor(s)) {
        out += s;
        return;
    }
    out += '\'';
    for (char c : s) {
        if (c == '\'' || c == '\\') out += '\\';
        out += c;
    }
    out += '\'';
}

inline bool is_cons(const Term& t) {
    return t.is_compound() && t.arity() == 2 && t.name() == list_cons;
}
}  // namespace detail

inline void render_term(const Term& t, std::string& out, const RenderOptions& opt = {}) {
    if (t.is_variable()) {
        out += opt.tagged_variables ? t.var().display() : t.name();
        return;
    }
    if (t.is_constant() && t.name() == list_nil) {
        out += "[]";
        return;
    }
    if (detail::is_cons(t)) {
        const Term* cur = &t;
        while (detail::is_cons(*cur)) cur = &cur->args()[1];
        bool sugar = cur->is_variable() || (cur->is_constant() && cur->name() == list_nil);
        if (sugar) {
            out += '[';
            cur = &t;
            bool first = true;
            while (detail::is_cons(*cur)) {
                if (!first) out += ',';
                first = false;
                render_term(cur->args()[0], out, opt);
                cur = &cur->args()[1];
            }
            if (cur->is_variable()) {
                out += '|';
                render_term(*cur, out, opt);
            }
            out += ']';
            return;
        }
    }
    detail::render_functor(t.name(), out);
    if (t.arity() == 0) return;
    out += '(';
    for (std::size_t i = 0; i < t.arity(); ++i) {
        if (i) out += ',';
        render_term(t.args()[i], out, opt);
    }
    out += ')';
}

inline std::string render_term(const Term& t, const RenderOptions& opt = {}) {
    std::string out;
    render_term(t, out, opt);
    return out;
}

inline std::string render_atom(const Atom& a, const RenderOptions& opt = {}) {
    std::string out;
    if (a.is_builtin()) {
        render_term(a.args[0], out, opt);
        out += ' ';
        out += builtin_symbol(a.builtin);
        out += ' ';
        render_term(a.args[1], out, opt);
        return out;
    }
    detail::render_functor(a.predicate, out);
    if (a.args.empty()) return out;
    out += '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out += ',';
        render_term(a.args[i], out, opt);
    }
    out += ')';
    return out;
}

inline std::string render_rule(const Rule& r, const RenderOptions& opt = {}) {
    std::string out;
    for (std::size_t i = 0; i < r.head.size(); ++i) {
        if (i) out += " | ";
        out += render_atom(r.head[i], opt);
    }
    if (!r.body.empty() || !r.negative_body.empty()) {
        out += " :- ";
        bool first = true;
        for (const auto& b : r.body) {
            if (!first) out += ", ";
            first = false;
            out += render_atom(b, opt);
        }
        for (const auto& b : r.negative_body) {
            if (!first) out += ", ";
            first = false;
            out += "not " + render_atom(b, opt);
        }
    }
    out += '.';
    return out;
}

inline std::string render_program(const Program& p, const RenderOptions& opt = {}) {
    std::string out;
    for (const auto& r : p.rules()) {
        out += render_rule(r, opt);
        out += '\n';
    }
    return out;
}

}  // namespace lpterm
