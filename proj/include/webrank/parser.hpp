#pragma once

// Recursive-descent parser for the first-integral grammar:
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' exponent)?          (right-associative)
//   exponent:= ['-'] integer | '(' ['-'] integer ')'  [ '^' exponent ]
//   primary := number | 'x' digits | ('exp' | 'log') '(' expr ')' | '(' expr ')'
//
// Numbers are integers or decimals and are read as exact rationals; "p/q" is an
// ordinary quotient folded to a constant.

#include <cctype>
#include <string>
#include <string_view>

#include "webrank/expr.hpp"

namespace webrank {

namespace detail {

class Parser {
public:
    Parser(std::string_view text, int arity) : text_(text), arity_(arity) {}

    Expr parse_all() {
        Expr e = parse_expr();
        skip_ws();
        if (pos_ != text_.size()) fail(ParseError::Kind::syntax, "unexpected '" + std::string(1, text_[pos_]) + "'");
        return e;
    }

private:
    [[noreturn]] void fail(ParseError::Kind kind, const std::string& msg) const { throw ParseError(kind, pos_, msg); }

    void skip_ws() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }

    bool accept(char c) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    void expect(char c) {
        if (!accept(c)) fail(ParseError::Kind::syntax, std::string("expected '") + c + "'");
    }

    char peek() {
        skip_ws();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    Expr parse_expr() {
        Expr lhs = parse_term();
        for (;;) {
            if (accept('+')) lhs = make_sum({lhs, parse_term()});
            else if (accept('-')) lhs = make_sum({lhs, make_neg(parse_term())});
            else return lhs;
        }
    }

    Expr parse_term() {
        Expr lhs = parse_unary();
        for (;;) {
            if (accept('*')) lhs = make_product({lhs, parse_unary()});
            else if (accept('/')) lhs = make_quotient(lhs, parse_unary());
            else return lhs;
        }
    }

    Expr parse_unary() {
        if (accept('-')) return make_neg(parse_unary());
        return parse_power();
    }

    Expr parse_power() {
        Expr base = parse_primary();
        if (accept('^')) return make_pow(base, parse_exponent());
        return base;
    }

    long parse_exponent() {
        bool paren = accept('(');
        bool negative = accept('-');
        skip_ws();
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        if (start == pos_) fail(ParseError::Kind::non_integer_exponent, "exponent must be an integer literal");
        if (pos_ < text_.size() && text_[pos_] == '.')
            fail(ParseError::Kind::non_integer_exponent, "exponent must be an integer literal");
        long value = std::stol(std::string(text_.substr(start, pos_ - start)));
        if (negative) value = -value;
        if (paren) expect(')');
        if (accept('^')) {
            long rhs = parse_exponent();
            if (rhs < 0) fail(ParseError::Kind::non_integer_exponent, "exponent tower must be non-negative");
            long r = 1;
            for (long i = 0; i < rhs; ++i) r *= value;
            value = r;
        }
        return value;
    }

    Expr parse_number() {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
        std::string digits(text_.substr(start, pos_ - start));
        Integer den = 1;
        if (pos_ < text_.size() && text_[pos_] == '.') {
            ++pos_;
            const std::size_t fstart = pos_;
            while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            const std::string frac(text_.substr(fstart, pos_ - fstart));
            if (digits.empty() && frac.empty()) fail(ParseError::Kind::syntax, "malformed number");
            digits += frac;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
        }
        Rational q(Integer(digits.empty() ? "0" : digits, 10), den);
        q.canonicalize();
        return Expr::constant(q);
    }

    Expr parse_primary() {
        const char c = peek();
        if (c == '(') {
            ++pos_;
            Expr e = parse_expr();
            expect(')');
            return e;
        }
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
        if (std::isalpha(static_cast<unsigned char>(c))) {
            const std::size_t start = pos_;
            while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
            const std::string ident(text_.substr(start, pos_ - start));
            if (ident == "exp" || ident == "log") {
                expect('(');
                Expr arg = parse_expr();
                expect(')');
                return ident == "exp" ? make_exp(arg) : make_log(arg);
            }
            if (ident.size() >= 2 && ident[0] == 'x' &&
                ident.find_first_not_of("0123456789", 1) == std::string::npos && ident[1] != '0') {
                const int idx = std::stoi(ident.substr(1));
                if (idx > arity_) {
                    pos_ = start;
                    fail(ParseError::Kind::variable_out_of_range,
                         "variable " + ident + " exceeds arity " + std::to_string(arity_));
                }
                return Expr::variable(idx);
            }
            pos_ = start;
            fail(ParseError::Kind::unknown_identifier, "unknown identifier '" + ident + "'");
        }
        if (c == '\0') fail(ParseError::Kind::syntax, "unexpected end of input");
        fail(ParseError::Kind::syntax, "unexpected '" + std::string(1, c) + "'");
    }

    std::string_view text_;
    int arity_;
    std::size_t pos_ = 0;
};

} // namespace detail

/// Parses an expression over the variables x1..x<arity>.
inline Expr parse(std::string_view text, int arity) {
    if (arity < 1) throw DomainError("parse: arity must be >= 1");
    return detail::Parser(text, arity).parse_all();
}

} // namespace webrank
