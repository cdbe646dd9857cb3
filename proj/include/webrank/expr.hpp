#pragma once

// Immutable expression trees for first integrals.
//
// Trees are built only through the make_* factories, which flatten nested sums
// and products and fold constant arithmetic. There is no general simplifier.

#include <memory>
#include <random>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "webrank/errors.hpp"
#include "webrank/scalar.hpp"

namespace webrank {

enum class ExprKind { variable, constant, sum, product, quotient, negate, power, exp, log };

class Expr {
public:
    /// The constant 0.
    Expr();

    static Expr variable(int index);
    static Expr constant(Rational value);

    ExprKind kind() const { return node_->kind; }
    int index() const { return node_->index; }
    const Rational& value() const { return node_->value; }
    long exponent() const { return node_->exponent; }
    const std::vector<Expr>& args() const { return node_->args; }

    bool is_constant() const { return kind() == ExprKind::constant; }
    bool is_constant(long v) const { return is_constant() && value() == v; }

    friend bool operator==(const Expr& a, const Expr& b);
    friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

private:
    struct Node {
        ExprKind kind = ExprKind::constant;
        int index = 0;
        Rational value;
        long exponent = 0;
        std::vector<Expr> args;
    };

    explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    static Expr make(ExprKind kind, std::vector<Expr> args, long exponent = 0);

    friend Expr make_sum(std::vector<Expr> terms);
    friend Expr make_product(std::vector<Expr> factors);
    friend Expr make_quotient(Expr num, Expr den);
    friend Expr make_neg(Expr a);
    friend Expr make_pow(Expr base, long exponent);
    friend Expr make_exp(Expr a);
    friend Expr make_log(Expr a);

    std::shared_ptr<const Node> node_;
};

Expr make_sum(std::vector<Expr> terms);
Expr make_product(std::vector<Expr> factors);
Expr make_quotient(Expr num, Expr den);
Expr make_neg(Expr a);
Expr make_pow(Expr base, long exponent);
Expr make_exp(Expr a);
Expr make_log(Expr a);

inline Expr::Expr() : Expr(Expr::constant(0)) {}

inline Expr Expr::variable(int index) {
    if (index < 1) throw DomainError("variable index must be >= 1");
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::variable;
    n->index = index;
    return Expr(std::move(n));
}

inline Expr Expr::constant(Rational value) {
    auto n = std::make_shared<Node>();
    n->kind = ExprKind::constant;
    value.canonicalize();
    n->value = std::move(value);
    return Expr(std::move(n));
}

inline Expr Expr::make(ExprKind kind, std::vector<Expr> args, long exponent) {
    auto n = std::make_shared<Node>();
    n->kind = kind;
    n->args = std::move(args);
    n->exponent = exponent;
    return Expr(std::move(n));
}

inline bool operator==(const Expr& a, const Expr& b) {
    if (a.node_ == b.node_) return true;
    if (a.kind() != b.kind()) return false;
    switch (a.kind()) {
    case ExprKind::variable: return a.index() == b.index();
    case ExprKind::constant: return a.value() == b.value();
    case ExprKind::power:
        if (a.exponent() != b.exponent()) return false;
        break;
    default: break;
    }
    return a.args() == b.args();
}

inline Expr make_sum(std::vector<Expr> terms) {
    std::vector<Expr> flat;
    Rational constant = 0;
    for (auto& t : terms) {
        if (t.kind() == ExprKind::sum) {
            for (const auto& s : t.args()) {
                if (s.is_constant()) constant += s.value();
                else flat.push_back(s);
            }
        } else if (t.is_constant()) {
            constant += t.value();
        } else {
            flat.push_back(std::move(t));
        }
    }
    if (sgn(constant) != 0) flat.push_back(Expr::constant(constant));
    if (flat.empty()) return Expr::constant(0);
    if (flat.size() == 1) return flat.front();
    return Expr::make(ExprKind::sum, std::move(flat));
}

inline Expr make_product(std::vector<Expr> factors) {
    std::vector<Expr> flat;
    Rational constant = 1;
    for (auto& f : factors) {
        if (f.kind() == ExprKind::product) {
            for (const auto& s : f.args()) {
                if (s.is_constant()) constant *= s.value();
                else flat.push_back(s);
            }
        } else if (f.is_constant()) {
            constant *= f.value();
        } else {
            flat.push_back(std::move(f));
        }
    }
    if (sgn(constant) == 0) return Expr::constant(0);
    if (flat.empty()) return Expr::constant(constant);
    if (constant != 1) flat.insert(flat.begin(), Expr::constant(constant));
    if (flat.size() == 1) return flat.front();
    return Expr::make(ExprKind::product, std::move(flat));
}

inline Expr make_quotient(Expr num, Expr den) {
    if (den.is_constant()) {
        if (sgn(den.value()) == 0) return Expr::make(ExprKind::quotient, {std::move(num), std::move(den)});
        if (den.value() == 1) return num;
        return make_product({Expr::constant(Rational(1 / den.value())), std::move(num)});
    }
    if (num.is_constant(0)) return num;
    return Expr::make(ExprKind::quotient, {std::move(num), std::move(den)});
}

inline Expr make_neg(Expr a) {
    if (a.is_constant()) return Expr::constant(Rational(-a.value()));
    if (a.kind() == ExprKind::negate) return a.args().front();
    return Expr::make(ExprKind::negate, {std::move(a)});
}

inline Expr make_pow(Expr base, long exponent) {
    if (exponent == 0) return Expr::constant(1);
    if (exponent == 1) return base;
    if (base.is_constant() && (sgn(base.value()) != 0 || exponent > 0))
        return Expr::constant(int_power(base.value(), exponent));
    return Expr::make(ExprKind::power, {std::move(base)}, exponent);
}

inline Expr make_exp(Expr a) {
    if (a.is_constant(0)) return Expr::constant(1);
    return Expr::make(ExprKind::exp, {std::move(a)});
}

inline Expr make_log(Expr a) {
    if (a.is_constant(1)) return Expr::constant(0);
    return Expr::make(ExprKind::log, {std::move(a)});
}

inline Expr operator+(Expr a, Expr b) { return make_sum({std::move(a), std::move(b)}); }
inline Expr operator-(Expr a, Expr b) { return make_sum({std::move(a), make_neg(std::move(b))}); }
inline Expr operator*(Expr a, Expr b) { return make_product({std::move(a), std::move(b)}); }
inline Expr operator/(Expr a, Expr b) { return make_quotient(std::move(a), std::move(b)); }
inline Expr operator-(Expr a) { return make_neg(std::move(a)); }

/// Symbolic partial derivative with respect to x_j.
inline Expr diff(const Expr& e, int j) {
    switch (e.kind()) {
    case ExprKind::variable: return Expr::constant(e.index() == j ? 1 : 0);
    case ExprKind::constant: return Expr::constant(0);
    case ExprKind::sum: {
        std::vector<Expr> terms;
        for (const auto& a : e.args()) terms.push_back(diff(a, j));
        return make_sum(std::move(terms));
    }
    case ExprKind::product: {
        const auto& fs = e.args();
        std::vector<Expr> terms;
        for (std::size_t i = 0; i < fs.size(); ++i) {
            Expr d = diff(fs[i], j);
            if (d.is_constant(0)) continue;
            std::vector<Expr> factors = fs;
            factors[i] = d;
            terms.push_back(make_product(std::move(factors)));
        }
        return make_sum(std::move(terms));
    }
    case ExprKind::quotient: {
        const Expr& num = e.args()[0];
        const Expr& den = e.args()[1];
        Expr dn = diff(num, j);
        Expr dd = diff(den, j);
        if (dd.is_constant(0)) return make_quotient(dn, den);
        return make_quotient(make_sum({make_product({dn, den}), make_neg(make_product({num, dd}))}),
                             make_pow(den, 2));
    }
    case ExprKind::negate: return make_neg(diff(e.args()[0], j));
    case ExprKind::power: {
        const Expr& base = e.args()[0];
        Expr db = diff(base, j);
        if (db.is_constant(0)) return Expr::constant(0);
        return make_product({Expr::constant(e.exponent()), make_pow(base, e.exponent() - 1), db});
    }
    case ExprKind::exp: {
        Expr da = diff(e.args()[0], j);
        if (da.is_constant(0)) return Expr::constant(0);
        return make_product({e, da});
    }
    case ExprKind::log: {
        Expr da = diff(e.args()[0], j);
        if (da.is_constant(0)) return Expr::constant(0);
        return make_quotient(da, e.args()[0]);
    }
    }
    return Expr::constant(0);
}

/// Replaces x_j by replacements[j-1], rebuilding through the folding factories.
inline Expr substitute(const Expr& e, const std::vector<Expr>& replacements) {
    switch (e.kind()) {
    case ExprKind::variable:
        if (e.index() > static_cast<int>(replacements.size()))
            throw DomainError("substitute: no replacement for x" + std::to_string(e.index()));
        return replacements[static_cast<std::size_t>(e.index() - 1)];
    case ExprKind::constant: return e;
    case ExprKind::sum:
    case ExprKind::product: {
        std::vector<Expr> xs;
        for (const auto& a : e.args()) xs.push_back(substitute(a, replacements));
        return e.kind() == ExprKind::sum ? make_sum(std::move(xs)) : make_product(std::move(xs));
    }
    case ExprKind::quotient:
        return make_quotient(substitute(e.args()[0], replacements), substitute(e.args()[1], replacements));
    case ExprKind::negate: return make_neg(substitute(e.args()[0], replacements));
    case ExprKind::power: return make_pow(substitute(e.args()[0], replacements), e.exponent());
    case ExprKind::exp: return make_exp(substitute(e.args()[0], replacements));
    case ExprKind::log: return make_log(substitute(e.args()[0], replacements));
    }
    return e;
}

/// Renames variables: x_j becomes x_{targets[j-1]}.
inline Expr rename_variables(const Expr& e, const std::vector<int>& targets) {
    std::vector<Expr> repl;
    repl.reserve(targets.size());
    for (int t : targets) repl.push_back(Expr::variable(t));
    return substitute(e, repl);
}

inline int max_variable(const Expr& e) {
    if (e.kind() == ExprKind::variable) return e.index();
    int m = 0;
    for (const auto& a : e.args()) m = std::max(m, max_variable(a));
    return m;
}

inline bool is_transcendental(const Expr& e) {
    if (e.kind() == ExprKind::exp || e.kind() == ExprKind::log) return true;
    for (const auto& a : e.args())
        if (is_transcendental(a)) return true;
    return false;
}

template <class S>
S eval(const Expr& e, std::span<const S> point) {
    using T = ScalarTraits<S>;
    switch (e.kind()) {
    case ExprKind::variable:
        if (e.index() > static_cast<int>(point.size()))
            throw EvalError(EvalError::Kind::variable_out_of_range,
                            "point has no coordinate for x" + std::to_string(e.index()));
        return point[static_cast<std::size_t>(e.index() - 1)];
    case ExprKind::constant: return T::from_rational(e.value());
    case ExprKind::sum: {
        S acc(0);
        for (const auto& a : e.args()) acc += eval<S>(a, point);
        return acc;
    }
    case ExprKind::product: {
        S acc(1);
        for (const auto& a : e.args()) acc *= eval<S>(a, point);
        return acc;
    }
    case ExprKind::quotient: return T::divide(eval<S>(e.args()[0], point), eval<S>(e.args()[1], point));
    case ExprKind::negate: return S(-eval<S>(e.args()[0], point));
    case ExprKind::power: return int_power(eval<S>(e.args()[0], point), e.exponent());
    case ExprKind::exp: return T::exp(eval<S>(e.args()[0], point));
    case ExprKind::log: return T::log(eval<S>(e.args()[0], point));
    }
    return S(0);
}

template <class S>
S eval(const Expr& e, const std::vector<S>& point) {
    return eval<S>(e, std::span<const S>(point.data(), point.size()));
}

/// Gradient (x_1..x_n) as symbolic derivatives.
inline std::vector<Expr> gradient(const Expr& e, int n) {
    std::vector<Expr> g;
    g.reserve(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) g.push_back(diff(e, j));
    return g;
}

namespace detail {

inline std::string constant_text(const Rational& q) {
    if (q.get_den() == 1 && sgn(q) >= 0) return q.get_str();
    return "(" + q.get_str() + ")";
}

// Precedence levels: 1 sum, 2 product/quotient, 3 unary minus, 4 power, 5 atom.
inline int precedence(const Expr& e) {
    switch (e.kind()) {
    case ExprKind::sum: return 1;
    case ExprKind::product:
    case ExprKind::quotient: return 2;
    case ExprKind::negate: return 3;
    case ExprKind::power: return 4;
    default: return 5;
    }
}

std::string print_at(const Expr& e, int min_prec);

inline std::string print_node(const Expr& e) {
    switch (e.kind()) {
    case ExprKind::variable: return "x" + std::to_string(e.index());
    case ExprKind::constant: return constant_text(e.value());
    case ExprKind::sum: {
        std::string out;
        bool first = true;
        for (const auto& t : e.args()) {
            if (first) {
                out += print_at(t, 2);
                first = false;
            } else if (t.kind() == ExprKind::negate) {
                out += " - " + print_at(t.args()[0], 2);
            } else if (t.is_constant() && sgn(t.value()) < 0) {
                out += " - " + Rational(-t.value()).get_str();
            } else {
                out += " + " + print_at(t, 2);
            }
        }
        return out;
    }
    case ExprKind::product: {
        std::string out;
        for (std::size_t i = 0; i < e.args().size(); ++i) {
            if (i) out += "*";
            out += print_at(e.args()[i], 3);
        }
        return out;
    }
    case ExprKind::quotient: return print_at(e.args()[0], 2) + "/" + print_at(e.args()[1], 3);
    case ExprKind::negate: return "-" + print_at(e.args()[0], 4);
    case ExprKind::power: {
        const Expr& b = e.args()[0];
        std::string base = (precedence(b) >= 5 && !(b.is_constant() && b.value().get_den() != 1))
                               ? print_node(b)
                               : "(" + print_node(b) + ")";
        std::string ex = e.exponent() < 0 ? "(" + std::to_string(e.exponent()) + ")" : std::to_string(e.exponent());
        return base + "^" + ex;
    }
    case ExprKind::exp: return "exp(" + print_node(e.args()[0]) + ")";
    case ExprKind::log: return "log(" + print_node(e.args()[0]) + ")";
    }
    return "";
}

// Products are left-associative chains, so a quotient may only appear as the
// leading factor without parentheses; callers pass min_prec 3 for factors.
inline std::string print_at(const Expr& e, int min_prec) {
    std::string s = print_node(e);
    return precedence(e) < min_prec ? "(" + s + ")" : s;
}

} // namespace detail

/// Text in the parser grammar; parse(to_string(e)) rebuilds e structurally.
inline std::string to_string(const Expr& e) { return detail::print_node(e); }

/// Seeded rational points used for zero testing: components in [-3,3] with
/// denominators at most 64.
inline std::vector<std::vector<Rational>> zero_test_points(int n, int count = 8, std::uint64_t seed = 0x5eedc0ffeeULL) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> den_dist(1, 64);
    std::vector<std::vector<Rational>> pts;
    for (int i = 0; i < count; ++i) {
        std::vector<Rational> p;
        for (int j = 0; j < n; ++j) {
            long den = den_dist(rng);
            std::uniform_int_distribution<long> num_dist(-3 * den, 3 * den);
            Rational q(num_dist(rng), den);
            q.canonicalize();
            p.push_back(q);
        }
        pts.push_back(std::move(p));
    }
    return pts;
}

/// Heuristic identical-zero test: folded constant 0, or zero at every seeded
/// sample point. Evaluation failures count as "not zero".
inline bool is_identically_zero(const Expr& e, int n) {
    if (e.is_constant()) return sgn(e.value()) == 0;
    const bool transcendental = is_transcendental(e);
    for (const auto& p : zero_test_points(std::max(n, max_variable(e)))) {
        try {
            if (!transcendental) {
                if (sgn(eval<Rational>(e, p)) != 0) return false;
            } else {
                PrecisionGuard guard(default_precision_bits);
                Real v = eval<Real>(e, to_scalars<Real>(p));
                if (!(v.is_zero() || v.log2_abs() < -default_precision_bits / 2)) return false;
            }
        } catch (const EvalError&) {
            return false;
        }
    }
    return true;
}

/// Indices j whose partial derivative is not identically zero.
inline std::set<int> vars_used(const Expr& e) {
    std::set<int> used;
    const int n = max_variable(e);
    for (int j = 1; j <= n; ++j)
        if (!is_identically_zero(diff(e, j), n)) used.insert(j);
    return used;
}

} // namespace webrank
