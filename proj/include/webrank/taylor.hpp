#pragma once

// Truncated multivariate polynomials in (x - p) and Taylor expansion of
// expressions by structural recursion.

#include <map>
#include <memory>
#include <mutex>
#include <utility>
#include <vector>

#include "webrank/expr.hpp"

namespace webrank {

/// All exponent vectors in n variables with total degree <= M, ordered by
/// degree and then lexicographically with x1 > x2 > ... inside a degree.
class MonomialSpace {
public:
    static std::shared_ptr<const MonomialSpace> get(int n, int max_degree) {
        static std::mutex mutex;
        static std::map<std::pair<int, int>, std::shared_ptr<const MonomialSpace>> cache;
        std::lock_guard lock(mutex);
        auto& slot = cache[{n, max_degree}];
        if (!slot) slot = std::shared_ptr<const MonomialSpace>(new MonomialSpace(n, max_degree));
        return slot;
    }

    int variables() const { return n_; }
    int max_degree() const { return max_degree_; }
    std::size_t size() const { return exponents_.size(); }
    const std::vector<int>& exponent(std::size_t i) const { return exponents_[i]; }
    int degree(std::size_t i) const { return degrees_[i]; }

    /// Index of the exponent vector, or -1 when absent (degree too high).
    long index_of(const std::vector<int>& e) const {
        auto it = index_.find(e);
        return it == index_.end() ? -1 : static_cast<long>(it->second);
    }

    /// Pairs (j, k) with monomial(i) * monomial(j) = monomial(k).
    const std::vector<std::pair<std::size_t, std::size_t>>& products(std::size_t i) const { return products_[i]; }

    /// Degree-h exponent vectors in n variables, x1 > x2 > ... lexicographic (descending).
    static std::vector<std::vector<int>> homogeneous(int n, int h) {
        std::vector<std::vector<int>> out;
        std::vector<int> e(static_cast<std::size_t>(n), 0);
        fill(out, e, 0, h);
        return out;
    }

private:
    MonomialSpace(int n, int max_degree) : n_(n), max_degree_(max_degree) {
        for (int h = 0; h <= max_degree; ++h) {
            for (auto& e : homogeneous(n, h)) {
                index_[e] = exponents_.size();
                exponents_.push_back(std::move(e));
                degrees_.push_back(h);
            }
        }
        products_.resize(exponents_.size());
        std::vector<int> sum(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < exponents_.size(); ++i) {
            for (std::size_t j = 0; j < exponents_.size(); ++j) {
                if (degrees_[i] + degrees_[j] > max_degree) break;
                for (int v = 0; v < n; ++v)
                    sum[static_cast<std::size_t>(v)] = exponents_[i][static_cast<std::size_t>(v)] +
                                                       exponents_[j][static_cast<std::size_t>(v)];
                products_[i].emplace_back(j, index_.at(sum));
            }
        }
    }

    static void fill(std::vector<std::vector<int>>& out, std::vector<int>& e, std::size_t pos, int remaining) {
        if (pos + 1 == e.size()) {
            e[pos] = remaining;
            out.push_back(e);
            return;
        }
        for (int v = remaining; v >= 0; --v) {
            e[pos] = v;
            fill(out, e, pos + 1, remaining - v);
        }
        e[pos] = 0;
    }

    int n_;
    int max_degree_;
    std::vector<std::vector<int>> exponents_;
    std::vector<int> degrees_;
    std::map<std::vector<int>, std::size_t> index_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> products_;
};

/// Polynomial in n variables with every term of total degree <= M.
template <class S>
class TruncatedPoly {
public:
    using Traits = ScalarTraits<S>;

    TruncatedPoly(int n, int max_degree) : space_(MonomialSpace::get(n, max_degree)), coeffs_(space_->size(), S(0)) {}

    static TruncatedPoly constant(int n, int max_degree, const S& c) {
        TruncatedPoly p(n, max_degree);
        p.coeffs_[0] = c;
        return p;
    }

    /// x_j as a polynomial in the shifted variable (x - p): base + (x_j - p_j).
    static TruncatedPoly shifted_variable(int n, int max_degree, int j, const S& base) {
        TruncatedPoly p = constant(n, max_degree, base);
        if (max_degree >= 1) {
            std::vector<int> e(static_cast<std::size_t>(n), 0);
            e[static_cast<std::size_t>(j - 1)] = 1;
            p.coeffs_[static_cast<std::size_t>(p.space_->index_of(e))] = S(1);
        }
        return p;
    }

    int variables() const { return space_->variables(); }
    int max_degree() const { return space_->max_degree(); }
    const MonomialSpace& space() const { return *space_; }
    const std::vector<S>& coefficients() const { return coeffs_; }
    const S& constant_term() const { return coeffs_[0]; }

    /// Coefficient of the monomial with the given exponents (0 beyond the cap).
    S coeff(const std::vector<int>& e) const {
        const long i = space_->index_of(e);
        return i < 0 ? S(0) : coeffs_[static_cast<std::size_t>(i)];
    }
    void set_coeff(const std::vector<int>& e, const S& v) {
        const long i = space_->index_of(e);
        if (i < 0) throw DomainError("set_coeff: monomial beyond degree cap");
        coeffs_[static_cast<std::size_t>(i)] = v;
    }

    TruncatedPoly without_constant() const {
        TruncatedPoly r = *this;
        r.coeffs_[0] = S(0);
        return r;
    }

    /// Drops every term of degree > m (result has cap m).
    TruncatedPoly truncated(int m) const {
        TruncatedPoly r(variables(), m);
        for (std::size_t i = 0; i < r.space_->size(); ++i)
            r.coeffs_[i] = coeffs_[static_cast<std::size_t>(space_->index_of(r.space_->exponent(i)))];
        return r;
    }

    TruncatedPoly& operator+=(const TruncatedPoly& o) {
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
        return *this;
    }
    TruncatedPoly& operator-=(const TruncatedPoly& o) {
        for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
        return *this;
    }
    TruncatedPoly& operator*=(const S& s) {
        for (auto& c : coeffs_) c *= s;
        return *this;
    }
    TruncatedPoly operator-() const {
        TruncatedPoly r = *this;
        for (auto& c : r.coeffs_) c = S(-c);
        return r;
    }

    friend TruncatedPoly operator+(TruncatedPoly a, const TruncatedPoly& b) { return a += b; }
    friend TruncatedPoly operator-(TruncatedPoly a, const TruncatedPoly& b) { return a -= b; }
    friend TruncatedPoly operator*(TruncatedPoly a, const S& s) { return a *= s; }

    friend TruncatedPoly operator*(const TruncatedPoly& a, const TruncatedPoly& b) {
        TruncatedPoly r(a.variables(), a.max_degree());
        S term;
        for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
            if (Traits::is_zero(a.coeffs_[i])) continue;
            for (const auto& [j, k] : a.space_->products(i)) {
                if (Traits::is_zero(b.coeffs_[j])) continue;
                term = a.coeffs_[i];
                term *= b.coeffs_[j];
                r.coeffs_[k] += term;
            }
        }
        return r;
    }

    /// sum_j series[j] * r^j for r without constant term (Horner).
    static TruncatedPoly compose(const std::vector<S>& series, const TruncatedPoly& r) {
        TruncatedPoly acc = constant(r.variables(), r.max_degree(), series.back());
        for (std::size_t j = series.size() - 1; j-- > 0;) {
            acc = acc * r;
            acc.coeffs_[0] += series[j];
        }
        return acc;
    }

    TruncatedPoly power(long e) const {
        if (e < 0) return reciprocal().power(-e);
        TruncatedPoly result = constant(variables(), max_degree(), S(1));
        TruncatedPoly b = *this;
        while (e > 0) {
            if (e & 1) result = result * b;
            e >>= 1;
            if (e) b = b * b;
        }
        return result;
    }

    TruncatedPoly reciprocal() const {
        const S& a0 = constant_term();
        if (Traits::is_zero(a0))
            throw EvalError(EvalError::Kind::singular_expansion, "reciprocal of a series vanishing at the base point");
        std::vector<S> series;
        S inv = Traits::divide(S(1), a0);
        S c = inv;
        for (int j = 0; j <= max_degree(); ++j) {
            series.push_back(c);
            c *= inv;
            c = S(-c);
        }
        return compose(series, without_constant());
    }

    TruncatedPoly exp() const {
        std::vector<S> series;
        S c = Traits::exp(constant_term());
        for (int j = 0; j <= max_degree(); ++j) {
            series.push_back(c);
            c = Traits::divide(c, S(j + 1));
        }
        return compose(series, without_constant());
    }

    TruncatedPoly log() const {
        const S& a0 = constant_term();
        if (Traits::is_zero(a0))
            throw EvalError(EvalError::Kind::singular_expansion, "log of a series vanishing at the base point");
        std::vector<S> series{Traits::log(a0)};
        S inv = Traits::divide(S(1), a0);
        S pw = inv;
        for (int j = 1; j <= max_degree(); ++j) {
            S term = Traits::divide(pw, S(j));
            series.push_back(j % 2 == 1 ? term : S(-term));
            pw *= inv;
        }
        return compose(series, without_constant());
    }

private:
    std::shared_ptr<const MonomialSpace> space_;
    std::vector<S> coeffs_;
};

/// Taylor expansion of e at base (in x - base) with all terms of degree <= M.
template <class S>
TruncatedPoly<S> taylor(const Expr& e, const std::vector<S>& base, int max_degree) {
    using P = TruncatedPoly<S>;
    const int n = static_cast<int>(base.size());
    switch (e.kind()) {
    case ExprKind::variable:
        if (e.index() > n)
            throw EvalError(EvalError::Kind::variable_out_of_range, "base point has no coordinate for x" + std::to_string(e.index()));
        return P::shifted_variable(n, max_degree, e.index(), base[static_cast<std::size_t>(e.index() - 1)]);
    case ExprKind::constant: return P::constant(n, max_degree, ScalarTraits<S>::from_rational(e.value()));
    case ExprKind::sum: {
        P acc(n, max_degree);
        for (const auto& a : e.args()) acc += taylor(a, base, max_degree);
        return acc;
    }
    case ExprKind::product: {
        P acc = P::constant(n, max_degree, S(1));
        for (const auto& a : e.args()) {
            if (a.is_constant()) acc *= ScalarTraits<S>::from_rational(a.value());
            else acc = acc * taylor(a, base, max_degree);
        }
        return acc;
    }
    case ExprKind::quotient:
        return taylor(e.args()[0], base, max_degree) * taylor(e.args()[1], base, max_degree).reciprocal();
    case ExprKind::negate: return -taylor(e.args()[0], base, max_degree);
    case ExprKind::power: return taylor(e.args()[0], base, max_degree).power(e.exponent());
    case ExprKind::exp: return taylor(e.args()[0], base, max_degree).exp();
    case ExprKind::log: return taylor(e.args()[0], base, max_degree).log();
    }
    return P(n, max_degree);
}

} // namespace webrank
