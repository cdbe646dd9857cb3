#pragma once

// Scalar models used throughout: exact rationals (GMP) and extended-precision
// binary floats (MPFR) with a thread-local working precision.

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "webrank/errors.hpp"

namespace webrank {

using Integer = mpz_class;
using Rational = mpq_class;

inline constexpr int default_precision_bits = 128;

namespace detail {
inline mpfr_prec_t& working_precision() {
    thread_local mpfr_prec_t bits = default_precision_bits;
    return bits;
}
} // namespace detail

/// Sets the mantissa width of newly created Real values for the current thread.
class PrecisionGuard {
public:
    explicit PrecisionGuard(int bits) : saved_(detail::working_precision()) {
        detail::working_precision() = static_cast<mpfr_prec_t>(bits);
    }
    ~PrecisionGuard() { detail::working_precision() = saved_; }
    PrecisionGuard(const PrecisionGuard&) = delete;
    PrecisionGuard& operator=(const PrecisionGuard&) = delete;

private:
    mpfr_prec_t saved_;
};

inline int working_precision_bits() { return static_cast<int>(detail::working_precision()); }

/// Owning MPFR value. Results of arithmetic carry the wider of the operand precisions.
class Real {
public:
    Real() { init(detail::working_precision()); mpfr_set_zero(v_, 1); }
    Real(long x) { init(detail::working_precision()); mpfr_set_si(v_, x, MPFR_RNDN); }
    Real(int x) : Real(static_cast<long>(x)) {}
    explicit Real(double x) { init(detail::working_precision()); mpfr_set_d(v_, x, MPFR_RNDN); }
    explicit Real(const Rational& q) { init(detail::working_precision()); mpfr_set_q(v_, q.get_mpq_t(), MPFR_RNDN); }

    Real(const Real& o) { init(mpfr_get_prec(o.v_)); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real(Real&& o) noexcept { init(mpfr_get_prec(o.v_)); mpfr_swap(v_, o.v_); }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept { mpfr_swap(v_, o.v_); return *this; }
    ~Real() { mpfr_clear(v_); }

    mpfr_srcptr get() const { return v_; }
    mpfr_ptr get() { return v_; }
    int precision() const { return static_cast<int>(mpfr_get_prec(v_)); }

    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    /// log2|x|; -infinity for zero.
    double log2_abs() const {
        if (is_zero()) return -INFINITY;
        long exp = 0;
        double mant = mpfr_get_d_2exp(&exp, v_, MPFR_RNDN);
        return std::log2(std::fabs(mant)) + static_cast<double>(exp);
    }

    std::string to_string(int digits = 40) const {
        std::vector<char> buf(static_cast<std::size_t>(digits) + 64);
        mpfr_snprintf(buf.data(), buf.size(), "%.*Rg", digits, v_);
        return std::string(buf.data());
    }

    Real& operator+=(const Real& o) { widen(o); mpfr_add(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator-=(const Real& o) { widen(o); mpfr_sub(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator*=(const Real& o) { widen(o); mpfr_mul(v_, v_, o.v_, MPFR_RNDN); return *this; }
    Real& operator/=(const Real& o) {
        if (o.is_zero()) throw EvalError(EvalError::Kind::division_by_zero, "division by zero");
        widen(o);
        mpfr_div(v_, v_, o.v_, MPFR_RNDN);
        return *this;
    }

    friend Real operator+(Real a, const Real& b) { return a += b; }
    friend Real operator-(Real a, const Real& b) { return a -= b; }
    friend Real operator*(Real a, const Real& b) { return a *= b; }
    friend Real operator/(Real a, const Real& b) { return a /= b; }
    friend Real operator-(Real a) { mpfr_neg(a.v_, a.v_, MPFR_RNDN); return a; }

    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const Real& a, const Real& b) { return b < a; }
    friend bool operator<=(const Real& a, const Real& b) { return !(b < a); }
    friend bool operator>=(const Real& a, const Real& b) { return !(a < b); }

    friend Real abs(Real a) { mpfr_abs(a.v_, a.v_, MPFR_RNDN); return a; }
    friend Real exp(Real a) { mpfr_exp(a.v_, a.v_, MPFR_RNDN); return a; }
    friend Real log(Real a) {
        if (a.sign() <= 0) throw EvalError(EvalError::Kind::log_domain, "log of a non-positive value");
        mpfr_log(a.v_, a.v_, MPFR_RNDN);
        return a;
    }
    /// 2^e at the working precision.
    static Real pow2(long e) { Real r(1L); mpfr_mul_2si(r.v_, r.v_, e, MPFR_RNDN); return r; }

private:
    void init(mpfr_prec_t bits) { mpfr_init2(v_, bits); }
    void widen(const Real& o) {
        if (mpfr_get_prec(o.v_) > mpfr_get_prec(v_)) mpfr_prec_round(v_, mpfr_get_prec(o.v_), MPFR_RNDN);
    }

    mpfr_t v_;
};

Real abs(Real a);
Real exp(Real a);
Real log(Real a);

/// Uniform access to the two scalar models.
template <class S>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
    static constexpr bool exact = true;
    static Rational from_rational(const Rational& q) { return q; }
    static bool is_zero(const Rational& x) { return sgn(x) == 0; }
    static Rational abs(const Rational& x) { return sgn(x) < 0 ? Rational(-x) : x; }
    static Rational divide(const Rational& a, const Rational& b) {
        if (sgn(b) == 0) throw EvalError(EvalError::Kind::division_by_zero, "division by zero");
        return Rational(a / b);
    }
    static Rational exp(const Rational&) {
        throw EvalError(EvalError::Kind::transcendental_in_exact, "exp is not available in exact mode");
    }
    static Rational log(const Rational&) {
        throw EvalError(EvalError::Kind::transcendental_in_exact, "log is not available in exact mode");
    }
    static std::string to_string(const Rational& x) { return x.get_str(); }
    static double log2_abs(const Rational& x) {
        if (sgn(x) == 0) return -INFINITY;
        long en = 0, ed = 0;
        double mn = mpz_get_d_2exp(&en, x.get_num_mpz_t());
        double md = mpz_get_d_2exp(&ed, x.get_den_mpz_t());
        return std::log2(std::fabs(mn)) - std::log2(md) + static_cast<double>(en - ed);
    }
};

template <>
struct ScalarTraits<Real> {
    static constexpr bool exact = false;
    static Real from_rational(const Rational& q) { return Real(q); }
    static bool is_zero(const Real& x) { return x.is_zero(); }
    static Real abs(const Real& x) { return webrank::abs(x); }
    static Real divide(const Real& a, const Real& b) { return a / b; }
    static Real exp(const Real& x) { return webrank::exp(x); }
    static Real log(const Real& x) { return webrank::log(x); }
    static std::string to_string(const Real& x) { return x.to_string(); }
    static double log2_abs(const Real& x) { return x.log2_abs(); }
};

/// x^e for integer e (negative exponents invert; zero base with e < 0 throws).
template <class S>
S int_power(const S& base, long e) {
    if (e < 0) return ScalarTraits<S>::divide(S(1), int_power(base, -e));
    S result(1);
    S b = base;
    while (e > 0) {
        if (e & 1) result *= b;
        e >>= 1;
        if (e) b *= b;
    }
    return result;
}

template <class S>
std::vector<S> to_scalars(const std::vector<Rational>& point) {
    std::vector<S> out;
    out.reserve(point.size());
    for (const auto& q : point) out.push_back(ScalarTraits<S>::from_rational(q));
    return out;
}

/// Scalar model selected for a computation.
struct ScalarMode {
    bool exact = true;
    int precision_bits = default_precision_bits;

    static ScalarMode rational() { return {true, default_precision_bits}; }
    static ScalarMode floating(int bits = default_precision_bits) { return {false, bits}; }
    std::string describe() const { return exact ? "exact" : "float(" + std::to_string(precision_bits) + ")"; }
};

} // namespace webrank
