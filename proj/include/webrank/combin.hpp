#pragma once

// Integer combinatorics of calibrated webs: binomials with the zero-outside-range
// convention, dimensions c(n,h), the rank bounds pi'(n,d) and rho(n,k0), and the
// per-support counts N(h,k0).

#include <map>
#include <optional>
#include <string>

#include "webrank/errors.hpp"
#include "webrank/scalar.hpp"

namespace webrank::combin {

/// binom(p, q), zero when q < 0 or q > p.
inline Integer binom(long p, long q) {
    if (p < 0) throw DomainError("binom: p must be non-negative, got " + std::to_string(p));
    if (q < 0 || q > p) return 0;
    Integer r;
    mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(q));
    return r;
}

/// Dimension of the space of homogeneous polynomials of degree h in n variables.
inline Integer c(long n, long h) {
    if (n < 1 || h < 0) throw DomainError("c(n,h) requires n >= 1 and h >= 0");
    return binom(n + h - 1, h);
}

/// The unique k0 >= 1 with c(n,k0) <= d < c(n,k0+1).
inline long k0_of(long n, const Integer& d) {
    if (n < 2) throw DomainError("k0_of requires n >= 2");
    if (d < n) throw DomainError("k0_of requires d >= n");
    long k = 1;
    while (!(d < c(n, k + 1))) ++k;
    return k;
}

/// Maximal rank of an ordinary d-web of codimension one in dimension n.
/// Both closed form and sum form are evaluated and must agree.
inline Integer pi_prime(long n, const Integer& d) {
    const long k0 = k0_of(n, d);
    Integer closed = Integer(k0) * d - c(n + 1, k0) + 1;
    Integer summed = 0;
    for (long h = 1; h <= k0; ++h) summed += d - c(n, h);
    if (closed != summed)
        throw InternalError("pi_prime: closed form " + closed.get_str() + " != sum form " + summed.get_str());
    return closed;
}

inline Integer rho(long n, long k0) {
    if (n < 2 || k0 < 2) throw DomainError("rho requires n >= 2 and k0 >= 2");
    return pi_prime(n, c(n, k0));
}

struct CountingTable {
    long k0 = 0;
    std::map<long, Integer> rho_values;
    std::map<long, Integer> N_values;
};

/// N(2,k0) = rho(2,k0); N(n,k0) = rho(n,k0) - sum_{h=2}^{n-1} N(h,k0) binom(n,h).
inline CountingTable N_table(long k0, long n_max) {
    if (k0 < 2 || n_max < 2) throw DomainError("N_table requires k0 >= 2 and n_max >= 2");
    CountingTable t;
    t.k0 = k0;
    for (long n = 2; n <= n_max; ++n) {
        Integer r = rho(n, k0);
        t.rho_values[n] = r;
        Integer acc = r;
        for (long h = 2; h < n; ++h) acc -= t.N_values[h] * binom(n, h);
        t.N_values[n] = acc;
    }
    return t;
}

struct IdentityCheck {
    bool holds = true;
    std::optional<std::string> counterexample;
};

/// Checks the monomial-support decomposition of c(n,h) and the expansion of
/// rho(n,k0) over the N(h,k0), including N(h,k0) = 0 beyond k0.
inline IdentityCheck verify_identities(long k0, long n_max, long h_max) {
    IdentityCheck out;
    for (long n = 1; n <= n_max && out.holds; ++n) {
        for (long h = 1; h <= h_max; ++h) {
            Integer s = 0;
            for (long k = 1; k <= h; ++k) s += binom(h - 1, k - 1) * binom(n, k);
            if (s != c(n, h)) {
                out.holds = false;
                out.counterexample = "support decomposition fails at n=" + std::to_string(n) +
                                     ", h=" + std::to_string(h);
                break;
            }
        }
    }
    if (!out.holds || n_max < 2) return out;
    const CountingTable t = N_table(k0, n_max);
    for (long n = 2; n <= n_max; ++n) {
        Integer s = 0;
        for (long h = 2; h <= k0; ++h) {
            auto it = t.N_values.find(h);
            if (it != t.N_values.end()) s += it->second * binom(n, h);
        }
        if (s != t.rho_values.at(n)) {
            out.holds = false;
            out.counterexample = "rho expansion fails at k0=" + std::to_string(k0) + ", n=" + std::to_string(n);
            return out;
        }
        if (n > k0 && t.N_values.at(n) != 0) {
            out.holds = false;
            out.counterexample = "N(" + std::to_string(n) + "," + std::to_string(k0) + ") = " +
                                 t.N_values.at(n).get_str() + " != 0";
            return out;
        }
    }
    return out;
}

} // namespace webrank::combin
