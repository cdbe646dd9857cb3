#pragma once

// Rank engines: fraction-free (Bareiss) elimination over the integers for
// rational matrices, and equilibrated complete-pivoting elimination with a
// relative pivot threshold for MPFR matrices.

#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include <json.hpp>

#include "webrank/matrix.hpp"
#include "webrank/scalar.hpp"

namespace webrank {

struct RankResult {
    std::size_t rank = 0;
    bool exact = true;
    int precision_bits = 0;
    double tolerance_log2 = 0;  // threshold relative to the largest initial pivot
    std::vector<std::pair<std::size_t, std::size_t>> pivots;
    // log2(smallest accepted pivot / largest rejected one); infinite if nothing was rejected.
    double gap_log2 = std::numeric_limits<double>::infinity();
    bool marginal = false;
    std::optional<Rational> determinant; // square exact matrices only

    nlohmann::json to_json() const {
        nlohmann::json j{{"rank", rank}, {"method", exact ? "exact" : "float"}};
        if (!exact) {
            j["precision_bits"] = precision_bits;
            j["tolerance_log2"] = tolerance_log2;
            j["gap_log2"] = std::isinf(gap_log2) ? nlohmann::json(nullptr) : nlohmann::json(std::round(gap_log2 * 100) / 100);
            j["marginal"] = marginal;
        }
        if (determinant) j["determinant"] = determinant->get_str();
        nlohmann::json pv = nlohmann::json::array();
        for (const auto& [r, c] : pivots) pv.push_back({r, c});
        j["pivots"] = pv;
        return j;
    }
};

/// Exact rank; rows are cleared of denominators and reduced by Bareiss'
/// fraction-free elimination (every intermediate entry is a minor).
inline RankResult exact_rank(const Matrix<Rational>& m) {
    RankResult res;
    res.exact = true;
    const std::size_t R = m.rows(), C = m.cols();
    std::vector<std::vector<Integer>> a(R, std::vector<Integer>(C));
    Rational scale = 1; // product of the row multipliers
    for (std::size_t i = 0; i < R; ++i) {
        Integer l = 1;
        for (std::size_t j = 0; j < C; ++j) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).get_den_mpz_t());
        for (std::size_t j = 0; j < C; ++j) a[i][j] = m(i, j).get_num() * (l / m(i, j).get_den());
        scale *= l;
    }
    std::vector<std::size_t> row_of(R);
    for (std::size_t i = 0; i < R; ++i) row_of[i] = i;
    Integer prev = 1;
    int sign = 1;
    std::size_t r = 0;
    for (std::size_t c = 0; c < C && r < R; ++c) {
        std::size_t p = r;
        while (p < R && sgn(a[p][c]) == 0) ++p;
        if (p == R) continue;
        if (p != r) {
            std::swap(a[p], a[r]);
            std::swap(row_of[p], row_of[r]);
            sign = -sign;
        }
        res.pivots.emplace_back(row_of[r], c);
        const Integer& piv = a[r][c];
        for (std::size_t i = r + 1; i < R; ++i) {
            if (sgn(a[i][c]) == 0) {
                // entries still need the common scaling piv/prev
                for (std::size_t j = c + 1; j < C; ++j) {
                    if (sgn(a[i][j]) == 0) continue;
                    a[i][j] *= piv;
                    mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
                }
                continue;
            }
            for (std::size_t j = c + 1; j < C; ++j) {
                a[i][j] = a[i][j] * piv - a[i][c] * a[r][j];
                mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
            }
            a[i][c] = 0;
        }
        prev = a[r][c];
        ++r;
    }
    res.rank = r;
    if (R == C) {
        if (r == R) res.determinant = Rational(Integer(sign) * prev) / scale;
        else res.determinant = Rational(0);
        res.determinant->canonicalize();
    }
    return res;
}

/// Numerical rank at the working precision of the entries. Columns and rows
/// are first scaled by powers of two to unit sup-norm; a pivot counts when it
/// exceeds 2^tol_log2 times the largest initial pivot (default tol = 2^(-prec/2)).
/// The result is marginal when an accepted or rejected pivot lies within a
/// factor 2^4 of the threshold.
inline RankResult float_rank(const Matrix<Real>& m, std::optional<double> tol_log2 = std::nullopt) {
    RankResult res;
    res.exact = false;
    const std::size_t R = m.rows(), C = m.cols();
    int prec = working_precision_bits();
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = 0; j < C; ++j) prec = std::max(prec, m(i, j).precision());
    PrecisionGuard guard(prec);
    res.precision_bits = prec;
    res.tolerance_log2 = tol_log2.value_or(-prec / 2.0);

    std::vector<std::vector<Real>> a(R, std::vector<Real>(C));
    for (std::size_t i = 0; i < R; ++i)
        for (std::size_t j = 0; j < C; ++j) a[i][j] = m(i, j);

    auto equilibrate = [&](bool by_column) {
        const std::size_t outer = by_column ? C : R, inner = by_column ? R : C;
        for (std::size_t o = 0; o < outer; ++o) {
            long best = std::numeric_limits<long>::min();
            for (std::size_t i = 0; i < inner; ++i) {
                const Real& v = by_column ? a[i][o] : a[o][i];
                if (!v.is_zero()) best = std::max(best, static_cast<long>(mpfr_get_exp(v.get())));
            }
            if (best == std::numeric_limits<long>::min()) continue;
            for (std::size_t i = 0; i < inner; ++i) {
                Real& v = by_column ? a[i][o] : a[o][i];
                mpfr_mul_2si(v.get(), v.get(), -best, MPFR_RNDN);
            }
        }
    };
    equilibrate(true);
    equilibrate(false);

    std::vector<std::size_t> row_of(R), col_of(C);
    for (std::size_t i = 0; i < R; ++i) row_of[i] = i;
    for (std::size_t j = 0; j < C; ++j) col_of[j] = j;

    double threshold_log2 = 0;
    double min_accepted = std::numeric_limits<double>::infinity();
    double max_rejected = -std::numeric_limits<double>::infinity();
    std::size_t r = 0;
    const std::size_t steps = std::min(R, C);
    for (; r < steps; ++r) {
        std::size_t bi = r, bj = r;
        for (std::size_t i = r; i < R; ++i)
            for (std::size_t j = r; j < C; ++j)
                if (mpfr_cmpabs(a[i][j].get(), a[bi][bj].get()) > 0) {
                    bi = i;
                    bj = j;
                }
        const Real best = abs(a[bi][bj]);
        const double best_log2 = best.log2_abs();
        if (r == 0) {
            if (best.is_zero()) break;
            threshold_log2 = best_log2 + res.tolerance_log2;
        }
        if (best.is_zero() || best_log2 <= threshold_log2) {
            max_rejected = best_log2;
            break;
        }
        min_accepted = std::min(min_accepted, best_log2);
        std::swap(a[r], a[bi]);
        std::swap(row_of[r], row_of[bi]);
        if (bj != r) {
            for (std::size_t i = 0; i < R; ++i) std::swap(a[i][r], a[i][bj]);
            std::swap(col_of[r], col_of[bj]);
        }
        res.pivots.emplace_back(row_of[r], col_of[r]);
        for (std::size_t i = r + 1; i < R; ++i) {
            if (a[i][r].is_zero()) continue;
            Real f = a[i][r] / a[r][r];
            for (std::size_t j = r + 1; j < C; ++j) {
                if (a[r][j].is_zero()) continue;
                a[i][j] -= f * a[r][j];
            }
            a[i][r] = Real(0L);
        }
    }
    res.rank = r;
    if (res.rank > 0) {
        res.gap_log2 = std::isinf(max_rejected) ? std::numeric_limits<double>::infinity() : min_accepted - max_rejected;
        const bool accepted_close = min_accepted < threshold_log2 + 4;
        const bool rejected_close = !std::isinf(max_rejected) && max_rejected > threshold_log2 - 4;
        res.marginal = accepted_close || rejected_close;
    }
    return res;
}

inline RankResult matrix_rank(const Matrix<Rational>& m) { return exact_rank(m); }
inline RankResult matrix_rank(const Matrix<Real>& m) { return float_rank(m); }

} // namespace webrank
