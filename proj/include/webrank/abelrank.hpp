#pragma once

// Dimension of the space of abelian relations sum_i g_i(u_i) = const, estimated
// from truncated jets. Each g_i is a polynomial without constant term in
// t_i = u_i - u_i(p); the unknown coefficients are mapped to the Taylor
// coefficients of degrees 1..M of sum_i g_i(u_i) at p, and the kernel
// dimension of that map is recorded for increasing M until it stabilizes.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "webrank/ordinary.hpp"
#include "webrank/taylor.hpp"

namespace webrank {

struct KernelDimension {
    long dimension = 0;
    RankResult rank;
};

struct RankEstimate {
    std::map<int, long> dims;
    std::optional<int> stabilized_at;
    std::optional<long> value;
    bool marginal = false;
    ScalarMode mode;
    std::vector<std::string> notes;

    nlohmann::json to_json() const {
        nlohmann::json d = nlohmann::json::object();
        for (const auto& [m, v] : dims) d[std::to_string(m)] = v;
        nlohmann::json j{{"dims", d}, {"mode", mode.describe()}, {"marginal", marginal}};
        j["stabilized_at"] = stabilized_at ? nlohmann::json(*stabilized_at) : nlohmann::json(nullptr);
        j["value"] = value ? nlohmann::json(*value) : nlohmann::json(nullptr);
        if (!notes.empty()) j["notes"] = notes;
        return j;
    }
};

/// The linear map (unknowns gamma_{i,m}, i = entry, m = 1..M) -> Taylor
/// coefficients of degree 1..M, as a matrix; column (i,m) is the expansion of t_i^m.
template <class S>
Matrix<S> relation_system(const AssembledWeb& w, const std::vector<S>& p, int M) {
    const auto space = MonomialSpace::get(w.n, M);
    const std::size_t rows = space->size() - 1;
    const std::size_t d = w.size();
    Matrix<S> A(rows, d * static_cast<std::size_t>(M));
    for (std::size_t i = 0; i < d; ++i) {
        const TruncatedPoly<S> t = taylor<S>(w.entries[i].integral, p, M).without_constant();
        TruncatedPoly<S> pw = t;
        for (int m = 1; m <= M; ++m) {
            if (m > 1) pw = pw * t;
            const std::size_t col = i * static_cast<std::size_t>(M) + static_cast<std::size_t>(m - 1);
            for (std::size_t r = 0; r < rows; ++r) A(r, col) = pw.coefficients()[r + 1];
        }
    }
    return A;
}

template <class S>
KernelDimension relation_kernel(const AssembledWeb& w, const std::vector<S>& p, int M) {
    KernelDimension k;
    const Matrix<S> A = relation_system<S>(w, p, M);
    k.rank = matrix_rank(A);
    k.dimension = static_cast<long>(A.cols()) - static_cast<long>(k.rank.rank);
    return k;
}

namespace detail {

template <class S>
RankEstimate estimate_with(const AssembledWeb& w, const std::vector<Rational>& p, int M_start, int M_cap) {
    RankEstimate est;
    const auto ps = to_scalars<S>(p);
    for (int M = M_start; M <= M_cap; ++M) {
        const KernelDimension k = relation_kernel<S>(w, ps, M);
        est.dims[M] = k.dimension;
        est.marginal = est.marginal || k.rank.marginal;
        auto prev = est.dims.find(M - 1);
        if (prev != est.dims.end() && prev->second == k.dimension) {
            est.stabilized_at = M - 1;
            est.value = k.dimension;
            break;
        }
    }
    return est;
}

} // namespace detail

/// Kernel dimensions for M = M_start..M_cap; the value is the first M with
/// dims[M] = dims[M+1]. Float mode escalates precision while any rank decision is marginal.
inline RankEstimate rank_estimate(const AssembledWeb& w, const std::vector<Rational>& p, int M_start, int M_cap,
                                  const CheckOptions& opts = {}) {
    if (M_start < 1 || M_cap < M_start) throw DomainError("rank_estimate requires 1 <= M_start <= M_cap");
    if (static_cast<int>(p.size()) != w.n) throw DomainError("rank_estimate: base point has the wrong dimension");
    if (!w.transcendental()) {
        RankEstimate est = detail::estimate_with<Rational>(w, p, M_start, M_cap);
        est.mode = ScalarMode::rational();
        return est;
    }
    RankEstimate est;
    for (int bits = opts.precision_bits; bits <= opts.max_precision_bits; bits *= 2) {
        PrecisionGuard guard(bits);
        est = detail::estimate_with<Real>(w, p, M_start, M_cap);
        est.mode = ScalarMode::floating(bits);
        if (!est.marginal) break;
        est.notes.push_back("marginal pivots at " + std::to_string(bits) + " bits");
    }
    if (est.marginal) est.value.reset();
    return est;
}

/// A sampled point where every integral is regular with nonzero gradient and
/// the differentials are pairwise non-proportional.
inline std::optional<std::vector<Rational>> find_generic_point(const AssembledWeb& w, GenericPointSampler& sampler,
                                                               const CheckOptions& opts = {}) {
    const auto grads = symbolic_gradients(w.integrals(), w.n);
    const bool transcendental = w.transcendental();
    for (int attempt = 0; attempt < sampler.max_retries(); ++attempt) {
        auto p = sampler.next(w.n);
        std::optional<std::vector<std::pair<std::size_t, std::size_t>>> pairs;
        try {
            if (transcendental) {
                PrecisionGuard guard(opts.precision_bits);
                for (const auto& e : w.entries) (void)eval<Real>(e.integral, to_scalars<Real>(p));
                pairs = detail::proportional_pairs<Real>(grads, p);
            } else {
                for (const auto& e : w.entries) (void)eval<Rational>(e.integral, p);
                pairs = detail::proportional_pairs<Rational>(grads, p);
            }
        } catch (const EvalError&) {
            continue;
        }
        if (pairs && pairs->empty()) return p;
    }
    return std::nullopt;
}

struct SupportDecomposition {
    std::map<int, long> rank;  // r(h): rank of W(h,E)
    std::map<int, long> delta; // relations involving exactly h given variables
    bool complete = true;
    std::map<int, RankEstimate> estimates;

    nlohmann::json to_json() const {
        nlohmann::json r = nlohmann::json::object(), d = nlohmann::json::object();
        for (const auto& [h, v] : rank) r[std::to_string(h)] = v;
        for (const auto& [h, v] : delta) d[std::to_string(h)] = v;
        return {{"rank", r}, {"delta", d}, {"complete", complete}};
    }
};

/// From the ranks r(h) of the sub-webs on the first h variables:
/// delta(2) = r(2), delta(h) = r(h) - sum_{j=2}^{h-1} delta(j) binom(h,j).
inline std::map<int, long> exact_support_counts(const std::map<int, long>& r) {
    std::map<int, long> delta;
    for (const auto& [h, rh] : r) {
        Integer acc = rh;
        for (int j = 2; j < h; ++j) acc -= Integer(delta.at(j)) * combin::binom(h, j);
        delta[h] = acc.get_si();
    }
    return delta;
}

/// Ranks of the sub-webs W(h,E) (entries of W(n,E) using only x1..xh) for
/// h = 2..min(n,k0) at the projection of p, and the per-support counts.
inline SupportDecomposition support_decomposition(const BalancedSet& E, int n, const std::vector<Rational>& p,
                                                  int M_cap, const CheckOptions& opts = {}) {
    if (n < 2) throw DomainError("support_decomposition requires n >= 2");
    SupportDecomposition out;
    for (int h = 2; h <= std::min(n, E.k0); ++h) {
        const std::vector<Rational> ph(p.begin(), p.begin() + h);
        RankEstimate est = rank_estimate(assemble(E, h), ph, E.k0 + 1, M_cap, opts);
        out.estimates[h] = est;
        if (!est.value) {
            out.complete = false;
            break;
        }
        out.rank[h] = *est.value;
    }
    out.delta = exact_support_counts(out.rank);
    return out;
}

struct MaxRankOptions {
    std::optional<int> M_cap;  // default k0 + 5
    bool corroborate = false;   // also test n = k0 + 1
    CheckOptions check;
};

/// rank W(n,E) = rho(n,k0) for n = 2..k0 (optionally k0+1), plus the empirical
/// per-support counts compared with N(h,k0).
inline VerificationReport verify_max_rank(const BalancedSet& E, GenericPointSampler& sampler,
                                          const MaxRankOptions& mopts = {}) {
    VerificationReport report;
    report.check = "max_rank";
    const int k0 = E.k0;
    const int M_cap = mopts.M_cap.value_or(k0 + 5);
    const int n_last = mopts.corroborate ? k0 + 1 : k0;
    Verdict verdict = Verdict::yes;
    std::map<int, long> ranks;
    for (int n = 2; n <= n_last; ++n) {
        const AssembledWeb w = assemble(E, n);
        const Integer expected = combin::rho(n, k0);
        nlohmann::json wit{{"n", n}, {"d", w.size()}, {"expected", expected.get_si()}};
        const auto p = find_generic_point(w, sampler, mopts.check);
        if (!p) {
            wit["estimate"] = nullptr;
            report.failures.push_back("n=" + std::to_string(n) + ": no generic point found");
            verdict = combine(verdict, Verdict::inconclusive);
            report.witnesses.push_back(wit);
            continue;
        }
        const RankEstimate est = rank_estimate(w, *p, k0 + 1, M_cap, mopts.check);
        wit["point"] = point_strings(*p);
        wit["estimate"] = est.to_json();
        report.witnesses.push_back(wit);
        if (!est.value) {
            report.failures.push_back("n=" + std::to_string(n) + ": kernel dimension did not stabilize by M=" +
                                      std::to_string(M_cap));
            verdict = combine(verdict, Verdict::inconclusive);
            continue;
        }
        if (Integer(*est.value) != expected) {
            report.failures.push_back("n=" + std::to_string(n) + ": rank " + std::to_string(*est.value) +
                                      " != rho = " + expected.get_str());
            verdict = Verdict::no;
        }
        if (n <= k0) ranks[n] = *est.value;
    }
    const auto delta = exact_support_counts(ranks);
    const auto table = combin::N_table(k0, std::max(2, k0));
    nlohmann::json empirical = nlohmann::json::object(), theoretical = nlohmann::json::object();
    bool match = true;
    for (const auto& [h, v] : delta) {
        empirical[std::to_string(h)] = v;
        theoretical[std::to_string(h)] = table.N_values.at(h).get_si();
        match = match && Integer(v) == table.N_values.at(h);
    }
    report.witnesses.push_back({{"N_table_empirical", empirical}, {"N_table", theoretical}, {"match", match}});
    report.verdict = verdict;
    return report;
}

} // namespace webrank
