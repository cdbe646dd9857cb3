#pragma once

// Ordinariness certificates for W(n,E).
//
// The finite criterion checks that each square block of T_k (degree-k0
// indices with full support against the integrals of T_k) is invertible. The
// direct criterion checks rank P_h(W(n,E)) = min(d, c(n,h)) for h <= k0.
// A "true" verdict is certified at an explicit point; a "false" verdict is
// only reported after the failure reproduces at further sampled points.

#include <functional>
#include <string>
#include <vector>

#include "webrank/jets.hpp"
#include "webrank/rank.hpp"

namespace webrank {

struct CheckOptions {
    int precision_bits = default_precision_bits;
    int max_precision_bits = 512;
    int confirmations = 3;
};

inline ScalarMode mode_for(bool transcendental, const CheckOptions& opts) {
    return transcendental ? ScalarMode::floating(opts.precision_bits) : ScalarMode::rational();
}

/// Result of testing one sampled point.
struct PointResult {
    enum class Kind { full, deficient, unusable, marginal } kind = Kind::unusable;
    nlohmann::json witness;
};

namespace detail {

/// Runs test(bits) in exact mode once, or in float mode at increasing
/// precision (doubling) until the outcome is no longer marginal.
inline PointResult with_escalation(const ScalarMode& mode, const CheckOptions& opts,
                                   const std::function<PointResult(int)>& test) {
    if (mode.exact) return test(0);
    PointResult last;
    for (int bits = mode.precision_bits; bits <= opts.max_precision_bits; bits *= 2) {
        PrecisionGuard guard(bits);
        last = test(bits);
        if (last.kind != PointResult::Kind::marginal) return last;
    }
    return last;
}

/// Samples points until one certifies full rank, or the deficiency is seen at
/// 1 + confirmations points, or the sampler runs out of retries.
inline Verdict sample_until_decided(GenericPointSampler& sampler, int dim, const CheckOptions& opts,
                                    const std::function<PointResult(const std::vector<Rational>&)>& test,
                                    nlohmann::json& witnesses, std::string& failure) {
    int deficient = 0, marginal = 0;
    for (int attempt = 0; attempt < sampler.max_retries(); ++attempt) {
        const auto p = sampler.next(dim);
        PointResult r = test(p);
        r.witness["point"] = point_strings(p);
        switch (r.kind) {
        case PointResult::Kind::full:
            witnesses.push_back(r.witness);
            return Verdict::yes;
        case PointResult::Kind::deficient:
            witnesses.push_back(r.witness);
            if (++deficient >= 1 + opts.confirmations) {
                failure = "rank deficient at " + std::to_string(deficient) + " sampled points";
                return Verdict::no;
            }
            break;
        case PointResult::Kind::marginal:
            witnesses.push_back(r.witness);
            ++marginal;
            break;
        case PointResult::Kind::unusable: break;
        }
    }
    failure = "undecided after " + std::to_string(sampler.max_retries()) + " sampled points (" +
              std::to_string(deficient) + " deficient, " + std::to_string(marginal) + " marginal)";
    return Verdict::inconclusive;
}

template <class S>
PointResult test_square_block(const TkWeb& tk, int k0, const std::vector<Rational>& p) {
    PointResult out;
    JetMatrix<S> J;
    try {
        J = square_block<S>(tk, k0, to_scalars<S>(p));
    } catch (const EvalError&) {
        return out;
    }
    const RankResult rr = matrix_rank(J.values);
    out.witness = rr.to_json();
    out.witness["size"] = J.rows.size();
    if (rr.marginal) out.kind = PointResult::Kind::marginal;
    else out.kind = rr.rank == J.rows.size() ? PointResult::Kind::full : PointResult::Kind::deficient;
    return out;
}

template <class S>
PointResult test_direct(const AssembledWeb& w, int k0, const std::vector<Rational>& p) {
    PointResult out;
    const std::size_t d = w.size();
    nlohmann::json per_h = nlohmann::json::array();
    bool all_full = true, any_marginal = false;
    try {
        const auto ps = to_scalars<S>(p);
        for (int h = 1; h <= k0; ++h) {
            const JetMatrix<S> P = build_P<S>(w, h, ps);
            const RankResult rr = matrix_rank(P.values);
            const std::size_t target = std::min(d, P.rows.size());
            nlohmann::json j = {{"h", h}, {"rank", rr.rank}, {"expected", target}, {"rows", P.rows.size()}, {"cols", d}};
            if (!rr.exact) {
                j["gap_log2"] = rr.to_json()["gap_log2"];
                j["marginal"] = rr.marginal;
            }
            per_h.push_back(j);
            any_marginal = any_marginal || rr.marginal;
            all_full = all_full && rr.rank == target;
        }
    } catch (const EvalError&) {
        return out;
    }
    out.witness = {{"per_h", per_h}};
    if (any_marginal) out.kind = PointResult::Kind::marginal;
    else out.kind = all_full ? PointResult::Kind::full : PointResult::Kind::deficient;
    return out;
}

} // namespace detail

/// Invertibility of every square block of T_k, k = 1..k0, each at a sampled point in k variables.
inline VerificationReport check_condition_iv(const BalancedSet& E, GenericPointSampler& sampler,
                                             const CheckOptions& opts = {}) {
    VerificationReport report;
    report.check = "condition_iv";
    const ScalarMode mode = mode_for(E.transcendental(), opts);
    Verdict verdict = Verdict::yes;
    for (int k = 1; k <= E.k0; ++k) {
        const TkWeb& tk = E.T(k);
        nlohmann::json witnesses = nlohmann::json::array();
        std::string failure;
        const Verdict v = detail::sample_until_decided(
            sampler, k, opts,
            [&](const std::vector<Rational>& p) {
                return detail::with_escalation(mode, opts, [&](int) {
                    return mode.exact ? detail::test_square_block<Rational>(tk, E.k0, p)
                                      : detail::test_square_block<Real>(tk, E.k0, p);
                });
            },
            witnesses, failure);
        report.witnesses.push_back({{"k", k}, {"verdict", to_string(v)}, {"mode", mode.describe()}, {"samples", witnesses}});
        if (v != Verdict::yes) report.failures.push_back("block k=" + std::to_string(k) + ": " + failure);
        verdict = combine(verdict, v);
    }
    report.verdict = verdict;
    return report;
}

/// rank P_h(W) = min(d, c(n,h)) for h = 1..k0_of(n,d), all at one sampled point.
inline VerificationReport check_ordinary_direct(const AssembledWeb& w, GenericPointSampler& sampler,
                                                const CheckOptions& opts = {}) {
    VerificationReport report;
    report.check = "ordinary_direct";
    const long k0 = combin::k0_of(w.n, Integer(w.size()));
    const ScalarMode mode = mode_for(w.transcendental(), opts);
    nlohmann::json witnesses = nlohmann::json::array();
    std::string failure;
    report.verdict = detail::sample_until_decided(
        sampler, w.n, opts,
        [&](const std::vector<Rational>& p) {
            return detail::with_escalation(mode, opts, [&](int) {
                return mode.exact ? detail::test_direct<Rational>(w, static_cast<int>(k0), p)
                                  : detail::test_direct<Real>(w, static_cast<int>(k0), p);
            });
        },
        witnesses, failure);
    report.witnesses.push_back(
        {{"n", w.n}, {"d", w.size()}, {"k0", k0}, {"mode", mode.describe()}, {"samples", witnesses}});
    if (report.verdict != Verdict::yes) report.failures.push_back("n=" + std::to_string(w.n) + ": " + failure);
    return report;
}

inline VerificationReport check_ordinary_direct(const BalancedSet& E, int n, GenericPointSampler& sampler,
                                                const CheckOptions& opts = {}) {
    if (n < 2) throw DomainError("check_ordinary_direct requires n >= 2");
    return check_ordinary_direct(assemble(E, n), sampler, opts);
}

struct CrosscheckResult {
    bool agree = false;
    bool inconclusive = false;
    int rounds = 0;
    Verdict condition_iv = Verdict::inconclusive;
    std::vector<std::pair<int, Verdict>> direct;

    nlohmann::json to_json() const {
        nlohmann::json d = nlohmann::json::array();
        for (const auto& [n, v] : direct) d.push_back({{"n", n}, {"verdict", to_string(v)}});
        return {{"agree", agree}, {"inconclusive", inconclusive}, {"rounds", rounds},
                {"condition_iv", to_string(condition_iv)}, {"direct", d}};
    }
};

/// Compares the finite criterion with the direct criterion at each n; rounds
/// with an inconclusive side are repeated with a fresh seed (at most 3 rounds).
inline CrosscheckResult ordinariness_crosscheck(const BalancedSet& E, const std::vector<int>& n_list,
                                            const GenericPointSampler& sampler, const CheckOptions& opts = {}) {
    CrosscheckResult out;
    for (int round = 0; round < 3; ++round) {
        out.rounds = round + 1;
        GenericPointSampler s = round == 0 ? sampler : sampler.derive(static_cast<std::uint64_t>(round));
        out.condition_iv = check_condition_iv(E, s, opts).verdict;
        out.direct.clear();
        bool undecided = out.condition_iv == Verdict::inconclusive;
        bool agree = true;
        for (int n : n_list) {
            const Verdict v = check_ordinary_direct(E, n, s, opts).verdict;
            out.direct.emplace_back(n, v);
            undecided = undecided || v == Verdict::inconclusive;
            agree = agree && v == out.condition_iv;
        }
        if (!undecided) {
            out.agree = agree;
            out.inconclusive = false;
            return out;
        }
        out.inconclusive = true;
    }
    out.agree = false;
    return out;
}

} // namespace webrank
