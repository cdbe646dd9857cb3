#pragma once

// Balanced sets E = (T_1..T_k0), the webs W(n,E) obtained by pulling every T_k
// back along all coordinate projections, and structural checks on them.

#include <algorithm>
#include <compare>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "webrank/combin.hpp"
#include "webrank/expr.hpp"
#include "webrank/parser.hpp"
#include "webrank/report.hpp"
#include "webrank/sampler.hpp"

namespace webrank {

/// A web in k variables given by first integrals in x1..xk.
struct TkWeb {
    int k = 0;
    std::vector<Expr> integrals;
};

struct BalancedSet {
    int k0 = 0;
    std::vector<TkWeb> webs; // webs[k-1] = T_k

    const TkWeb& T(int k) const { return webs.at(static_cast<std::size_t>(k - 1)); }

    bool transcendental() const {
        for (const auto& w : webs)
            for (const auto& u : w.integrals)
                if (is_transcendental(u)) return true;
        return false;
    }

    /// Copy with integral b of T_k replaced.
    BalancedSet with_integral(int k, int b, Expr u) const {
        BalancedSet r = *this;
        r.webs.at(static_cast<std::size_t>(k - 1)).integrals.at(static_cast<std::size_t>(b - 1)) = std::move(u);
        return r;
    }
};

/// Builds a balanced set from expression strings, one list per k = 1..k0.
inline BalancedSet make_balanced_set(int k0, const std::vector<std::vector<std::string>>& webs) {
    if (k0 < 2) throw DomainError("k0 must be >= 2");
    BalancedSet e;
    e.k0 = k0;
    for (std::size_t i = 0; i < webs.size(); ++i) {
        TkWeb t;
        t.k = static_cast<int>(i + 1);
        for (const auto& s : webs[i]) t.integrals.push_back(parse(s, t.k));
        e.webs.push_back(std::move(t));
    }
    return e;
}

/// Position (k, a, b) of a first integral of W(n,E): k variables, a-th k-subset, b-th member of T_k.
struct Label {
    int k = 0;
    int a = 0;
    int b = 0;

    auto operator<=>(const Label&) const = default;
    std::string str() const {
        return "(" + std::to_string(k) + "," + std::to_string(a) + "," + std::to_string(b) + ")";
    }
};

struct WebEntry {
    Label label;
    Expr integral;
    std::vector<int> source; // the multi-index I (1-based, increasing)
};

struct AssembledWeb {
    int n = 0;
    int k0 = 0;
    std::vector<WebEntry> entries;

    std::size_t size() const { return entries.size(); }
    bool transcendental() const {
        return std::any_of(entries.begin(), entries.end(),
                           [](const WebEntry& w) { return is_transcendental(w.integral); });
    }
    std::vector<Expr> integrals() const {
        std::vector<Expr> out;
        for (const auto& e : entries) out.push_back(e.integral);
        return out;
    }
};

/// Web given directly by a list of first integrals in x1..xn (labels (1,i,1)).
inline AssembledWeb make_web(int n, const std::vector<Expr>& integrals) {
    AssembledWeb w;
    w.n = n;
    int i = 0;
    for (const auto& u : integrals) {
        ++i;
        w.entries.push_back({Label{1, i, 1}, u, {}});
    }
    return w;
}

/// Strictly increasing k-tuples from {1..n}, lexicographic.
inline std::vector<std::vector<int>> multi_indices(int k, int n) {
    if (k < 1 || k > n) throw DomainError("multi_indices requires 1 <= k <= n");
    std::vector<std::vector<int>> out;
    std::vector<int> cur(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i + 1;
    for (;;) {
        out.push_back(cur);
        int i = k - 1;
        while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i + 1) --i;
        if (i < 0) break;
        ++cur[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
    }
    return out;
}

/// W(n,E): every u_b of T_k composed with every projection onto a k-subset,
/// for k <= min(n, k0); entries in (k,a,b) order.
inline AssembledWeb assemble(const BalancedSet& E, int n) {
    if (n < 1) throw DomainError("assemble requires n >= 1");
    AssembledWeb w;
    w.n = n;
    w.k0 = E.k0;
    for (int k = 1; k <= std::min(n, E.k0); ++k) {
        const auto& tk = E.T(k);
        const auto subsets = multi_indices(k, n);
        for (std::size_t a = 0; a < subsets.size(); ++a) {
            for (std::size_t b = 0; b < tk.integrals.size(); ++b) {
                w.entries.push_back({Label{k, static_cast<int>(a + 1), static_cast<int>(b + 1)},
                                     rename_variables(tk.integrals[b], subsets[a]), subsets[a]});
            }
        }
    }
    return w;
}

/// Same web with ambient variables renamed x_j -> x_{perm[j-1]}.
inline AssembledWeb permute_variables(const AssembledWeb& w, const std::vector<int>& perm) {
    AssembledWeb r = w;
    for (auto& e : r.entries) e.integral = rename_variables(e.integral, perm);
    return r;
}

// ---------------------------------------------------------------------------
// Gradients at points

inline std::vector<std::vector<Expr>> symbolic_gradients(const std::vector<Expr>& integrals, int n) {
    std::vector<std::vector<Expr>> g;
    g.reserve(integrals.size());
    for (const auto& u : integrals) g.push_back(gradient(u, n));
    return g;
}

template <class S>
std::vector<std::vector<S>> evaluate_gradients(const std::vector<std::vector<Expr>>& grads, const std::vector<S>& p) {
    std::vector<std::vector<S>> out;
    out.reserve(grads.size());
    for (const auto& g : grads) {
        std::vector<S> v;
        v.reserve(g.size());
        for (const auto& d : g) v.push_back(eval<S>(d, p));
        out.push_back(std::move(v));
    }
    return out;
}

template <class S>
bool is_zero_vector(const std::vector<S>& g) {
    return std::all_of(g.begin(), g.end(), [](const S& x) { return ScalarTraits<S>::is_zero(x); });
}

/// Whether two gradients are linearly dependent (all 2x2 minors vanish).
/// Float mode compares minors against 2^(-precision/2) times the product of sup-norms.
template <class S>
bool proportional(const std::vector<S>& g1, const std::vector<S>& g2) {
    using T = ScalarTraits<S>;
    const std::size_t n = g1.size();
    if constexpr (T::exact) {
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (!T::is_zero(S(g1[i] * g2[j] - g1[j] * g2[i]))) return false;
        return true;
    } else {
        S n1(0), n2(0);
        for (std::size_t i = 0; i < n; ++i) {
            n1 = std::max(n1, T::abs(g1[i]));
            n2 = std::max(n2, T::abs(g2[i]));
        }
        S tol = n1 * n2 * Real::pow2(-working_precision_bits() / 2);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (T::abs(S(g1[i] * g2[j] - g1[j] * g2[i])) > tol) return false;
        return true;
    }
}

// ---------------------------------------------------------------------------
// Validation

namespace detail {

// Proportional pairs of the web at a point; nullopt when the point is unusable
// (evaluation failure or a vanishing gradient).
template <class S>
std::optional<std::vector<std::pair<std::size_t, std::size_t>>> proportional_pairs(
    const std::vector<std::vector<Expr>>& grads, const std::vector<Rational>& p) {
    std::vector<std::vector<S>> g;
    try {
        g = evaluate_gradients<S>(grads, to_scalars<S>(p));
    } catch (const EvalError&) {
        return std::nullopt;
    }
    for (const auto& v : g)
        if (is_zero_vector(v)) return std::nullopt;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < g.size(); ++i)
        for (std::size_t j = i + 1; j < g.size(); ++j)
            if (proportional(g[i], g[j])) pairs.emplace_back(i, j);
    return pairs;
}

template <class S>
Verdict check_general_position(const AssembledWeb& w, GenericPointSampler& sampler, int confirmations,
                               VerificationReport& report) {
    const auto integrals = w.integrals();
    const auto grads = symbolic_gradients(integrals, w.n);
    auto pairs_at = [&](const std::vector<Rational>& p) -> std::optional<std::vector<std::pair<std::size_t, std::size_t>>> {
        try {
            const auto ps = to_scalars<S>(p);
            for (const auto& u : integrals) (void)eval<S>(u, ps);
        } catch (const EvalError&) {
            return std::nullopt;
        }
        return proportional_pairs<S>(grads, p);
    };
    int attempts = 0;
    std::optional<std::vector<std::pair<std::size_t, std::size_t>>> suspects;
    std::vector<Rational> first_point;
    while (attempts < sampler.max_retries() && !suspects) {
        ++attempts;
        first_point = sampler.next(w.n);
        suspects = pairs_at(first_point);
    }
    if (!suspects) {
        report.failures.push_back("no generic point found in " + std::to_string(sampler.max_retries()) + " attempts");
        return Verdict::inconclusive;
    }
    report.witnesses.push_back({{"n", w.n}, {"point", point_strings(first_point)}, {"entries", w.size()}});
    Verdict verdict = Verdict::yes;
    for (const auto& [i, j] : *suspects) {
        int confirmed = 0;
        bool cleared = false;
        int tries = 0;
        while (confirmed < confirmations && !cleared && tries < sampler.max_retries()) {
            ++tries;
            auto pairs = pairs_at(sampler.next(w.n));
            if (!pairs) continue;
            if (std::find(pairs->begin(), pairs->end(), std::make_pair(i, j)) != pairs->end()) ++confirmed;
            else cleared = true;
        }
        if (cleared) continue;
        const std::string what = "entries " + w.entries[i].label.str() + " and " + w.entries[j].label.str();
        if (confirmed == confirmations) {
            report.failures.push_back(what + " have proportional differentials");
            verdict = Verdict::no;
        } else {
            report.failures.push_back(what + ": proportionality could not be confirmed or cleared");
            verdict = combine(verdict, Verdict::inconclusive);
        }
    }
    return verdict;
}

} // namespace detail

/// Checks cardinalities c(k,k0-k), that every integral of T_k involves all of
/// x1..xk, and that W(n_check,E) is a web (pairwise non-proportional
/// differentials at a sampled point, proportional pairs re-tested at 3 more points).
inline VerificationReport validate_balanced(const BalancedSet& E, int n_check, GenericPointSampler& sampler,
                                            int precision_bits = default_precision_bits) {
    VerificationReport report;
    report.check = "validate_balanced";
    Verdict verdict = Verdict::yes;
    if (static_cast<int>(E.webs.size()) != E.k0) {
        report.failures.push_back("expected " + std::to_string(E.k0) + " webs T_1..T_k0, got " +
                                  std::to_string(E.webs.size()));
        verdict = Verdict::no;
    }
    bool arity_ok = true;
    for (int k = 1; k <= static_cast<int>(E.webs.size()); ++k) {
        const auto& tk = E.T(k);
        if (k <= E.k0) {
            const Integer expected = combin::c(k, E.k0 - k);
            if (Integer(tk.integrals.size()) != expected) {
                report.failures.push_back("T_" + std::to_string(k) + " has " + std::to_string(tk.integrals.size()) +
                                          " integrals, expected c(" + std::to_string(k) + "," +
                                          std::to_string(E.k0 - k) + ") = " + expected.get_str());
                verdict = Verdict::no;
            }
        }
        std::set<int> all;
        for (int j = 1; j <= k; ++j) all.insert(j);
        for (std::size_t b = 0; b < tk.integrals.size(); ++b) {
            const std::string where = "(k=" + std::to_string(k) + ",b=" + std::to_string(b + 1) + ")";
            if (max_variable(tk.integrals[b]) > k) {
                report.failures.push_back(where + " uses a variable beyond x" + std::to_string(k));
                verdict = Verdict::no;
                arity_ok = false;
                continue;
            }
            if (vars_used(tk.integrals[b]) != all) {
                report.failures.push_back(where + " does not involve all of x1..x" + std::to_string(k));
                verdict = Verdict::no;
            }
        }
    }
    if (arity_ok && !E.webs.empty() && static_cast<int>(E.webs.size()) >= std::min(n_check, E.k0)) {
        const AssembledWeb w = assemble(E, n_check);
        Verdict gp;
        if (E.transcendental()) {
            PrecisionGuard guard(precision_bits);
            gp = detail::check_general_position<Real>(w, sampler, 3, report);
        } else {
            gp = detail::check_general_position<Rational>(w, sampler, 3, report);
        }
        verdict = combine(verdict, gp);
    }
    report.verdict = verdict;
    return report;
}

// ---------------------------------------------------------------------------
// Quasi-symmetry

struct QuasiSymmetry {
    std::vector<bool> per_k; // index k-1
    std::vector<std::string> notes;

    bool all() const { return std::all_of(per_k.begin(), per_k.end(), [](bool b) { return b; }); }
};

namespace detail {

template <class S>
bool transposition_preserves(const TkWeb& tk, int j, int trials, GenericPointSampler& sampler, std::string& note) {
    std::vector<int> perm(static_cast<std::size_t>(tk.k));
    for (int i = 0; i < tk.k; ++i) perm[static_cast<std::size_t>(i)] = i + 1;
    std::swap(perm[static_cast<std::size_t>(j - 1)], perm[static_cast<std::size_t>(j)]);
    const auto grads = symbolic_gradients(tk.integrals, tk.k);
    for (std::size_t b = 0; b < tk.integrals.size(); ++b) {
        const auto moved = gradient(rename_variables(tk.integrals[b], perm), tk.k);
        std::set<std::size_t> candidates;
        for (std::size_t c = 0; c < tk.integrals.size(); ++c) candidates.insert(c);
        int done = 0;
        int attempts = 0;
        while (done < trials && attempts < sampler.max_retries() * trials && !candidates.empty()) {
            ++attempts;
            const auto p = to_scalars<S>(sampler.next(tk.k));
            std::vector<std::vector<S>> g;
            std::vector<S> mg;
            try {
                g = evaluate_gradients<S>(grads, p);
                for (const auto& d : moved) mg.push_back(eval<S>(d, p));
            } catch (const EvalError&) {
                continue;
            }
            ++done;
            for (auto it = candidates.begin(); it != candidates.end();) {
                if (proportional(mg, g[*it])) ++it;
                else it = candidates.erase(it);
            }
        }
        if (candidates.empty()) {
            note = "T_" + std::to_string(tk.k) + ": swapping x" + std::to_string(j) + ",x" + std::to_string(j + 1) +
                   " sends integral " + std::to_string(b + 1) + " outside the web";
            return false;
        }
    }
    return true;
}

} // namespace detail

/// Probable invariance of each T_k's foliation set under all adjacent
/// transpositions of its variables (gradient proportionality at sampled points).
inline QuasiSymmetry is_quasi_symmetric(const BalancedSet& E, int trials, GenericPointSampler& sampler,
                                        int precision_bits = default_precision_bits) {
    QuasiSymmetry out;
    for (const auto& tk : E.webs) {
        bool ok = true;
        for (int j = 1; j < tk.k && ok; ++j) {
            std::string note;
            bool transcendental = std::any_of(tk.integrals.begin(), tk.integrals.end(),
                                              [](const Expr& u) { return is_transcendental(u); });
            if (transcendental) {
                PrecisionGuard guard(precision_bits);
                ok = detail::transposition_preserves<Real>(tk, j, trials, sampler, note);
            } else {
                ok = detail::transposition_preserves<Rational>(tk, j, trials, sampler, note);
            }
            if (!ok) out.notes.push_back("probably not: " + note);
        }
        if (ok) out.notes.push_back("T_" + std::to_string(tk.k) + ": probably yes");
        out.per_k.push_back(ok);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cross-ratio style generator

/// T_k = { f(x1..xk, m_{i1}, ..., m_{i_{k0-k}}) : i1 < ... < i_{k0-k} } with k0 = marks.size() + 1.
inline BalancedSet cross_ratio_family(const Expr& f, const std::vector<Rational>& marks) {
    const int k0 = static_cast<int>(marks.size()) + 1;
    if (k0 < 2) throw DomainError("cross_ratio_family needs at least one marked point");
    if (max_variable(f) > k0) throw DomainError("generator uses more than k0 variables");
    for (std::size_t i = 0; i < marks.size(); ++i)
        for (std::size_t j = i + 1; j < marks.size(); ++j)
            if (marks[i] == marks[j]) throw DomainError("marked points must be pairwise distinct");
    BalancedSet E;
    E.k0 = k0;
    for (int k = 1; k <= k0; ++k) {
        TkWeb tk;
        tk.k = k;
        std::vector<std::vector<int>> choices;
        if (k == k0) choices.push_back({});
        else choices = multi_indices(k0 - k, k0 - 1);
        for (const auto& choice : choices) {
            std::vector<Expr> repl;
            for (int j = 1; j <= k; ++j) repl.push_back(Expr::variable(j));
            for (int i : choice) repl.push_back(Expr::constant(marks[static_cast<std::size_t>(i - 1)]));
            Expr u = substitute(f, repl);
            GenericPointSampler probe(0x9e3779b97f4a7c15ULL + static_cast<std::uint64_t>(k));
            bool evaluable = false;
            for (int t = 0; t < probe.max_retries() && !evaluable; ++t) {
                try {
                    if (is_transcendental(u)) (void)eval<Real>(u, to_scalars<Real>(probe.next(k)));
                    else (void)eval<Rational>(u, probe.next(k));
                    evaluable = true;
                } catch (const EvalError&) {
                }
            }
            if (!evaluable)
                throw DomainError("substituting marks into the generator gives an expression undefined at every sampled point (T_" +
                                  std::to_string(k) + ")");
            tk.integrals.push_back(std::move(u));
        }
        E.webs.push_back(std::move(tk));
    }
    return E;
}

} // namespace webrank
