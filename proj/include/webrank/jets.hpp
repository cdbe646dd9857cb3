#pragma once

// Jet coefficients c_L^i = prod_l (du_i/dx_l)^{L_l} and the matrices P_h(W)
// whose rows are the degree-h multi-indices L and whose columns are the first
// integrals u_i of the web.

#include <sstream>
#include <string>
#include <vector>

#include "webrank/matrix.hpp"
#include "webrank/taylor.hpp"
#include "webrank/web.hpp"

namespace webrank {

using MultiIndex = std::vector<int>;

inline int degree(const MultiIndex& L) {
    int d = 0;
    for (int l : L) d += l;
    return d;
}

inline std::vector<int> support(const MultiIndex& L) {
    std::vector<int> s;
    for (std::size_t i = 0; i < L.size(); ++i)
        if (L[i] > 0) s.push_back(static_cast<int>(i + 1));
    return s;
}

/// Block label (h,k,a,b) of a row: degree, support size, rank of the support
/// among the k-subsets, rank of L among degree-h indices with that support.
struct RowLabel {
    int h = 0;
    int k = 0;
    int a = 0;
    int b = 0;

    auto operator<=>(const RowLabel&) const = default;
};

/// Degree-h multi-indices in k variables with every entry >= 1, descending lexicographic.
inline std::vector<MultiIndex> positive_indices(int k, int h) {
    std::vector<MultiIndex> out;
    if (h < k) return out;
    for (auto e : MonomialSpace::homogeneous(k, h - k)) {
        for (auto& v : e) ++v;
        out.push_back(std::move(e));
    }
    return out;
}

/// All degree-h multi-indices in n variables in (k,a,b) order.
inline std::vector<MultiIndex> ordered_rows(int n, int h) {
    std::vector<MultiIndex> rows;
    for (int k = 1; k <= std::min(h, n); ++k) {
        const auto blocks = positive_indices(k, h);
        for (const auto& I : multi_indices(k, n)) {
            for (const auto& e : blocks) {
                MultiIndex L(static_cast<std::size_t>(n), 0);
                for (int j = 0; j < k; ++j)
                    L[static_cast<std::size_t>(I[static_cast<std::size_t>(j)] - 1)] = e[static_cast<std::size_t>(j)];
                rows.push_back(std::move(L));
            }
        }
    }
    return rows;
}

inline RowLabel row_label(const MultiIndex& L) {
    const int n = static_cast<int>(L.size());
    const auto s = support(L);
    RowLabel r;
    r.h = degree(L);
    r.k = static_cast<int>(s.size());
    if (r.k == 0) return r;
    const auto subsets = multi_indices(r.k, n);
    r.a = static_cast<int>(std::find(subsets.begin(), subsets.end(), s) - subsets.begin()) + 1;
    MultiIndex compressed;
    for (int v : s) compressed.push_back(L[static_cast<std::size_t>(v - 1)]);
    const auto blocks = positive_indices(r.k, r.h);
    r.b = static_cast<int>(std::find(blocks.begin(), blocks.end(), compressed) - blocks.begin()) + 1;
    return r;
}

/// prod_l gradient[l]^{L_l}; zero exponents contribute 1.
template <class S>
S jet_coefficient(const std::vector<S>& gradient, const MultiIndex& L) {
    if (gradient.size() != L.size()) throw DomainError("jet_coefficient: gradient and multi-index lengths differ");
    S r(1);
    for (std::size_t i = 0; i < L.size(); ++i)
        if (L[i] > 0) r *= int_power(gradient[i], L[i]);
    return r;
}

template <class S>
struct JetMatrix {
    std::vector<MultiIndex> rows;
    std::vector<Label> cols;
    Matrix<S> values;

    bool exact() const { return ScalarTraits<S>::exact; }
};

namespace detail {

template <class S>
Matrix<S> jet_values(const std::vector<MultiIndex>& rows, const std::vector<std::vector<S>>& grads) {
    Matrix<S> m(rows.size(), grads.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < grads.size(); ++c) m(r, c) = jet_coefficient(grads[c], rows[r]);
    return m;
}

template <class S>
std::vector<std::vector<S>> labelled_gradients(const std::vector<Expr>& integrals, const std::vector<Label>& labels,
                                                int n, const std::vector<S>& p) {
    std::vector<std::vector<S>> out;
    for (std::size_t i = 0; i < integrals.size(); ++i) {
        try {
            std::vector<S> g;
            for (int j = 1; j <= n; ++j) g.push_back(eval<S>(diff(integrals[i], j), p));
            out.push_back(std::move(g));
        } catch (const EvalError& e) {
            throw EvalError(e.kind(), "entry " + labels[i].str() + ": " + e.what());
        }
    }
    return out;
}

} // namespace detail

/// P_h(W) at p: rows in (h,k,a,b) order, columns in (k,a,b) order.
template <class S>
JetMatrix<S> build_P(const AssembledWeb& W, int h, const std::vector<S>& p) {
    if (h < 1) throw DomainError("build_P requires h >= 1");
    JetMatrix<S> J;
    J.rows = ordered_rows(W.n, h);
    for (const auto& e : W.entries) J.cols.push_back(e.label);
    J.values = detail::jet_values(J.rows, detail::labelled_gradients(W.integrals(), J.cols, W.n, p));
    return J;
}

/// The square d_k x d_k block of T_k: degree-k0 indices with full support in
/// k variables against the integrals of T_k, at a point p in k variables.
template <class S>
JetMatrix<S> square_block(const TkWeb& tk, int k0, const std::vector<S>& p) {
    JetMatrix<S> J;
    J.rows = positive_indices(tk.k, k0);
    if (J.rows.size() != tk.integrals.size())
        throw DomainError("square_block: T_" + std::to_string(tk.k) + " has " + std::to_string(tk.integrals.size()) +
                          " integrals, expected " + std::to_string(J.rows.size()));
    for (std::size_t b = 0; b < tk.integrals.size(); ++b) J.cols.push_back(Label{tk.k, 1, static_cast<int>(b + 1)});
    J.values = detail::jet_values(J.rows, detail::labelled_gradients(tk.integrals, J.cols, tk.k, p));
    return J;
}

/// Rows with support I_a and columns labelled (k,a,*) of a full P_h.
template <class S>
Matrix<S> diagonal_block(const JetMatrix<S>& P, int k, int a) {
    std::vector<std::size_t> rs, cs;
    for (std::size_t r = 0; r < P.rows.size(); ++r) {
        const RowLabel l = row_label(P.rows[r]);
        if (l.k == k && l.a == a) rs.push_back(r);
    }
    for (std::size_t c = 0; c < P.cols.size(); ++c)
        if (P.cols[c].k == k && P.cols[c].a == a) cs.push_back(c);
    return P.values.submatrix(rs, cs);
}

/// CSV with a header of column labels; row keys are exponent vectors joined by ';'.
template <class S>
std::string to_csv(const JetMatrix<S>& J) {
    std::ostringstream os;
    os << "L";
    for (const auto& c : J.cols) os << ",\"" << c.str() << "\"";
    os << "\n";
    for (std::size_t r = 0; r < J.rows.size(); ++r) {
        for (std::size_t i = 0; i < J.rows[r].size(); ++i) os << (i ? ";" : "") << J.rows[r][i];
        for (std::size_t c = 0; c < J.cols.size(); ++c) os << "," << ScalarTraits<S>::to_string(J.values(r, c));
        os << "\n";
    }
    return os.str();
}

} // namespace webrank
