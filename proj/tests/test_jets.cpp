#include <gtest/gtest.h>

#include "oracles.hpp"
#include "webrank/catalog.hpp"
#include "webrank/jets.hpp"
#include "webrank/rank.hpp"

using namespace webrank;

namespace {

Rational q(long a, long b = 1) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

AssembledWeb parallel_4web() {
    return make_web(2, {parse("x1", 2), parse("x2", 2), parse("x1+x2", 2), parse("x1-x2", 2)});
}

bool subset(const std::vector<int>& a, const std::vector<int>& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

} // namespace

TEST(JetCoefficient, Examples) {
    EXPECT_EQ(jet_coefficient<Rational>({q(1), q(1)}, {1, 1}), q(1));
    EXPECT_EQ(jet_coefficient<Rational>({q(2), q(2), q(2)}, {1, 1, 1}), q(8));
    EXPECT_EQ(jet_coefficient<Rational>({q(0), q(5), q(-3)}, {0, 0, 0}), q(1));
    EXPECT_EQ(jet_coefficient<Rational>({q(0), q(2)}, {0, 3}), q(8));
    EXPECT_THROW(jet_coefficient<Rational>({q(1)}, {1, 1}), DomainError);
}

TEST(MultiIndexLabels, OrderingAndCounts) {
    for (int n = 1; n <= 5; ++n) {
        for (int h = 1; h <= 5; ++h) {
            const auto rows = ordered_rows(n, h);
            ASSERT_EQ(static_cast<long>(rows.size()), oracle::count_monomials(n, h));
            for (std::size_t i = 0; i < rows.size(); ++i) {
                const RowLabel l = row_label(rows[i]);
                EXPECT_EQ(l.h, h);
                EXPECT_EQ(l.k, static_cast<int>(support(rows[i]).size()));
                if (i > 0) {
                    EXPECT_LT(row_label(rows[i - 1]), l);
                }
            }
        }
    }
    // within a block, descending lexicographic: (2,1) before (1,2)
    const auto rows = positive_indices(2, 3);
    EXPECT_EQ(rows, (std::vector<MultiIndex>{{2, 1}, {1, 2}}));
    EXPECT_EQ(degree({1, 0, 3}), 4);
    EXPECT_EQ(support({1, 0, 3}), (std::vector<int>{1, 3}));
}

TEST(BuildP, QuadricIdentityColumns) {
    const AssembledWeb w = assemble(get_family("k0_3_quadrics").set, 3);
    const auto P = build_P<Rational>(w, 1, {q(1, 2), q(-2), q(3)});
    ASSERT_EQ(P.values.rows(), 3u);
    ASSERT_EQ(P.values.cols(), 10u);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(P.values(r, c), q(r == c ? 1 : 0));
}

TEST(BuildP, ParallelWebSecondOrder) {
    const auto P = build_P<Rational>(parallel_4web(), 2, {q(1, 3), q(5, 7)});
    std::size_t row = P.rows.size();
    for (std::size_t r = 0; r < P.rows.size(); ++r)
        if (P.rows[r] == MultiIndex{1, 1}) row = r;
    ASSERT_LT(row, P.rows.size());
    EXPECT_EQ(P.values(row, 0), q(0));
    EXPECT_EQ(P.values(row, 1), q(0));
    EXPECT_EQ(P.values(row, 2), q(1));
    EXPECT_EQ(P.values(row, 3), q(-1));
}

TEST(BuildP, EvaluationFailureNamesEntry) {
    const AssembledWeb w = make_web(1, {parse("1/x1", 1)});
    try {
        build_P<Rational>(w, 1, {q(0)});
        FAIL();
    } catch (const EvalError& e) {
        EXPECT_NE(std::string(e.what()).find("(1,1,1)"), std::string::npos);
    }
}

TEST(BuildP, BlocksOutsideSupportVanish) {
    GenericPointSampler sampler(11);
    for (const char* name : {"k0_3_moebius", "k0_4_WB", "k0_4_pereira_pirio_affine"}) {
        const BalancedSet E = get_family(name).set;
        for (int n : {E.k0, E.k0 + 1}) {
            const AssembledWeb w = assemble(E, n);
            for (int h = 1; h <= E.k0; ++h) {
                JetMatrix<Rational> P;
                for (;;) {
                    try {
                        P = build_P<Rational>(w, h, sampler.next(n));
                        break;
                    } catch (const EvalError&) {
                    }
                }
                ASSERT_EQ(P.values.rows(), combin::c(n, h).get_ui());
                for (std::size_t r = 0; r < P.rows.size(); ++r) {
                    const RowLabel rl = row_label(P.rows[r]);
                    for (std::size_t c = 0; c < P.cols.size(); ++c) {
                        if (!subset(support(P.rows[r]), w.entries[c].source)) {
                            ASSERT_EQ(P.values(r, c), 0) << name << " n=" << n << " h=" << h;
                        }
                        if (P.cols[c].k < rl.k) {
                            ASSERT_EQ(P.values(r, c), 0);
                        }
                    }
                }
            }
        }
    }
}

TEST(SquareBlock, Examples) {
    const BalancedSet E = get_family("k0_3_quadrics").set;
    const auto J = square_block<Rational>(E.T(2), 3, {q(2), q(5)});
    ASSERT_EQ(J.rows, (std::vector<MultiIndex>{{2, 1}, {1, 2}}));
    EXPECT_EQ(J.values(0, 0), q(1));
    EXPECT_EQ(J.values(0, 1), q(-1));
    EXPECT_EQ(J.values(1, 0), q(1));
    EXPECT_EQ(J.values(1, 1), q(1));
    EXPECT_EQ(*exact_rank(J.values).determinant, q(2));

    const auto one = square_block<Rational>(E.T(1), 3, {q(7)});
    ASSERT_EQ(one.values.rows(), 1u);
    EXPECT_EQ(one.rows[0], MultiIndex{3});
    EXPECT_EQ(one.values(0, 0), q(1));
}

TEST(SquareBlock, DependentGradientsAreSingular) {
    TkWeb t3;
    t3.k = 3;
    for (const char* s : {"x1+x2+x3", "x1+2*x2+3*x3", "2*x1+3*x2+4*x3"}) t3.integrals.push_back(parse(s, 3));
    GenericPointSampler sampler(5);
    for (int i = 0; i < 5; ++i) {
        const auto J = square_block<Rational>(t3, 4, sampler.next(3));
        const auto r = exact_rank(J.values);
        EXPECT_EQ(r.rank, 2u);
        EXPECT_EQ(*r.determinant, 0);
    }
    TkWeb wrong = t3;
    wrong.integrals.pop_back();
    EXPECT_THROW(square_block<Rational>(wrong, 4, {q(1), q(2), q(3)}), DomainError);
}

TEST(SquareBlock, EqualsDiagonalBlockOfFullMatrix) {
    GenericPointSampler sampler(21);
    for (const char* name : {"k0_3_harmonic", "k0_3_crossratio_affine", "k0_4_WB_product"}) {
        const BalancedSet E = get_family(name).set;
        for (int n : {E.k0, E.k0 + 1}) {
            const AssembledWeb w = assemble(E, n);
            std::vector<Rational> p;
            JetMatrix<Rational> P;
            for (;;) {
                p = sampler.next(n);
                try {
                    P = build_P<Rational>(w, E.k0, p);
                    break;
                } catch (const EvalError&) {
                }
            }
            for (int k = 1; k <= E.k0; ++k) {
                const auto subsets = multi_indices(k, n);
                for (std::size_t a = 0; a < subsets.size(); ++a) {
                    std::vector<Rational> pk;
                    for (int v : subsets[a]) pk.push_back(p[static_cast<std::size_t>(v - 1)]);
                    const auto sq = square_block<Rational>(E.T(k), E.k0, pk);
                    EXPECT_EQ(diagonal_block(P, k, static_cast<int>(a + 1)), sq.values) << name << " k=" << k;
                }
            }
        }
    }
}

TEST(ColumnScaling, CubicReparametrization) {
    const AssembledWeb w = assemble(get_family("k0_3_moebius").set, 3);
    const std::vector<Rational> p{q(1, 3), q(-5, 4), q(2, 7)};
    for (std::size_t i = 0; i < w.size(); ++i) {
        AssembledWeb v = w;
        const Expr& u = w.entries[i].integral;
        v.entries[i].integral = make_pow(u, 3) + u;
        const Rational ui = eval<Rational>(u, p);
        const Rational s = 3 * ui * ui + 1;
        for (int h = 1; h <= 3; ++h) {
            const auto A = build_P<Rational>(w, h, p);
            const auto B = build_P<Rational>(v, h, p);
            Rational sh = 1;
            for (int t = 0; t < h; ++t) sh *= s;
            for (std::size_t r = 0; r < A.rows.size(); ++r) {
                for (std::size_t c = 0; c < w.size(); ++c) {
                    const Rational expected = c == i ? Rational(A.values(r, c) * sh) : A.values(r, c);
                    ASSERT_EQ(B.values(r, c), expected);
                }
            }
            EXPECT_EQ(exact_rank(A.values).rank, exact_rank(B.values).rank);
        }
    }
}

TEST(Csv, HeaderAndRows) {
    const auto J = square_block<Rational>(get_family("k0_3_quadrics").set.T(2), 3, {q(1, 2), q(1)});
    const std::string csv = to_csv(J);
    EXPECT_EQ(csv.substr(0, csv.find('\n')), "L,\"(2,1,1)\",\"(2,1,2)\"");
    EXPECT_NE(csv.find("2;1,1,-1"), std::string::npos);
}
