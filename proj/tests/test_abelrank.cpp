#include <gtest/gtest.h>

#include "oracles.hpp"
#include "webrank/abelrank.hpp"
#include "webrank/catalog.hpp"

using namespace webrank;

namespace {

AssembledWeb parallel_4web() {
    return make_web(2, {parse("x1", 2), parse("x2", 2), parse("x1+x2", 2), parse("x1-x2", 2)});
}

std::vector<Rational> generic_point(const AssembledWeb& w, std::uint64_t seed) {
    GenericPointSampler sampler(seed);
    auto p = find_generic_point(w, sampler);
    if (!p) throw std::runtime_error("no generic point");
    return *p;
}

} // namespace

TEST(RankEstimate, ParallelFourWeb) {
    const AssembledWeb w = parallel_4web();
    const auto est = rank_estimate(w, {Rational(0), Rational(0)}, 1, 5);
    EXPECT_EQ(est.dims, (std::map<int, long>{{1, 2}, {2, 3}, {3, 3}}));
    ASSERT_TRUE(est.value);
    EXPECT_EQ(*est.value, 3);
    EXPECT_EQ(*est.stabilized_at, 2);
    EXPECT_EQ(Integer(*est.value), combin::pi_prime(2, 4));
    EXPECT_EQ(est.mode.describe(), "exact");
}

TEST(RankEstimate, SingleFoliationHasNoRelations) {
    const auto est = rank_estimate(make_web(2, {parse("x1", 2)}), {Rational(1), Rational(2)}, 1, 4);
    ASSERT_TRUE(est.value);
    EXPECT_EQ(*est.value, 0);
}

TEST(RankEstimate, QuadricFamily) {
    const BalancedSet E = get_family("k0_3_quadrics").set;
    for (auto [n, expected] : {std::pair{2, 3L}, {3, 11L}, {4, 26L}}) {
        const AssembledWeb w = assemble(E, n);
        const auto est = rank_estimate(w, generic_point(w, 1), 4, 8);
        ASSERT_TRUE(est.value) << n;
        EXPECT_EQ(*est.value, expected);
        EXPECT_LE(Integer(*est.value), combin::pi_prime(n, Integer(static_cast<unsigned long>(w.size()))));
    }
}

TEST(RankEstimate, UnstabilizedIsInconclusive) {
    const auto est = rank_estimate(parallel_4web(), {Rational(0), Rational(0)}, 1, 2);
    EXPECT_FALSE(est.value);
    EXPECT_FALSE(est.stabilized_at);
    EXPECT_EQ(est.dims.size(), 2u);
    EXPECT_TRUE(est.to_json()["value"].is_null());
}

TEST(RankEstimate, ArgumentChecks) {
    const AssembledWeb w = parallel_4web();
    EXPECT_THROW(rank_estimate(w, {Rational(0)}, 1, 3), DomainError);
    EXPECT_THROW(rank_estimate(w, {Rational(0), Rational(0)}, 3, 2), DomainError);
}

TEST(RankEstimate, ExponentialFamilyFloat) {
    const AssembledWeb w = assemble(get_family("k0_4_exp").set, 2);
    const auto est = rank_estimate(w, generic_point(w, 0), 5, 9);
    ASSERT_TRUE(est.value);
    EXPECT_EQ(*est.value, 6);
    EXPECT_FALSE(est.marginal);
    EXPECT_EQ(est.mode.describe(), "float(128)");
}

TEST(Oracle, HomogeneousBruteForceOnParallelWeb) {
    const AssembledWeb w = parallel_4web();
    const std::vector<std::vector<mpq_class>> forms{{1, 0}, {0, 1}, {1, 1}, {1, -1}};
    const std::vector<long> expected{2, 1, 0};
    long previous = 0;
    for (int m = 1; m <= 3; ++m) {
        const long brute = oracle::homogeneous_relations(forms, m);
        EXPECT_EQ(brute, expected[static_cast<std::size_t>(m - 1)]);
        const long total = relation_kernel<Rational>(w, {Rational(1, 3), Rational(-2)}, m).dimension;
        EXPECT_EQ(total - previous, brute) << "degree " << m;
        previous = total;

        // the module's own system restricted to degree-m rows and the gamma_{i,m} columns
        const Matrix<Rational> A = relation_system<Rational>(w, {Rational(1, 3), Rational(-2)}, m);
        const auto space = MonomialSpace::get(2, m);
        std::vector<std::vector<mpq_class>> block;
        for (std::size_t r = 1; r < space->size(); ++r) {
            if (space->degree(r) != m) continue;
            std::vector<mpq_class> row;
            for (std::size_t i = 0; i < w.size(); ++i) row.push_back(A(r - 1, i * static_cast<std::size_t>(m) + static_cast<std::size_t>(m - 1)));
            block.push_back(row);
        }
        EXPECT_EQ(static_cast<long>(w.size()) - static_cast<long>(oracle::rational_rank(block)), brute);
    }
    EXPECT_EQ(previous, 3);
}

TEST(SupportDecomposition, KnownTables) {
    const BalancedSet q = get_family("k0_3_quadrics").set;
    const AssembledWeb w3 = assemble(q, 3);
    const auto d = support_decomposition(q, 3, generic_point(w3, 2), 8);
    EXPECT_TRUE(d.complete);
    EXPECT_EQ(d.rank, (std::map<int, long>{{2, 3}, {3, 11}}));
    EXPECT_EQ(d.delta, (std::map<int, long>{{2, 3}, {3, 2}}));

    const BalancedSet wb = get_family("k0_4_WB").set;
    const auto e = support_decomposition(wb, 3, generic_point(assemble(wb, 3), 2), 9);
    EXPECT_EQ(e.delta, (std::map<int, long>{{2, 6}, {3, 8}}));

    EXPECT_EQ(exact_support_counts({{2, 6}, {3, 26}, {4, 71}}), (std::map<int, long>{{2, 6}, {3, 8}, {4, 3}}));
    EXPECT_EQ(exact_support_counts({{2, 5}}), (std::map<int, long>{{2, 5}}));
}

TEST(AbelProperty, TwoGenericPointsAgree) {
    for (const auto& spec : catalog_specs()) {
        const BalancedSet E = get_family(spec.name).set;
        for (int n = 2; n <= 3; ++n) {
            const AssembledWeb w = assemble(E, n);
            const auto a = rank_estimate(w, generic_point(w, 100), E.k0 + 1, E.k0 + 5);
            const auto b = rank_estimate(w, generic_point(w, 200), E.k0 + 1, E.k0 + 5);
            EXPECT_EQ(a.dims, b.dims) << spec.name << " n=" << n;
            ASSERT_TRUE(a.value) << spec.name;
            EXPECT_EQ(Integer(*a.value), combin::rho(n, E.k0)) << spec.name << " n=" << n;
        }
    }
}

TEST(AbelProperty, CubicReparametrizationInvariance) {
    for (const char* name : {"k0_3_moebius", "k0_3_harmonic_reciprocal", "k0_4_exp"}) {
        const BalancedSet E = get_family(name).set;
        const AssembledWeb w = assemble(E, 3);
        const auto p = generic_point(w, 5);
        const auto base = rank_estimate(w, p, E.k0 + 1, E.k0 + 5);
        for (std::size_t i = 0; i < w.size(); i += 3) {
            AssembledWeb v = w;
            const Expr& u = w.entries[i].integral;
            v.entries[i].integral = make_pow(u, 3) + u;
            const auto est = rank_estimate(v, p, E.k0 + 1, E.k0 + 5);
            EXPECT_EQ(est.value, base.value) << name << " entry " << i;
        }
    }
}

TEST(VerifyMaxRank, QuadricsWithNTable) {
    GenericPointSampler sampler(7);
    MaxRankOptions opts;
    opts.corroborate = true;
    const auto r = verify_max_rank(get_family("k0_3_quadrics").set, sampler, opts);
    EXPECT_EQ(r.verdict, Verdict::yes);
    ASSERT_EQ(r.witnesses.size(), 4u);
    EXPECT_EQ(r.witnesses[2]["estimate"]["value"], 26);
    EXPECT_TRUE(r.witnesses.back()["match"].get<bool>());
    EXPECT_EQ(r.witnesses.back()["N_table_empirical"], (nlohmann::json{{"2", 3}, {"3", 2}}));
}

TEST(VerifyMaxRank, SmallCapIsInconclusive) {
    GenericPointSampler sampler(7);
    MaxRankOptions opts;
    opts.M_cap = 4;
    const auto r = verify_max_rank(get_family("k0_3_quadrics").set, sampler, opts);
    EXPECT_EQ(r.verdict, Verdict::inconclusive);
    EXPECT_FALSE(r.failures.empty());
}
