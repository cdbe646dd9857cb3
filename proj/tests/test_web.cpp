#include <gtest/gtest.h>

#include "oracles.hpp"
#include "webrank/catalog.hpp"
#include "webrank/io.hpp"

using namespace webrank;

namespace {

BalancedSet quadrics() { return make_balanced_set(3, {{"x1"}, {"x1+x2", "x1-x2"}, {"x1^2+x2^2+x3^2"}}); }

// Index j with gradient of v proportional to that of some entry of w, matched one-to-one.
bool same_foliations(const AssembledWeb& a, const AssembledWeb& b, const std::vector<Rational>& p) {
    if (a.size() != b.size()) return false;
    const auto ga = evaluate_gradients<Rational>(symbolic_gradients(a.integrals(), a.n), p);
    const auto gb = evaluate_gradients<Rational>(symbolic_gradients(b.integrals(), b.n), p);
    std::vector<bool> used(gb.size(), false);
    for (const auto& g : ga) {
        bool found = false;
        for (std::size_t j = 0; j < gb.size() && !found; ++j)
            if (!used[j] && proportional(g, gb[j])) used[j] = found = true;
        if (!found) return false;
    }
    return true;
}

} // namespace

TEST(MultiIndices, Examples) {
    EXPECT_EQ(multi_indices(2, 3), (std::vector<std::vector<int>>{{1, 2}, {1, 3}, {2, 3}}));
    EXPECT_EQ(multi_indices(3, 3), (std::vector<std::vector<int>>{{1, 2, 3}}));
    EXPECT_EQ(multi_indices(1, 4), (std::vector<std::vector<int>>{{1}, {2}, {3}, {4}}));
    EXPECT_THROW(multi_indices(4, 3), DomainError);
    EXPECT_THROW(multi_indices(0, 3), DomainError);
}

TEST(Assemble, QuadricCounts) {
    const BalancedSet E = quadrics();
    EXPECT_EQ(assemble(E, 3).size(), 10u);
    EXPECT_EQ(assemble(E, 2).size(), 4u);
    EXPECT_EQ(assemble(E, 4).size(), 20u);
    const AssembledWeb w = assemble(E, 3);
    EXPECT_EQ(w.entries[3].integral, parse("x1+x2", 3));
    EXPECT_EQ(w.entries[5].integral, parse("x1+x3", 3));
    EXPECT_EQ(w.entries[9].integral, parse("x1^2+x2^2+x3^2", 3));
    EXPECT_EQ(w.entries[5].label, (Label{2, 2, 1}));
    EXPECT_EQ(w.entries[5].source, (std::vector<int>{1, 3}));
}

TEST(Assemble, CountsMatchDecomposition) {
    for (int k0 = 2; k0 <= 5; ++k0) {
        std::vector<std::vector<std::string>> webs;
        for (int k = 1; k <= k0; ++k) {
            const long count = combin::c(k, k0 - k).get_si();
            std::vector<std::string> tk;
            for (long b = 0; b < count; ++b) {
                std::string s;
                for (int j = 1; j <= k; ++j) s += (j > 1 ? "+" : "") + std::to_string(j + b) + "*x" + std::to_string(j);
                tk.push_back(s);
            }
            webs.push_back(tk);
        }
        const BalancedSet E = make_balanced_set(k0, webs);
        for (int n = 2; n <= 8; ++n) {
            mpz_class expected = 0;
            for (int k = 1; k <= std::min(n, k0); ++k) expected += oracle::pascal(n, k) * oracle::pascal(k0 - 1, k - 1);
            const AssembledWeb w = assemble(E, n);
            EXPECT_EQ(mpz_class(static_cast<unsigned long>(w.size())), expected) << k0 << "," << n;
            if (n >= k0) {
                EXPECT_EQ(Integer(static_cast<unsigned long>(w.size())), combin::c(n, k0));
            }
            for (std::size_t i = 1; i < w.size(); ++i) ASSERT_LT(w.entries[i - 1].label, w.entries[i].label);
        }
    }
}

TEST(Assemble, PermutationGivesSameFoliations) {
    GenericPointSampler sampler(3);
    for (const auto& spec : catalog_specs()) {
        if (!spec.expect_quasi_symmetric) continue;
        const BalancedSet E = get_family(spec.name).set;
        if (E.transcendental()) continue;
        for (int n : {spec.k0, spec.k0 + 1}) {
            const AssembledWeb w = assemble(E, n);
            std::vector<int> perm(static_cast<std::size_t>(n));
            for (int j = 0; j < n; ++j) perm[static_cast<std::size_t>(j)] = n - j;
            std::swap(perm[0], perm[1]);
            const AssembledWeb moved = permute_variables(w, perm);
            bool checked = false;
            for (int attempt = 0; attempt < 16 && !checked; ++attempt) {
                const auto p = sampler.next(n);
                try {
                    EXPECT_TRUE(same_foliations(w, moved, p)) << spec.name << " n=" << n;
                    checked = true;
                } catch (const EvalError&) {
                }
            }
            EXPECT_TRUE(checked) << spec.name;
        }
    }
}

TEST(Validate, QuadricsValid) {
    GenericPointSampler sampler(0);
    const auto r = validate_balanced(quadrics(), 3, sampler);
    EXPECT_EQ(r.verdict, Verdict::yes);
    EXPECT_TRUE(r.failures.empty());
}

TEST(Validate, ProportionalDifferentials) {
    GenericPointSampler sampler(0);
    const BalancedSet E = make_balanced_set(3, {{"x1"}, {"x1+x2", "2*x1+2*x2"}, {"x1+x2+x3"}});
    const auto r = validate_balanced(E, 3, sampler);
    EXPECT_EQ(r.verdict, Verdict::no);
    ASSERT_FALSE(r.failures.empty());
}

TEST(Validate, MissingVariable) {
    GenericPointSampler sampler(0);
    const BalancedSet E = make_balanced_set(3, {{"x1"}, {"x1", "x1-x2"}, {"x1+x2+x3"}});
    const auto r = validate_balanced(E, 3, sampler);
    EXPECT_EQ(r.verdict, Verdict::no);
    bool mentions = false;
    for (const auto& f : r.failures) mentions = mentions || f.find("(k=2,b=1)") != std::string::npos;
    EXPECT_TRUE(mentions);
}

TEST(Validate, WrongCardinality) {
    GenericPointSampler sampler(0);
    const BalancedSet E = make_balanced_set(3, {{"x1"}, {"x1+x2"}, {"x1+x2+x3"}});
    EXPECT_EQ(validate_balanced(E, 3, sampler).verdict, Verdict::no);
}

TEST(Validate, SamplerExhaustionIsInconclusive) {
    GenericPointSampler sampler(0, -3, 3, 64, 4);
    // log of a negative number: no point is ever usable
    const BalancedSet E = make_balanced_set(2, {{"log(-1-x1^2)"}, {"x1+x2"}});
    const auto r = validate_balanced(E, 2, sampler);
    EXPECT_EQ(r.verdict, Verdict::inconclusive);
}

TEST(QuasiSymmetry, Examples) {
    GenericPointSampler sampler(1);
    const auto yes = is_quasi_symmetric(make_balanced_set(2, {{"x1"}, {"x1+x2", "x1-x2"}}), 3, sampler);
    EXPECT_TRUE(yes.all());
    const auto no = is_quasi_symmetric(make_balanced_set(2, {{"x1"}, {"x1+2*x2", "x1*x2"}}), 3, sampler);
    ASSERT_EQ(no.per_k.size(), 2u);
    EXPECT_TRUE(no.per_k[0]);
    EXPECT_FALSE(no.per_k[1]);
}

TEST(CrossRatio, AffineFamily) {
    const BalancedSet E = cross_ratio_family(parse("(x1-x3)/(x2-x3)", 3), {Rational(0), Rational(1)});
    ASSERT_EQ(E.k0, 3);
    EXPECT_EQ(E.T(1).integrals.size(), 1u);
    EXPECT_EQ(E.T(2).integrals.size(), 2u);
    EXPECT_EQ(E.T(3).integrals.size(), 1u);
    EXPECT_EQ(eval<Rational>(E.T(2).integrals[0], {Rational(3), Rational(4)}), Rational(3, 4));
    GenericPointSampler sampler(0);
    EXPECT_EQ(validate_balanced(E, 3, sampler).verdict, Verdict::yes);
    for (int k = 1; k <= 3; ++k) EXPECT_EQ(E.T(k).integrals.size(), oracle::pascal(2, 3 - k).get_ui());
}

TEST(CrossRatio, TranslatesFailValidation) {
    const BalancedSet E = cross_ratio_family(parse("x1+x2+x3", 3), {Rational(0), Rational(1)});
    GenericPointSampler sampler(0);
    EXPECT_EQ(validate_balanced(E, 2, sampler).verdict, Verdict::no);
}

TEST(CrossRatio, Errors) {
    EXPECT_THROW(cross_ratio_family(parse("x1+x2", 2), {Rational(1), Rational(1)}), DomainError);
    EXPECT_THROW(cross_ratio_family(parse("x1/(x2-1)", 2), {Rational(1)}), DomainError);
}

TEST(WebDefinition, RoundTrip) {
    const BalancedSet E = quadrics();
    const auto j = to_web_definition(E, "q");
    const BalancedSet back = from_web_definition(j);
    ASSERT_EQ(back.k0, 3);
    for (int k = 1; k <= 3; ++k) EXPECT_EQ(back.T(k).integrals, E.T(k).integrals);
    EXPECT_THROW(from_web_definition(nlohmann::json{{"k0", 3}}), InputError);
    EXPECT_THROW(from_web_definition(nlohmann::json{{"k0", 3}, {"webs", {{"x1"}}}}), InputError);
    EXPECT_THROW(from_web_definition(nlohmann::json{{"k0", 2}, {"webs", {{"x1"}, {"x1+"}}}}), ParseError);
    EXPECT_THROW(load_web_definition("/nonexistent/file.json"), NotFoundError);
    std::string name;
    const BalancedSet f = load_web_definition(std::string(WEBRANK_FAMILIES_DIR) + "/quadrics.json", &name);
    EXPECT_EQ(name, "quadrics");
    EXPECT_EQ(f.T(3).integrals, E.T(3).integrals);
}
