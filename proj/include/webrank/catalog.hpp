#pragma once

// Named balanced sets with the properties claimed for them. Alternatives for
// the top web T_k0 are separate entries (suffixes _product, _squares, ...).

#include <algorithm>
#include <string>
#include <vector>

#include "webrank/web.hpp"

namespace webrank {

struct FamilySpec {
    std::string name;
    int k0 = 0;
    std::vector<std::vector<std::string>> webs;
    bool expect_ordinary = true;
    bool expect_max_rank = true;
    bool expect_quasi_symmetric = true;
    std::string provenance;
};

struct Family {
    FamilySpec spec;
    BalancedSet set;
};

namespace detail {

inline std::vector<std::vector<std::string>> web_strings(const BalancedSet& E) {
    std::vector<std::vector<std::string>> out;
    for (const auto& t : E.webs) {
        std::vector<std::string> s;
        for (const auto& u : t.integrals) s.push_back(to_string(u));
        out.push_back(std::move(s));
    }
    return out;
}

inline std::vector<FamilySpec> build_catalog() {
    const std::vector<std::string> wb_t1{"x1"};
    const std::vector<std::string> wb_t2{"x1+x2", "x1-x2", "x1*x2"};
    const std::vector<std::string> wb_t3{"x1+x2+x3", "x1^2+x2^2+x3^2", "x1*x2*x3"};
    const std::string moebius2 = "(x1-1)*(x2-1)/((x1+1)*(x2+1))";
    const std::string moebius3 = "(x1-1)*(x2-1)*(x3-1)/((x1+1)*(x2+1)*(x3+1))";

    std::vector<FamilySpec> c;
    c.push_back({"k0_2_linear", 2, {{"x1"}, {"x1+x2"}}, true, true, true,
                 "linear webs, k0=2"});
    c.push_back({"k0_3_quadrics", 3, {{"x1"}, {"x1+x2", "x1-x2"}, {"x1^2+x2^2+x3^2"}}, true, true, true,
                 "sums, differences and sums of three squares, k0=3"});
    c.push_back({"k0_3_sym", 3, {{"x1"}, {"x1+x2", "x1*x2"}, {"x1+x2+x3"}}, true, true, true,
                 "elementary symmetric functions, k0=3, T_3 = sum"});
    c.push_back({"k0_3_sym_product", 3, {{"x1"}, {"x1+x2", "x1*x2"}, {"x1*x2*x3"}}, true, true, true,
                 "elementary symmetric functions, k0=3, T_3 = product"});
    c.push_back({"k0_3_moebius", 3, {{"x1"}, {"x1*x2", moebius2}, {"x1+x2+x3"}}, true, true, true,
                 "products and Moebius ratios, k0=3, T_3 = sum"});
    c.push_back({"k0_3_moebius_product", 3, {{"x1"}, {"x1*x2", moebius2}, {moebius3}}, true, true, true,
                 "products and Moebius ratios, k0=3, T_3 = Moebius product"});
    c.push_back({"k0_3_harmonic", 3, {{"x1"}, {"x1+x2", "1/x1+1/x2"}, {"x1+x2+x3"}}, true, true, true,
                 "sums and harmonic sums, k0=3, T_3 = sum"});
    c.push_back({"k0_3_harmonic_reciprocal", 3, {{"x1"}, {"x1+x2", "1/x1+1/x2"}, {"1/x1+1/x2+1/x3"}}, true, true, true,
                 "sums and harmonic sums, k0=3, T_3 = harmonic sum"});
    {
        const BalancedSet gen = cross_ratio_family(parse("(x1-x3)/(x2-x3)", 3), {Rational(0), Rational(1)});
        c.push_back({"k0_3_crossratio_affine", 3, web_strings(gen), true, true, true,
                     "generated: f=(x-z)/(y-z), marks {0,1} (affine cross-ratio family)"});
    }
    c.push_back({"k0_4_WB", 4, {wb_t1, wb_t2, wb_t3, {"x1+x2+x3+x4"}}, true, true, true,
                 "WB_n, k0=4, T_4 = sum"});
    c.push_back({"k0_4_WB_squares", 4, {wb_t1, wb_t2, wb_t3, {"x1^2+x2^2+x3^2+x4^2"}}, true, true, true,
                 "WB_n, k0=4, T_4 = sum of squares"});
    c.push_back({"k0_4_WB_product", 4, {wb_t1, wb_t2, wb_t3, {"x1*x2*x3*x4"}}, true, true, true,
                 "WB_n, k0=4, T_4 = product"});
    c.push_back({"k0_4_exp", 4,
                 {{"x1"},
                  {"x1+x2", "x1-x2", "exp(x1)+exp(x2)"},
                  {"x1+x2+x3", "x1+x2-x3", "exp(x1)+exp(x2)+exp(x3)"},
                  {"x1+x2+x3+x4"}},
                 true, true, false, "exponential family, k0=4 (not quasi-symmetric: T_3 contains x+y-z)"});
    c.push_back({"k0_4_pereira_pirio_affine", 4,
                 {{"1-x1"},
                  {"x1*(x2-1)/(x2*(x1-1))", "x1/x2", "(x1-1)/(x2-1)"},
                  {"(x1-x3)*x2/((x2-x3)*x1)", "(x1-x3)*(x2-1)/((x2-x3)*(x1-1))", "(x1-x3)/(x2-x3)"},
                  {"(x1-x3)*(x2-x4)/((x2-x3)*(x1-x4))"}},
                 true, true, true,
                 "cross-ratio webs with marks {0,1,infinity}, infinity specialized by hand"});
    return c;
}

} // namespace detail

inline const std::vector<FamilySpec>& catalog_specs() {
    static const std::vector<FamilySpec> specs = detail::build_catalog();
    return specs;
}

inline std::vector<std::string> family_names() {
    std::vector<std::string> names;
    for (const auto& s : catalog_specs()) names.push_back(s.name);
    return names;
}

inline Family get_family(const std::string& name) {
    const auto& specs = catalog_specs();
    auto it = std::find_if(specs.begin(), specs.end(), [&](const FamilySpec& s) { return s.name == name; });
    if (it == specs.end()) throw NotFoundError("unknown family '" + name + "'");
    return {*it, make_balanced_set(it->k0, it->webs)};
}

} // namespace webrank
