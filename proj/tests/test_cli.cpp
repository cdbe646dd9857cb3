#include <gtest/gtest.h>

#include <sstream>

#include "webrank/cli.hpp"

using namespace webrank;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run_command(args, out, err);
    return {code, out.str(), err.str()};
}

std::string family_file(const std::string& name) { return std::string(WEBRANK_FAMILIES_DIR) + "/" + name; }

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

} // namespace

TEST(Cli, Counts) {
    const Outcome r = run({"counts", "--k0", "4", "--n", "10"});
    EXPECT_EQ(r.code, cli::exit_true);
    EXPECT_TRUE(contains(r.out, "1860")) << r.out;

    const Outcome j = run({"counts", "--k0", "3", "--n", "4", "--format", "json"});
    const auto doc = nlohmann::json::parse(j.out);
    EXPECT_EQ(doc["config"]["command"], "counts");
}

TEST(Cli, VerifyQuadrics) {
    const Outcome r = run({"verify-family", "--family", "k0_3_quadrics", "--seed", "7"});
    EXPECT_EQ(r.code, cli::exit_true) << r.err;
    EXPECT_TRUE(contains(r.out, "verdict: maximal rank for all n")) << r.out;
    EXPECT_TRUE(contains(r.out, "n=3->11"));
}

TEST(Cli, VerifyJsonIsReproducible) {
    const std::vector<std::string> args{"verify-family", "--family", "k0_3_sym", "--seed", "11", "--format", "json"};
    const Outcome a = run(args);
    const Outcome b = run(args);
    EXPECT_EQ(a.code, cli::exit_true);
    EXPECT_EQ(a.out, b.out);
    const auto doc = nlohmann::json::parse(a.out);
    EXPECT_EQ(doc["config"]["seed"], 11);
    EXPECT_EQ(doc["config"]["command"], "verify-family");
    EXPECT_TRUE(doc["verdicts"].contains("overall"));
    EXPECT_EQ(doc["rank"]["N_table_empirical"]["2"], 3);
    EXPECT_EQ(doc["rank"]["N_table_empirical"], doc["rank"]["N_table"]);

    const Outcome other = run({"verify-family", "--family", "k0_3_sym", "--seed", "12", "--format", "json"});
    EXPECT_EQ(nlohmann::json::parse(other.out)["verdicts"], doc["verdicts"]);
}

TEST(Cli, DependentGradientsNotOrdinary) {
    const Outcome r = run({"check-ordinary", "--input", family_file("dependent_gradients.json")});
    EXPECT_EQ(r.code, cli::exit_false);
    EXPECT_TRUE(contains(r.out, "block k=3")) << r.out;

    const Outcome d = run({"check-ordinary", "--input", family_file("dependent_gradients.json"), "--direct"});
    EXPECT_EQ(d.code, cli::exit_false);
}

TEST(Cli, ValidateAndRank) {
    const Outcome v = run({"validate", "--input", family_file("quadrics.json")});
    EXPECT_EQ(v.code, cli::exit_true) << v.out << v.err;

    const Outcome r = run({"rank", "--family", "k0_4_exp", "--n", "2", "--format", "json"});
    EXPECT_EQ(r.code, cli::exit_true) << r.err;
    EXPECT_TRUE(contains(r.out, "\"value\":6") || contains(r.out, "\"value\": 6")) << r.out;
}

TEST(Cli, Crosscheck) {
    const Outcome r = run({"crosscheck", "--family", "k0_3_harmonic", "--n", "2", "3"});
    EXPECT_EQ(r.code, cli::exit_true) << r.out << r.err;
}

TEST(Cli, CatalogListingAndExport) {
    const Outcome list = run({"catalog"});
    EXPECT_EQ(list.code, cli::exit_true);
    for (const auto& name : family_names()) EXPECT_TRUE(contains(list.out, name)) << name;

    const Outcome ex = run({"catalog", "--export", "k0_3_moebius"});
    ASSERT_EQ(ex.code, cli::exit_true);
    const BalancedSet back = from_web_definition(nlohmann::json::parse(ex.out));
    const BalancedSet orig = get_family("k0_3_moebius").set;
    for (int k = 1; k <= 3; ++k) EXPECT_EQ(back.T(k).integrals, orig.T(k).integrals);
}

TEST(Cli, ErrorExitCodes) {
    EXPECT_EQ(run({"verify-family", "--family", "no_such_family"}).code, cli::exit_no_input);
    EXPECT_EQ(run({"validate", "--input", "/nonexistent/web.json"}).code, cli::exit_no_input);
    EXPECT_EQ(run({"catalog", "--export", "no_such_family"}).code, cli::exit_no_input);

    const Outcome bad = run({"validate", "--input", family_file("malformed.json")});
    EXPECT_EQ(bad.code, cli::exit_data);
    EXPECT_FALSE(bad.err.empty());

    EXPECT_EQ(run({}).code, cli::exit_usage);
    EXPECT_EQ(run({"counts"}).code, cli::exit_usage);
    EXPECT_EQ(run({"rank", "--family", "k0_3_sym", "--bogus"}).code, cli::exit_usage);
    EXPECT_EQ(run({"rank", "--family", "k0_3_sym", "--n", "3", "--format", "xml"}).code, cli::exit_usage);
    EXPECT_EQ(run({"counts", "--k0", "0"}).code, cli::exit_usage);
}
