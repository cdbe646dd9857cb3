#pragma once

// Command-line front end. Exit codes: 0 verdict true, 1 verdict false,
// 2 inconclusive, 64 usage error, 65 malformed input, 66 unknown family or file.

#include <algorithm>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "webrank/webrank.hpp"

namespace webrank::cli {

inline constexpr int exit_true = 0;
inline constexpr int exit_false = 1;
inline constexpr int exit_inconclusive = 2;
inline constexpr int exit_usage = 64;
inline constexpr int exit_data = 65;
inline constexpr int exit_no_input = 66;

struct RunConfig {
    std::string command;
    std::uint64_t seed = 0;
    int precision_bits = default_precision_bits;
    std::optional<int> jet_cap;
    std::optional<int> n;
    std::string format = "text";
    std::string family;
    std::string input;

    nlohmann::json to_json(int k0 = 0) const {
        nlohmann::json j{{"command", command}, {"seed", seed}, {"precision_bits", precision_bits}, {"format", format}};
        if (jet_cap) j["jet_cap"] = *jet_cap;
        else if (k0 > 0) j["jet_cap"] = k0 + 5;
        j["n"] = n ? nlohmann::json(*n) : nlohmann::json(nullptr);
        j["input"] = !family.empty() ? "family:" + family : (!input.empty() ? "file:" + input : "");
        return j;
    }
};

inline int exit_code(Verdict v) {
    switch (v) {
    case Verdict::yes: return exit_true;
    case Verdict::no: return exit_false;
    case Verdict::inconclusive: return exit_inconclusive;
    }
    return exit_inconclusive;
}

namespace detail {

struct Loaded {
    std::string name;
    BalancedSet set;
};

inline Loaded load(const RunConfig& cfg) {
    if (!cfg.family.empty() && !cfg.input.empty()) throw CLI::ValidationError("give either --family or --input, not both");
    if (!cfg.family.empty()) return {cfg.family, get_family(cfg.family).set};
    if (!cfg.input.empty()) {
        std::string name;
        BalancedSet e = load_web_definition(cfg.input, &name);
        return {name, e};
    }
    throw CLI::ValidationError("one of --family or --input is required");
}

inline nlohmann::json family_json(const Loaded& l) {
    return {{"name", l.name}, {"k0", l.set.k0}, {"webs", webrank::detail::web_strings(l.set)}};
}

inline CheckOptions check_options(const RunConfig& cfg) {
    CheckOptions o;
    o.precision_bits = cfg.precision_bits;
    o.max_precision_bits = std::max(512, cfg.precision_bits);
    return o;
}

inline void emit(std::ostream& out, const RunConfig& cfg, const nlohmann::json& report, const std::string& text) {
    if (cfg.format == "json") out << report.dump(2) << "\n";
    else out << text;
}

inline std::string failures_text(const VerificationReport& r) {
    std::string s;
    for (const auto& f : r.failures) s += "  - " + f + "\n";
    return s;
}

inline int cmd_catalog(const RunConfig& cfg, const std::string& export_name, std::ostream& out) {
    if (!export_name.empty()) {
        const Family f = get_family(export_name);
        out << to_web_definition(f.set, f.spec.name).dump(2) << "\n";
        return exit_true;
    }
    nlohmann::json list = nlohmann::json::array();
    std::string text;
    for (const auto& s : catalog_specs()) {
        list.push_back({{"name", s.name},
                        {"k0", s.k0},
                        {"provenance", s.provenance},
                        {"expected", {{"ordinary", s.expect_ordinary}, {"max_rank", s.expect_max_rank}}},
                        {"webs", s.webs}});
        text += s.name + "  (k0=" + std::to_string(s.k0) + ", expected ordinary=" +
                (s.expect_ordinary ? "true" : "false") + ", max_rank=" + (s.expect_max_rank ? "true" : "false") +
                ")\n    " + s.provenance + "\n";
    }
    emit(out, cfg, {{"config", cfg.to_json()}, {"families", list}}, text);
    return exit_true;
}

inline int cmd_counts(const RunConfig& cfg, long k0, std::ostream& out) {
    const long n_max = cfg.n.value_or(k0 + 2);
    if (k0 < 2 || n_max < 2) throw CLI::ValidationError("--k0 and --n must be >= 2");
    const auto table = combin::N_table(k0, n_max);
    const auto ids = combin::verify_identities(k0, n_max, std::max<long>(n_max, k0));
    nlohmann::json rows = nlohmann::json::array();
    std::string text = "k0 = " + std::to_string(k0) + "\n" + "   n   c(n,k0)   pi'(n,c(n,k0))   rho(n,k0)   N(n,k0)\n";
    for (long n = 2; n <= n_max; ++n) {
        const Integer d = combin::c(n, k0);
        const Integer pp = combin::pi_prime(n, d);
        rows.push_back({{"n", n},
                        {"c", d.get_str()},
                        {"pi_prime", pp.get_str()},
                        {"rho", table.rho_values.at(n).get_str()},
                        {"N", table.N_values.at(n).get_str()}});
        char buf[256];
        std::snprintf(buf, sizeof buf, "%4ld %9s %16s %11s %9s\n", n, d.get_str().c_str(), pp.get_str().c_str(),
                      table.rho_values.at(n).get_str().c_str(), table.N_values.at(n).get_str().c_str());
        text += buf;
    }
    text += std::string("identities: ") + (ids.holds ? "hold" : "FAIL: " + ids.counterexample.value_or("")) + "\n";
    nlohmann::json report{{"config", cfg.to_json()}, {"k0", k0}, {"table", rows}, {"identities_hold", ids.holds}};
    if (ids.counterexample) report["counterexample"] = *ids.counterexample;
    emit(out, cfg, report, text);
    return ids.holds ? exit_true : exit_false;
}

inline int cmd_validate(const RunConfig& cfg, std::ostream& out) {
    const Loaded l = load(cfg);
    GenericPointSampler sampler(cfg.seed);
    const int n = cfg.n.value_or(l.set.k0);
    const VerificationReport r = validate_balanced(l.set, n, sampler, cfg.precision_bits);
    const QuasiSymmetry qs = is_quasi_symmetric(l.set, 3, sampler, cfg.precision_bits);
    nlohmann::json report{{"config", cfg.to_json(l.set.k0)},
                          {"family", family_json(l)},
                          {"balanced_valid", r.to_json()},
                          {"quasi_symmetric", {{"per_k", qs.per_k}, {"notes", qs.notes}}}};
    std::string text = "family: " + l.name + " (k0=" + std::to_string(l.set.k0) + ")\n" +
                       "balanced (n=" + std::to_string(n) + "): " + to_string(r.verdict) + "\n" + failures_text(r);
    for (const auto& note : qs.notes) text += "quasi-symmetry " + note + "\n";
    emit(out, cfg, report, text);
    return exit_code(r.verdict);
}

inline int cmd_check_ordinary(const RunConfig& cfg, bool direct, std::ostream& out) {
    const Loaded l = load(cfg);
    GenericPointSampler sampler(cfg.seed);
    const CheckOptions opts = check_options(cfg);
    const VerificationReport iv = check_condition_iv(l.set, sampler, opts);
    Verdict verdict = iv.verdict;
    std::string text = "family: " + l.name + " (k0=" + std::to_string(l.set.k0) + ")\n" +
                       "condition (iv): " + to_string(iv.verdict) + "\n" + failures_text(iv);
    nlohmann::json direct_json = nlohmann::json::array();
    if (direct) {
        const int n = cfg.n.value_or(l.set.k0);
        const VerificationReport dr = check_ordinary_direct(l.set, n, sampler, opts);
        direct_json.push_back(dr.to_json());
        text += "direct (n=" + std::to_string(n) + "): " + to_string(dr.verdict) + "\n" + failures_text(dr);
        verdict = combine(verdict, dr.verdict);
    }
    nlohmann::json report{{"config", cfg.to_json(l.set.k0)},
                          {"family", family_json(l)},
                          {"ordinary", {{"condition_iv", iv.to_json()}, {"direct", direct_json}}},
                          {"verdicts", {{"ordinary", to_string(verdict)}}}};
    emit(out, cfg, report, text);
    return exit_code(verdict);
}

inline int cmd_rank(const RunConfig& cfg, std::ostream& out) {
    const Loaded l = load(cfg);
    if (!cfg.n) throw CLI::ValidationError("rank requires --n");
    const int n = *cfg.n;
    if (n < 2) throw CLI::ValidationError("--n must be >= 2");
    GenericPointSampler sampler(cfg.seed);
    const CheckOptions opts = check_options(cfg);
    const AssembledWeb w = assemble(l.set, n);
    const int cap = cfg.jet_cap.value_or(l.set.k0 + 5);
    const Integer rho = combin::rho(n, l.set.k0);
    const Integer bound = combin::pi_prime(n, Integer(w.size()));
    nlohmann::json per_n{{"n", n}, {"d", w.size()}, {"rho", rho.get_si()}, {"pi_prime", bound.get_si()}};
    std::string text = "family: " + l.name + " (k0=" + std::to_string(l.set.k0) + "), n=" + std::to_string(n) +
                       ", d=" + std::to_string(w.size()) + "\n";
    Verdict verdict = Verdict::inconclusive;
    const auto p = find_generic_point(w, sampler, opts);
    if (p) {
        const RankEstimate est = rank_estimate(w, *p, l.set.k0 + 1, cap, opts);
        per_n["point"] = point_strings(*p);
        per_n["estimate"] = est.to_json();
        for (const auto& [m, dim] : est.dims) text += "  M=" + std::to_string(m) + ": kernel " + std::to_string(dim) + "\n";
        if (est.value) {
            verdict = Integer(*est.value) == rho ? Verdict::yes : Verdict::no;
            text += "rank " + std::to_string(*est.value) + " (rho = " + rho.get_str() + ")\n";
        } else {
            text += "rank: not stabilized by M=" + std::to_string(cap) + "\n";
        }
    } else {
        text += "no generic point found\n";
    }
    nlohmann::json report{{"config", cfg.to_json(l.set.k0)},
                          {"family", family_json(l)},
                          {"rank", {{"per_n", nlohmann::json::array({per_n})}}},
                          {"verdicts", {{"maximal_rank", to_string(verdict)}}}};
    emit(out, cfg, report, text);
    return exit_code(verdict);
}

inline int cmd_verify_family(const RunConfig& cfg, bool corroborate, std::ostream& out) {
    const Loaded l = load(cfg);
    const int k0 = l.set.k0;
    GenericPointSampler sampler(cfg.seed);
    const CheckOptions opts = check_options(cfg);
    std::string text = "family: " + l.name + " (k0=" + std::to_string(k0) + ")\n";

    const VerificationReport valid = validate_balanced(l.set, k0, sampler, cfg.precision_bits);
    text += "balanced: " + to_string(valid.verdict) + "\n" + failures_text(valid);

    const VerificationReport iv = check_condition_iv(l.set, sampler, opts);
    text += "ordinary: " + to_string(iv.verdict) + " (finite criterion on T_1..T_" + std::to_string(k0) + ")\n" +
            failures_text(iv);
    nlohmann::json direct = nlohmann::json::array();
    Verdict direct_verdict = Verdict::yes;
    for (int n = 2; n <= k0; ++n) {
        const VerificationReport dr = check_ordinary_direct(l.set, n, sampler, opts);
        direct.push_back(dr.to_json());
        direct_verdict = combine(direct_verdict, dr.verdict);
    }
    text += "ordinary, direct check n=2.." + std::to_string(k0) + ": " + to_string(direct_verdict) + "\n";

    Verdict rank_verdict = Verdict::inconclusive;
    nlohmann::json rank_json = nullptr;
    if (valid.verdict == Verdict::yes && iv.verdict == Verdict::yes) {
        MaxRankOptions mopts;
        mopts.M_cap = cfg.jet_cap;
        mopts.corroborate = corroborate;
        mopts.check = opts;
        const VerificationReport mr = verify_max_rank(l.set, sampler, mopts);
        rank_verdict = mr.verdict;
        nlohmann::json per_n = nlohmann::json::array(), trace = nlohmann::json::object(), ntab = nullptr;
        std::string ranks;
        for (const auto& w : mr.witnesses) {
            if (w.contains("n")) {
                per_n.push_back(w);
                const auto& est = w["estimate"];
                if (!est.is_null()) {
                    trace[std::to_string(w["n"].get<int>())] = est["dims"];
                    ranks += (ranks.empty() ? "" : ", ") + std::string("n=") + std::to_string(w["n"].get<int>()) +
                             "->" + (est["value"].is_null() ? std::string("?") : std::to_string(est["value"].get<long>()));
                }
            } else {
                ntab = w;
            }
        }
        rank_json = {{"per_n", per_n}, {"dims_trace", trace}, {"report", mr.to_json()}};
        if (!ntab.is_null()) {
            rank_json["N_table_empirical"] = ntab["N_table_empirical"];
            rank_json["N_table"] = ntab["N_table"];
            rank_json["N_table_match"] = ntab["match"];
        }
        text += "ranks: " + ranks + "\n" + failures_text(mr);
        if (!ntab.is_null()) text += "N table (empirical): " + ntab["N_table_empirical"].dump() + ", expected " + ntab["N_table"].dump() + "\n";
    } else {
        text += "ranks: skipped (family not certified ordinary)\n";
    }

    Verdict overall = combine(combine(valid.verdict, iv.verdict), rank_verdict);
    if (valid.verdict == Verdict::yes && iv.verdict == Verdict::no) overall = Verdict::no;
    std::string summary;
    switch (overall) {
    case Verdict::yes: summary = "maximal rank for all n"; break;
    case Verdict::no: summary = "claim refuted"; break;
    case Verdict::inconclusive: summary = "inconclusive"; break;
    }
    text += "verdict: " + summary + "\n";
    nlohmann::json report{{"config", cfg.to_json(k0)},
                          {"family", family_json(l)},
                          {"balanced_valid", valid.to_json()},
                          {"ordinary", {{"condition_iv", iv.to_json()}, {"direct", direct}}},
                          {"rank", rank_json},
                          {"verdicts",
                           {{"balanced", to_string(valid.verdict)},
                            {"ordinary_all_n", to_string(iv.verdict)},
                            {"ordinary_direct", to_string(direct_verdict)},
                            {"maximal_rank_all_n", to_string(rank_verdict)},
                            {"overall", to_string(overall)}}}};
    emit(out, cfg, report, text);
    return exit_code(overall);
}

inline int cmd_crosscheck(const RunConfig& cfg, std::vector<int> n_list, std::ostream& out) {
    const Loaded l = load(cfg);
    const int k0 = l.set.k0;
    if (n_list.empty()) {
        std::set<int> ns{2, 3, k0, k0 + 1};
        n_list.assign(ns.begin(), ns.end());
    }
    GenericPointSampler sampler(cfg.seed);
    const CrosscheckResult r = ordinariness_crosscheck(l.set, n_list, sampler, check_options(cfg));
    std::string text = "family: " + l.name + " (k0=" + std::to_string(k0) + ")\n" +
                       "condition (iv): " + to_string(r.condition_iv) + "\n";
    for (const auto& [n, v] : r.direct) text += "direct n=" + std::to_string(n) + ": " + to_string(v) + "\n";
    text += std::string("agree: ") + (r.agree ? "true" : "false") + (r.inconclusive ? " (inconclusive)" : "") + "\n";
    emit(out, cfg, {{"config", cfg.to_json(k0)}, {"family", family_json(l)}, {"crosscheck", r.to_json()}}, text);
    if (r.inconclusive) return exit_inconclusive;
    return r.agree ? exit_true : exit_false;
}

} // namespace detail

/// Runs one command; args excludes the program name.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Constructs webs W(n,E) from balanced sets, certifies ordinariness and verifies maximal rank"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto add_common = [&](CLI::App* sub, bool needs_input) {
        sub->add_option("--seed", cfg.seed, "Sampler seed")->capture_default_str();
        sub->add_option("--precision", cfg.precision_bits, "Float mantissa bits")->check(CLI::Range(53, 4096));
        sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"text", "json"}));
        if (needs_input) {
            sub->add_option("--family", cfg.family, "Catalog family name");
            sub->add_option("--input", cfg.input, "Web-definition JSON file");
        }
    };

    auto* catalog = app.add_subcommand("catalog", "List built-in families");
    std::string export_name;
    catalog->add_option("--export", export_name, "Print a family as web-definition JSON");
    add_common(catalog, false);

    auto* counts = app.add_subcommand("counts", "Tables of c, pi', rho and N");
    long k0 = 0;
    counts->add_option("--k0", k0, "k0")->required();
    counts->add_option("--n", cfg.n, "Largest n");
    add_common(counts, false);

    auto* validate = app.add_subcommand("validate", "Check the balanced-set conditions");
    validate->add_option("--n", cfg.n, "Dimension for the general-position check (default k0)");
    add_common(validate, true);

    auto* check = app.add_subcommand("check-ordinary", "Finite ordinariness criterion (optionally the direct check)");
    bool direct = false;
    check->add_flag("--direct", direct, "Also check rank P_h(W(n,E)) directly");
    check->add_option("--n", cfg.n, "Dimension for --direct (default k0)");
    add_common(check, true);

    auto* rank = app.add_subcommand("rank", "Abelian-relation rank of W(n,E)");
    rank->add_option("--n", cfg.n, "Dimension")->required();
    rank->add_option("--jet-cap", cfg.jet_cap, "Largest truncation order (default k0+5)");
    add_common(rank, true);

    auto* verify = app.add_subcommand("verify-family", "Ordinariness and maximal rank for all n");
    bool corroborate = false;
    verify->add_flag("--corroborate", corroborate, "Also test n = k0+1");
    verify->add_option("--jet-cap", cfg.jet_cap, "Largest truncation order (default k0+5)");
    add_common(verify, true);

    auto* cross = app.add_subcommand("crosscheck", "Compare the finite criterion with direct checks");
    std::vector<int> n_list;
    cross->add_option("--n", n_list, "Dimensions (default 2, 3, k0, k0+1)");
    add_common(cross, true);

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_true;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }

    try {
        if (catalog->parsed()) {
            cfg.command = "catalog";
            return detail::cmd_catalog(cfg, export_name, out);
        }
        if (counts->parsed()) {
            cfg.command = "counts";
            return detail::cmd_counts(cfg, k0, out);
        }
        if (validate->parsed()) {
            cfg.command = "validate";
            return detail::cmd_validate(cfg, out);
        }
        if (check->parsed()) {
            cfg.command = "check-ordinary";
            return detail::cmd_check_ordinary(cfg, direct, out);
        }
        if (rank->parsed()) {
            cfg.command = "rank";
            return detail::cmd_rank(cfg, out);
        }
        if (verify->parsed()) {
            cfg.command = "verify-family";
            return detail::cmd_verify_family(cfg, corroborate, out);
        }
        if (cross->parsed()) {
            cfg.command = "crosscheck";
            return detail::cmd_crosscheck(cfg, n_list, out);
        }
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const ParseError& e) {
        err << "error: " << e.what() << "\n";
        return exit_data;
    } catch (const NotFoundError& e) {
        err << "error: " << e.what() << "\n";
        return exit_no_input;
    } catch (const InputError& e) {
        err << "error: " << e.what() << "\n";
        return exit_data;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return exit_data;
    }
    return exit_usage;
}

} // namespace webrank::cli
