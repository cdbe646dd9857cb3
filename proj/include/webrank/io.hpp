#pragma once

// Web-definition files: {"k0": int, "webs": [[expr, ...] for k = 1..k0]}, with an
// optional "name". Expressions use the parser grammar in x1..xk.

#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "webrank/catalog.hpp"

namespace webrank {

inline nlohmann::json to_web_definition(const BalancedSet& E, const std::string& name = {}) {
    nlohmann::json j;
    if (!name.empty()) j["name"] = name;
    j["k0"] = E.k0;
    j["webs"] = detail::web_strings(E);
    return j;
}

inline BalancedSet from_web_definition(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("k0") || !j.contains("webs"))
        throw InputError("web definition needs \"k0\" and \"webs\"");
    if (!j["k0"].is_number_integer()) throw InputError("\"k0\" must be an integer");
    const int k0 = j["k0"].get<int>();
    if (k0 < 2) throw InputError("\"k0\" must be >= 2");
    if (!j["webs"].is_array()) throw InputError("\"webs\" must be an array");
    std::vector<std::vector<std::string>> webs;
    for (const auto& t : j["webs"]) {
        if (!t.is_array()) throw InputError("each entry of \"webs\" must be an array of strings");
        std::vector<std::string> ws;
        for (const auto& s : t) {
            if (!s.is_string()) throw InputError("integrals must be expression strings");
            ws.push_back(s.get<std::string>());
        }
        webs.push_back(std::move(ws));
    }
    if (static_cast<int>(webs.size()) != k0)
        throw InputError("\"webs\" must list exactly k0 = " + std::to_string(k0) + " webs");
    return make_balanced_set(k0, webs);
}

inline BalancedSet load_web_definition(const std::string& path, std::string* name = nullptr) {
    std::ifstream in(path);
    if (!in) throw NotFoundError("cannot open '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("'" + path + "' is not valid JSON: " + e.what());
    }
    if (name) *name = j.value("name", path);
    return from_web_definition(j);
}

} // namespace webrank
