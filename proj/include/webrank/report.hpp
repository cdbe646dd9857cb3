#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace webrank {

enum class Verdict { yes, no, inconclusive };

inline std::string to_string(Verdict v) {
    switch (v) {
    case Verdict::yes: return "true";
    case Verdict::no: return "false";
    case Verdict::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

/// Any "no" wins; otherwise any "inconclusive" wins.
inline Verdict combine(Verdict a, Verdict b) {
    if (a == Verdict::no || b == Verdict::no) return Verdict::no;
    if (a == Verdict::inconclusive || b == Verdict::inconclusive) return Verdict::inconclusive;
    return Verdict::yes;
}

struct VerificationReport {
    std::string check;
    Verdict verdict = Verdict::inconclusive;
    std::vector<std::string> failures;
    nlohmann::json witnesses = nlohmann::json::array();

    bool ok() const { return verdict == Verdict::yes; }

    nlohmann::json to_json() const {
        return {{"check", check}, {"verdict", to_string(verdict)}, {"failures", failures}, {"witnesses", witnesses}};
    }
};

} // namespace webrank
