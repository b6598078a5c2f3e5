#pragma once
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

namespace isophote {

/// One named certification: value compared against a named tolerance.
struct CheckRecord {
    std::string name;
    double value = 0.0;
    std::string tolerance_name;
    double tolerance = 0.0;
    std::string comparison = "<=";  ///< "<=" or ">"
    bool pass = false;
};

inline CheckRecord make_check(std::string name, double value, std::string tol_name, double tol,
                              bool upper_bound = true) {
    CheckRecord c;
    c.name = std::move(name);
    c.value = value;
    c.tolerance_name = std::move(tol_name);
    c.tolerance = tol;
    c.comparison = upper_bound ? "<=" : ">";
    c.pass = upper_bound ? (value <= tol) : (value > tol);
    return c;
}

struct ReportEntry {
    std::string job;   ///< e.g. "job00"
    std::string verb;
    std::vector<CheckRecord> checks;
    std::vector<std::string> artifacts;
    std::map<std::string, std::string> notes;  ///< chosen branches, classifications, ...

    bool passed() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

struct VerificationReport {
    std::vector<ReportEntry> entries;

    bool all_passed() const {
        for (const auto& e : entries)
            if (!e.passed()) return false;
        return true;
    }

    nlohmann::json to_json() const {
        nlohmann::json doc;
        doc["entries"] = nlohmann::json::array();
        for (const auto& e : entries) {
            nlohmann::json je;
            je["job"] = e.job;
            je["verb"] = e.verb;
            je["pass"] = e.passed();
            je["checks"] = nlohmann::json::array();
            for (const auto& c : e.checks) {
                je["checks"].push_back({{"name", c.name},
                                        {"value", c.value},
                                        {"tolerance_name", c.tolerance_name},
                                        {"tolerance", c.tolerance},
                                        {"comparison", c.comparison},
                                        {"pass", c.pass}});
            }
            je["artifacts"] = e.artifacts;
            je["notes"] = e.notes;
            doc["entries"].push_back(je);
        }
        doc["all_passed"] = all_passed();
        return doc;
    }

    std::string to_text() const {
        std::ostringstream os;
        for (const auto& e : entries) {
            os << "[" << (e.passed() ? "PASS" : "FAIL") << "] " << e.job << " " << e.verb << "\n";
            for (const auto& c : e.checks) {
                char buf[256];
                std::snprintf(buf, sizeof(buf), "  %-6s %-38s %.6e %s %.1e (%s)\n",
                              c.pass ? "ok" : "FAIL", c.name.c_str(), c.value,
                              c.comparison.c_str(), c.tolerance, c.tolerance_name.c_str());
                os << buf;
            }
            for (const auto& [k, v] : e.notes) os << "  note   " << k << " = " << v << "\n";
            for (const auto& a : e.artifacts) os << "  file   " << a << "\n";
        }
        os << (all_passed() ? "ALL CHECKS PASSED\n" : "SOME CHECKS FAILED\n");
        return os.str();
    }
};

}  // namespace isophote
