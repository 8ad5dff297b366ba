#include "sp2cw/report.hpp"

#include <algorithm>

namespace sp2cw {

void VerificationReport::check_le(const std::string& name, double value, double threshold) {
  checks.push_back({name, value, threshold, "<=", value <= threshold});
}

void VerificationReport::check_ge(const std::string& name, double value, double threshold) {
  checks.push_back({name, value, threshold, ">=", value >= threshold});
}

void VerificationReport::check_eq_int(const std::string& name, long long value,
                                      long long expected) {
  checks.push_back({name, static_cast<double>(value), static_cast<double>(expected), "==",
                    value == expected});
}

void VerificationReport::check_true(const std::string& name, bool ok) {
  checks.push_back({name, ok ? 1.0 : 0.0, 1.0, "true", ok});
}

void VerificationReport::info(const std::string& name, double value) {
  checks.push_back({name, value, 0.0, "info", true});
}

bool VerificationReport::passed() const {
  if (inconclusive) return false;
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

std::string VerificationReport::status() const {
  if (inconclusive) return "inconclusive";
  return passed() ? "pass" : "fail";
}

nlohmann::ordered_json VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["lemma"] = lemma;
  j["status"] = status();
  j["seed"] = seed;
  j["wall_time_ms"] = wall_time_ms;
  nlohmann::ordered_json checks_j = nlohmann::ordered_json::array();
  for (const Check& c : checks) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["value"] = c.value;
    cj["threshold"] = c.threshold;
    cj["relation"] = c.relation;
    cj["pass"] = c.pass;
    checks_j.push_back(cj);
  }
  j["checks"] = checks_j;
  return j;
}

nlohmann::ordered_json report_document(const nlohmann::ordered_json& config_echo,
                                       std::vector<VerificationReport> reports) {
  std::sort(reports.begin(), reports.end(),
            [](const VerificationReport& a, const VerificationReport& b) {
              return a.suite < b.suite;
            });
  nlohmann::ordered_json doc;
  doc["schema_version"] = "1";
  doc["config"] = config_echo;
  nlohmann::ordered_json suites = nlohmann::ordered_json::array();
  for (const VerificationReport& r : reports) suites.push_back(r.to_json());
  doc["suites"] = suites;
  return doc;
}

nlohmann::ordered_json strip_volatile(nlohmann::ordered_json doc) {
  if (doc.contains("suites")) {
    for (auto& suite : doc["suites"]) suite.erase("wall_time_ms");
  }
  return doc;
}

}  // namespace sp2cw
