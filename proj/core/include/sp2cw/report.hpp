// Structured pass/fail records. Every suite emits one VerificationReport per
// verified statement, tagged with the lemma it traces to, so the JSON output
// is mechanically auditable.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace sp2cw {

struct Check {
  std::string name;
  double value = 0;
  double threshold = 0;
  std::string relation;  // "<=", ">=", "==" (exact), "true"
  bool pass = false;
};

struct VerificationReport {
  std::string suite;
  std::string lemma;
  std::uint64_t seed = 0;
  double wall_time_ms = 0;
  bool inconclusive = false;
  std::vector<Check> checks;

  void check_le(const std::string& name, double value, double threshold);
  void check_ge(const std::string& name, double value, double threshold);
  void check_eq_int(const std::string& name, long long value, long long expected);
  void check_true(const std::string& name, bool ok);
  // Recorded measurement that does not gate the pass/fail status.
  void info(const std::string& name, double value);

  bool passed() const;
  std::string status() const;  // "pass" | "fail" | "inconclusive"
  nlohmann::ordered_json to_json() const;
};

// Full run document: schema_version, echoed config, suites ordered by name.
nlohmann::ordered_json report_document(const nlohmann::ordered_json& config_echo,
                                       std::vector<VerificationReport> reports);

// Strips volatile fields (wall_time_ms) so two runs can be compared bitwise.
nlohmann::ordered_json strip_volatile(nlohmann::ordered_json doc);

}  // namespace sp2cw
