// Run configuration: one flat key-value file with dotted keys, overridable
// by command-line flags. All randomness flows from `seed`; all tolerances are
// explicit so a config file fully determines a run.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace sp2cw {

struct RunConfig {
  std::uint64_t seed = 42;
  std::vector<double> s_values = {0.8, 0.9, 0.95, 1.0, 1.05, 1.1, 1.25};
  int n = 1;
  int jobs = 1;
  std::string out;             // report output path; empty = stdout
  std::string structure_file;  // optional cache of the so(7) construction

  int ck_samples = 10000;
  double ck_accept_spread = 1e-9;
  double ck_reject_spread = 1e-3;

  int orbit_samples = 500;
  int orbit_seeds = 3;

  int cw_samples = 40;
  double cw_spread_tol = 1e-3;

  int geodesy_restarts = 50;
  double geodesy_shoot_tol = 1e-7;
  double geodesy_steps_per_unit = 96;
  double geodesy_oracle_tol = 1e-4;
  int geodesy_targets = 50;

  int probe_pairs = 10000;
  double probe_radius_fraction = 0.9;  // of pi, at s = 1

  double structure_tol_scale = 1.0;  // scales the structure-suite thresholds

  void validate() const;  // throws std::invalid_argument on bad values
};

// Parses "key = value" lines; '#' starts a comment. Unknown keys are errors.
RunConfig parse_config_file(const std::string& path, RunConfig base = {});
void apply_config_line(RunConfig& config, const std::string& key, const std::string& value);

std::vector<double> parse_double_list(const std::string& csv);

nlohmann::ordered_json config_echo(const RunConfig& config);

}  // namespace sp2cw
