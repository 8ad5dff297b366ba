// Suite orchestration shared by the command-line tool and the acceptance
// tests: each function runs one verification campaign and returns the
// reports; the caller decides exit codes and serialization.
#pragma once

#include <string>
#include <vector>

#include "sp2cw/config.hpp"
#include "sp2cw/report.hpp"
#include "sp2cw/so7.hpp"

namespace sp2cw {

// Loads the structure from config.structure_file when the file exists,
// otherwise builds it (and saves it when a path is configured).
So7Structure load_or_build_structure(const RunConfig& config);

std::vector<VerificationReport> run_structure_suite(const So7Structure& structure,
                                                    const RunConfig& config);
std::vector<VerificationReport> run_ck_suite(const So7Structure& structure,
                                             const RunConfig& config);
std::vector<VerificationReport> run_orbit_suite(const So7Structure& structure,
                                                const RunConfig& config);
// Lemma 9 oracle suite: shooting against the closed-form bi-invariant
// distance at s = 1, integrator quality, and the injectivity probes.
std::vector<VerificationReport> run_geodesy_suite(const So7Structure& structure,
                                                  const RunConfig& config);
// Constant-displacement experiment across the s sweep; appends one CSV row
// per (s, t0, sample) to csv_out when non-empty.
std::vector<VerificationReport> run_cw_suite(const So7Structure& structure,
                                             const RunConfig& config,
                                             const std::string& csv_out);

std::vector<VerificationReport> run_all_suites(const So7Structure& structure,
                                               const RunConfig& config,
                                               const std::string& csv_out);

bool all_passed(const std::vector<VerificationReport>& reports);

}  // namespace sp2cw
