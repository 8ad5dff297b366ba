// Command-line harness: runs the verification suites with a seeded
// configuration and writes the structured JSON report (and the displacement
// CSV for the constant-displacement experiment).
//
// Exit codes: 0 all assertions pass; 1 verification failure or
// non-convergence; 2 configuration or usage error.
#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "sp2cw/config.hpp"
#include "sp2cw/report.hpp"
#include "sp2cw/suites.hpp"

namespace {

using sp2cw::RunConfig;
using sp2cw::VerificationReport;

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct CliOptions {
  std::string config_path;
  std::string out;
  std::string structure_file;
  std::string s_list;
  std::optional<std::uint64_t> seed;
  std::optional<int> n;
  std::optional<int> samples;
  std::optional<int> jobs;
};

void add_common_flags(CLI::App* cmd, CliOptions& opts) {
  cmd->add_option("--config", opts.config_path, "configuration file (key = value lines)");
  cmd->add_option("--seed", opts.seed, "random seed");
  cmd->add_option("--s", opts.s_list, "comma-separated list of deformation parameters");
  cmd->add_option("--n", opts.n, "cyclic group parameter (order 2n+1)");
  cmd->add_option("--out", opts.out, "report output path (default: stdout)");
  cmd->add_option("--structure-file", opts.structure_file,
                  "structure cache: loaded when present, written otherwise");
  cmd->add_option("--samples", opts.samples, "sample count for the selected suite");
  cmd->add_option("--jobs", opts.jobs, "worker threads (results are identical for any count)");
}

RunConfig resolve_config(const CliOptions& opts, const std::string& suite) {
  RunConfig config;
  if (!opts.config_path.empty()) config = sp2cw::parse_config_file(opts.config_path);
  if (opts.seed) config.seed = *opts.seed;
  if (!opts.s_list.empty()) config.s_values = sp2cw::parse_double_list(opts.s_list);
  if (opts.n) config.n = *opts.n;
  if (opts.jobs) config.jobs = *opts.jobs;
  if (!opts.out.empty()) config.out = opts.out;
  if (!opts.structure_file.empty()) config.structure_file = opts.structure_file;
  if (opts.samples) {
    if (suite == "verify-ck") config.ck_samples = *opts.samples;
    else if (suite == "verify-orbit") config.orbit_samples = *opts.samples;
    else if (suite == "experiment-cw") config.cw_samples = *opts.samples;
    else {
      config.ck_samples = *opts.samples;
      config.orbit_samples = *opts.samples;
      config.cw_samples = *opts.samples;
    }
  }
  config.validate();
  return config;
}

void check_output_path(const std::string& path) {
  if (path.empty()) return;
  const std::filesystem::path parent = std::filesystem::path(path).parent_path();
  if (!parent.empty() && !std::filesystem::exists(parent)) {
    throw std::invalid_argument("output directory does not exist: " + parent.string());
  }
}

int emit_and_exit(const RunConfig& config, const std::vector<VerificationReport>& reports) {
  const nlohmann::ordered_json doc =
      sp2cw::report_document(sp2cw::config_echo(config), reports);
  if (config.out.empty()) {
    std::cout << doc.dump(1) << '\n';
  } else {
    std::ofstream out(config.out);
    if (!out) throw std::invalid_argument("cannot open output file: " + config.out);
    out << doc.dump(1) << '\n';
  }
  for (const VerificationReport& r : reports) {
    std::cerr << (r.passed() ? "[pass] " : (r.inconclusive ? "[inconclusive] " : "[FAIL] "))
              << r.suite << " (" << r.lemma << ")\n";
  }
  return sp2cw::all_passed(reports) ? kExitPass : kExitFail;
}

std::string csv_path_for(const RunConfig& config) {
  if (config.out.empty()) return "cw_displacements.csv";
  std::filesystem::path p(config.out);
  p.replace_extension(".csv");
  return p.string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical verification lab for the deformed left-invariant metrics on Sp(2), "
               "their constant-length Killing fields, and the constant-displacement "
               "translations of the cyclic subgroup"};
  app.require_subcommand(1);

  CliOptions opts;
  CLI::App* structure = app.add_subcommand(
      "verify-structure", "root-space structure, G2, the sp(2) embedding, and Phi");
  CLI::App* ck = app.add_subcommand("verify-ck", "constant-length Killing field statistics");
  CLI::App* orbit =
      app.add_subcommand("verify-orbit", "isometry algebra dimensions and orbit ranks");
  CLI::App* cw =
      app.add_subcommand("experiment-cw", "constant-displacement experiment across the sweep");
  CLI::App* all = app.add_subcommand("report-all", "every suite, one JSON document");
  for (CLI::App* cmd : {structure, ck, orbit, cw, all}) add_common_flags(cmd, opts);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    const std::string suite = app.get_subcommands().front()->get_name();
    const RunConfig config = resolve_config(opts, suite);
    check_output_path(config.out);
    if (!config.structure_file.empty()) check_output_path(config.structure_file);

    const sp2cw::So7Structure so7 = sp2cw::load_or_build_structure(config);

    std::vector<VerificationReport> reports;
    if (suite == "verify-structure") {
      reports = sp2cw::run_structure_suite(so7, config);
    } else if (suite == "verify-ck") {
      reports = sp2cw::run_ck_suite(so7, config);
    } else if (suite == "verify-orbit") {
      reports = sp2cw::run_orbit_suite(so7, config);
    } else if (suite == "experiment-cw") {
      const std::string csv = csv_path_for(config);
      check_output_path(csv);
      reports = sp2cw::run_cw_suite(so7, config, csv);
    } else {
      const std::string csv = csv_path_for(config);
      check_output_path(csv);
      reports = sp2cw::run_all_suites(so7, config, csv);
    }
    return emit_and_exit(config, reports);
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFail;
  }
}
