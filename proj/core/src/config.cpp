#include "sp2cw/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace sp2cw {

namespace {

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

void RunConfig::validate() const {
  if (s_values.empty()) throw std::invalid_argument("config: s list must not be empty");
  for (double s : s_values)
    if (!(s > 0)) throw std::invalid_argument("config: all s values must be positive");
  if (n < 1) throw std::invalid_argument("config: n must be >= 1");
  if (jobs < 1) throw std::invalid_argument("config: jobs must be >= 1");
  if (ck_samples < 1 || orbit_samples < 1 || cw_samples < 1 || probe_pairs < 1 ||
      geodesy_targets < 1 || orbit_seeds < 1)
    throw std::invalid_argument("config: sample counts must be >= 1");
  if (!(ck_accept_spread > 0) || !(ck_reject_spread > 0) || !(cw_spread_tol > 0) ||
      !(geodesy_shoot_tol > 0) || !(geodesy_oracle_tol > 0) || !(structure_tol_scale > 0))
    throw std::invalid_argument("config: tolerances must be positive");
  if (geodesy_restarts < 1) throw std::invalid_argument("config: restarts must be >= 1");
  if (!(geodesy_steps_per_unit >= 8))
    throw std::invalid_argument("config: geodesy.steps_per_unit must be >= 8");
  if (!(probe_radius_fraction > 0 && probe_radius_fraction < 1))
    throw std::invalid_argument("config: probe.radius_fraction must lie in (0, 1)");
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) continue;
    std::size_t pos = 0;
    const double v = std::stod(t, &pos);
    if (pos != t.size()) throw std::invalid_argument("config: bad number '" + t + "'");
    out.push_back(v);
  }
  return out;
}

void apply_config_line(RunConfig& c, const std::string& key, const std::string& value) {
  auto as_int = [&](const std::string& v) {
    std::size_t pos = 0;
    const long long x = std::stoll(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("config: bad integer '" + v + "'");
    return x;
  };
  auto as_double = [&](const std::string& v) {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("config: bad number '" + v + "'");
    return x;
  };

  if (key == "seed") c.seed = static_cast<std::uint64_t>(as_int(value));
  else if (key == "s_values") c.s_values = parse_double_list(value);
  else if (key == "n") c.n = static_cast<int>(as_int(value));
  else if (key == "jobs") c.jobs = static_cast<int>(as_int(value));
  else if (key == "out") c.out = value;
  else if (key == "structure_file") c.structure_file = value;
  else if (key == "ck.samples") c.ck_samples = static_cast<int>(as_int(value));
  else if (key == "ck.accept_spread") c.ck_accept_spread = as_double(value);
  else if (key == "ck.reject_spread") c.ck_reject_spread = as_double(value);
  else if (key == "orbit.samples") c.orbit_samples = static_cast<int>(as_int(value));
  else if (key == "orbit.seeds") c.orbit_seeds = static_cast<int>(as_int(value));
  else if (key == "cw.samples") c.cw_samples = static_cast<int>(as_int(value));
  else if (key == "cw.spread_tol") c.cw_spread_tol = as_double(value);
  else if (key == "geodesy.restarts") c.geodesy_restarts = static_cast<int>(as_int(value));
  else if (key == "geodesy.shoot_tol") c.geodesy_shoot_tol = as_double(value);
  else if (key == "geodesy.steps_per_unit") c.geodesy_steps_per_unit = as_double(value);
  else if (key == "geodesy.oracle_tol") c.geodesy_oracle_tol = as_double(value);
  else if (key == "geodesy.targets") c.geodesy_targets = static_cast<int>(as_int(value));
  else if (key == "probe.pairs") c.probe_pairs = static_cast<int>(as_int(value));
  else if (key == "probe.radius_fraction") c.probe_radius_fraction = as_double(value);
  else if (key == "structure.tol_scale") c.structure_tol_scale = as_double(value);
  else throw std::invalid_argument("config: unknown key '" + key + "'");
}

RunConfig parse_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  " is not key=value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    apply_config_line(base, key, value);
  }
  return base;
}

nlohmann::ordered_json config_echo(const RunConfig& c) {
  nlohmann::ordered_json j;
  j["seed"] = c.seed;
  j["s_values"] = c.s_values;
  j["n"] = c.n;
  j["jobs"] = c.jobs;
  j["out"] = c.out;
  j["structure_file"] = c.structure_file;
  j["ck.samples"] = c.ck_samples;
  j["ck.accept_spread"] = c.ck_accept_spread;
  j["ck.reject_spread"] = c.ck_reject_spread;
  j["orbit.samples"] = c.orbit_samples;
  j["orbit.seeds"] = c.orbit_seeds;
  j["cw.samples"] = c.cw_samples;
  j["cw.spread_tol"] = c.cw_spread_tol;
  j["geodesy.restarts"] = c.geodesy_restarts;
  j["geodesy.shoot_tol"] = c.geodesy_shoot_tol;
  j["geodesy.steps_per_unit"] = c.geodesy_steps_per_unit;
  j["geodesy.oracle_tol"] = c.geodesy_oracle_tol;
  j["geodesy.targets"] = c.geodesy_targets;
  j["probe.pairs"] = c.probe_pairs;
  j["probe.radius_fraction"] = c.probe_radius_fraction;
  j["structure.tol_scale"] = c.structure_tol_scale;
  return j;
}

}  // namespace sp2cw
