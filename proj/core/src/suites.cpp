#include "sp2cw/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>

#include "sp2cw/ck.hpp"
#include "sp2cw/geodesy.hpp"
#include "sp2cw/metric.hpp"
#include "sp2cw/subspace.hpp"
#include "sp2cw/util.hpp"

namespace sp2cw {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// Positive CK case: constant within the accept threshold; the band between
// accept and reject is explicitly inconclusive.
void classify_positive(VerificationReport& rep, const CkStatistic& st, const RunConfig& c) {
  rep.info("mean", st.mean);
  rep.info("min", st.min);
  rep.info("max", st.max);
  rep.check_le("relative_spread", st.relative_spread, c.ck_accept_spread);
  if (st.relative_spread > c.ck_accept_spread && st.relative_spread < c.ck_reject_spread)
    rep.inconclusive = true;
}

void classify_negative(VerificationReport& rep, const CkStatistic& st, const RunConfig& c) {
  rep.info("mean", st.mean);
  rep.check_ge("relative_spread", st.relative_spread, c.ck_reject_spread);
  if (st.relative_spread > c.ck_accept_spread && st.relative_spread < c.ck_reject_spread)
    rep.inconclusive = true;
}

}  // namespace

So7Structure load_or_build_structure(const RunConfig& config) {
  if (!config.structure_file.empty() && std::filesystem::exists(config.structure_file)) {
    std::ifstream in(config.structure_file);
    if (!in) throw std::runtime_error("cannot read structure file " + config.structure_file);
    nlohmann::ordered_json j;
    in >> j;
    return So7Structure::from_json(j);
  }
  So7Structure s = So7Structure::build();
  if (!config.structure_file.empty()) {
    std::ofstream out(config.structure_file);
    if (!out) throw std::runtime_error("cannot write structure file " + config.structure_file);
    out << s.to_json().dump(1) << '\n';
  }
  return s;
}

std::vector<VerificationReport> run_structure_suite(const So7Structure& structure,
                                                    const RunConfig& config) {
  const double scale = config.structure_tol_scale;
  std::vector<VerificationReport> reports;
  const std::vector<std::function<VerificationReport()>> steps = {
      [&] { return structure.verify_so7(scale); },
      [&] { return structure.verify_g2(scale); },
      [&] { return structure.verify_cartan(scale); },
      [&] { return structure.verify_roots(scale); },
      [&] { return structure.verify_lemma1(scale); },
      [&] { return structure.verify_sp2_subalgebra(scale); },
      [&] { return structure.verify_phi(scale); },
  };
  for (const auto& step : steps) {
    const auto t0 = Clock::now();
    VerificationReport rep = step();
    rep.seed = config.seed;
    rep.wall_time_ms = ms_since(t0);
    reports.push_back(std::move(rep));
  }
  return reports;
}

std::vector<VerificationReport> run_ck_suite(const So7Structure& structure,
                                             const RunConfig& config) {
  std::vector<VerificationReport> reports;
  const RngHandle rng(config.seed);

  if (config.ck_samples < 100) {
    VerificationReport rep;
    rep.suite = "ck.guard";
    rep.lemma = "Lemma 6";
    rep.seed = config.seed;
    rep.inconclusive = true;
    rep.info("sample_count", config.ck_samples);
    rep.check_ge("sample_count", config.ck_samples, 100);
    reports.push_back(rep);
    return reports;
  }

  // Sphere statistic: v = e1 is constant at 1/3; e1 + e2 is the control.
  {
    const auto t0 = Clock::now();
    VerificationReport rep;
    rep.suite = "ck.s7.e1";
    rep.lemma = "Lemma 3 / Example 3";
    rep.seed = config.seed;
    const CkStatistic st = ck_statistic_s7(structure, structure.labels[0], config.ck_samples,
                                           rng.split(0x57u), config.jobs);
    classify_positive(rep, st, config);
    rep.check_le("mean_matches_one_third", std::abs(st.mean - 1.0 / 3.0), 1e-9);
    rep.wall_time_ms = ms_since(t0);
    reports.push_back(rep);
  }
  {
    const auto t0 = Clock::now();
    VerificationReport rep;
    rep.suite = "ck.s7.negative_control";
    rep.lemma = "Lemma 3";
    rep.seed = config.seed;
    const Vec21 v = structure.labels[0] + structure.labels[1];
    const CkStatistic st =
        ck_statistic_s7(structure, v, config.ck_samples, rng.split(0x58u), config.jobs);
    classify_negative(rep, st, config);
    rep.wall_time_ms = ms_since(t0);
    reports.push_back(rep);
  }

  // Observation 1 cases.
  {
    const std::vector<double> ts = {-2.5, -1.1, 0.7, 1.9, 3.0};
    const auto t0 = Clock::now();
    VerificationReport commuting = observation1_check(
        QMat2::diag(quat_exp_imaginary(Quaternion::i() * 0.3),
                    quat_exp_imaginary(Quaternion::i() * 0.9)),
        ts);
    commuting.suite = "ck.observation1.commuting";
    commuting.seed = config.seed;
    commuting.check_true("expected_commuting",
                         commuting.checks[0].value <= 1e-10);
    commuting.wall_time_ms = ms_since(t0);
    reports.push_back(commuting);

    VerificationReport identity = observation1_check(QMat2::identity(), ts);
    identity.suite = "ck.observation1.identity";
    identity.seed = config.seed;
    reports.push_back(identity);

    VerificationReport noncommuting =
        observation1_check(QMat2::diag(Quaternion::j(), Quaternion::j()), ts);
    noncommuting.suite = "ck.observation1.noncommuting";
    noncommuting.seed = config.seed;
    noncommuting.check_true("expected_noncommuting",
                            noncommuting.checks[0].value > 1e-10);
    reports.push_back(noncommuting);
  }

  // Per-s statistics on Sp(2) and deformed Spin(7).
  const QMat2 v = sp2_v();
  for (std::size_t si = 0; si < config.s_values.size(); ++si) {
    const double s = config.s_values[si];
    const MetricGram metric = build_metric(s, structure);
    const std::string tag = ".s=" + format_value(s);

    {
      const auto t0 = Clock::now();
      VerificationReport rep;
      rep.suite = "ck.sp2.v" + tag;
      rep.lemma = "Lemma 6 / Example 1";
      rep.seed = config.seed;
      const CkStatistic st = ck_statistic_sp2(metric, v, config.ck_samples,
                                              rng.split(0x100u + si), config.jobs);
      classify_positive(rep, st, config);
      const double expected = metric.lambda * (2.0 + s) / 3.0;
      rep.check_le("mean_matches_prediction", std::abs(st.mean / expected - 1.0), 1e-9);
      rep.wall_time_ms = ms_since(t0);
      reports.push_back(rep);
    }
    {
      const auto t0 = Clock::now();
      VerificationReport rep;
      rep.suite = "ck.so7_deformed.e1" + tag;
      rep.lemma = "Lemma 4";
      rep.seed = config.seed;
      const CkStatistic st = ck_statistic_so7_deformed(
          structure, structure.labels[0], s, config.ck_samples, rng.split(0x200u + si),
          config.jobs);
      classify_positive(rep, st, config);
      rep.wall_time_ms = ms_since(t0);
      reports.push_back(rep);
    }
    {
      const auto t0 = Clock::now();
      VerificationReport rep;
      rep.suite = "ck.restriction" + tag;
      rep.lemma = "Lemma 5";
      rep.seed = config.seed;
      const double defect = restriction_consistency_defect(
          structure, s, std::min(config.ck_samples, 200), rng.split(0x300u + si));
      rep.check_le("restriction_defect", defect, 1e-9);
      rep.wall_time_ms = ms_since(t0);
      reports.push_back(rep);
    }
    if (s != 1.0) {
      const auto t0 = Clock::now();
      VerificationReport rep;
      rep.suite = "ck.sp2.negative_control" + tag;
      rep.lemma = "Lemma 6";
      rep.seed = config.seed;
      const CkStatistic st = ck_statistic_sp2(metric, QMat2::diag(Quaternion::j(), {}),
                                              config.ck_samples, rng.split(0x400u + si),
                                              config.jobs);
      classify_negative(rep, st, config);
      rep.wall_time_ms = ms_since(t0);
      reports.push_back(rep);
    }
  }
  return reports;
}

std::vector<VerificationReport> run_orbit_suite(const So7Structure& structure,
                                                const RunConfig& config) {
  std::vector<VerificationReport> reports;
  std::vector<Eigen::MatrixXd> ks_bases;
  std::vector<double> ks_s;

  for (std::size_t si = 0; si < config.s_values.size(); ++si) {
    const double s = config.s_values[si];
    const auto t0 = Clock::now();
    VerificationReport rep;
    rep.suite = "orbit.s=" + format_value(s);
    rep.lemma = "Lemma 7";
    rep.seed = config.seed;

    std::vector<OrbitReport> surveys;
    for (int k = 0; k < config.orbit_seeds; ++k) {
      const RngHandle rng(config.seed + static_cast<std::uint64_t>(k));
      surveys.push_back(
          orbit_survey(s, structure, config.orbit_samples, rng.split(0x0Bu + si), config.jobs));
    }
    const OrbitReport& first = surveys.front();
    rep.info("sample_count", first.sample_count);
    rep.info("dim_c", first.dim_c);
    rep.info("dim_ks", first.dim_ks);
    rep.info("dim_intersection", first.dim_intersection);
    rep.info("ks_gap", first.ks_gap);
    bool stable = true;
    int max_rank = 0;
    for (const OrbitReport& r : surveys) {
      stable = stable && (r.max_rank_over_samples == first.max_rank_over_samples);
      max_rank = std::max(max_rank, r.max_rank_over_samples);
    }
    rep.check_true("max_rank_stable_across_seeds", stable);
    rep.check_eq_int("dim_c", first.dim_c, 4);
    if (s == 1.0) {
      rep.check_eq_int("dim_ks", first.dim_ks, 10);
      rep.check_eq_int("max_rank", max_rank, 10);
    } else {
      rep.check_eq_int("dim_ks", first.dim_ks, 6);
      rep.check_ge("ks_gap", first.ks_gap, 1e4);
      rep.check_eq_int("dim_intersection", first.dim_intersection, 2);
      rep.check_eq_int("max_rank", max_rank, 8);
      rep.check_true("max_rank_below_manifold_dim", max_rank < 10);
      const MetricGram metric = build_metric(s, structure);
      ks_bases.push_back(isometric_right_algebra(metric));
      ks_s.push_back(s);
    }
    rep.wall_time_ms = ms_since(t0);
    reports.push_back(rep);
  }

  // k_s is one fixed subalgebra for every s != 1, and it normalizes
  // sp(2) cap h.
  {
    const auto t0 = Clock::now();
    VerificationReport rep;
    rep.suite = "orbit.isometry_algebra";
    rep.lemma = "Lemma 11";
    rep.seed = config.seed;
    double pairwise = 0;
    for (std::size_t i = 0; i + 1 < ks_bases.size(); ++i)
      pairwise = std::max(pairwise, subspace_distance(ks_bases[i], ks_bases[i + 1]));
    rep.check_le("ks_subspace_variation_across_s", pairwise, 1e-9);

    double normalizer_defect = 0;
    if (!ks_bases.empty()) {
      const Eigen::MatrixXd& ks = ks_bases.front();
      const Eigen::MatrixXd& sp2h = structure.sp2h_quat;
      const Eigen::MatrixXd proj = sp2h * sp2h.transpose();
      for (int i = 0; i < ks.cols(); ++i)
        for (int j = 0; j < sp2h.cols(); ++j) {
          const Vec10 br = sp2_bracket_coords(ks.col(i), sp2h.col(j));
          normalizer_defect = std::max(normalizer_defect, (br - proj * br).norm());
        }
    }
    rep.check_le("ks_normalizes_sp2_cap_h", normalizer_defect, 1e-9);
    rep.wall_time_ms = ms_since(t0);
    reports.push_back(rep);
  }
  return reports;
}

std::vector<VerificationReport> run_geodesy_suite(const So7Structure& structure,
                                                  const RunConfig& config) {
  std::vector<VerificationReport> reports;
  const MetricGram metric1 = build_metric(1.0, structure);
  const double sqrt_lambda = std::sqrt(metric1.lambda);
  const RngHandle rng(config.seed);

  ShootParams params;
  params.restarts = config.geodesy_restarts;
  params.tol = config.geodesy_shoot_tol;
  params.steps_per_unit = config.geodesy_steps_per_unit;

  // Shooting versus the closed-form oracle at s = 1.
  {
    const auto t0 = Clock::now();
    VerificationReport rep;
    rep.suite = "geodesy.oracle";
    rep.lemma = "Lemma 9";
    rep.seed = config.seed;

    const QMat2 v = sp2_v();
    std::vector<QMat2> targets;
    for (double t : {std::numbers::pi / 6, std::numbers::pi / 3, 2 * std::numbers::pi / 3,
                     0.9 * std::numbers::pi})
      targets.push_back(qmat_exp(qmat_scale(v, t)));
    const int structured = static_cast<int>(targets.size());
    for (int i = 0; i < config.geodesy_targets; ++i) {
      RngHandle local = rng.split(0x6E0000u + i);
      targets.push_back(random_sp2(local));
    }

    std::vector<double> deviation(targets.size(), 0.0);
    std::vector<double> drift(targets.size(), 0.0);
    std::vector<char> converged(targets.size(), 0);
    parallel_for(static_cast<int>(targets.size()), config.jobs, [&](int i) {
      const DistanceEstimate est =
          shoot_distance(targets[i], metric1, params, rng.split(0x6F0000u + i));
      converged[i] = est.converged ? 1 : 0;
      if (!est.converged) return;
      const double oracle = bi_distance_oracle(targets[i]);
      deviation[i] = std::abs(est.length / sqrt_lambda - oracle);
      GeodesicState start;
      start.u = est.best_u0;
      const IntegrationResult ir = integrate_geodesic(
          start, 1.0, std::max(64, static_cast<int>(est.best_u0.norm() *
                                                    config.geodesy_steps_per_unit)),
          metric1, false);
      drift[i] = ir.energy_drift;
    });
    const bool all_conv =
        std::all_of(converged.begin(), converged.end(), [](char c) { return c != 0; });
    rep.check_true("all_shots_converged", all_conv);
    rep.check_le("max_oracle_deviation_structured",
                 *std::max_element(deviation.begin(), deviation.begin() + structured),
                 config.geodesy_oracle_tol);
    rep.check_le("max_oracle_deviation_random",
                 *std::max_element(deviation.begin() + structured, deviation.end()),
                 config.geodesy_oracle_tol);
    rep.check_le("max_energy_drift", *std::max_element(drift.begin(), drift.end()), 1e-9);
    rep.wall_time_ms = ms_since(t0);
    reports.push_back(rep);
  }

  // Step-halving convergence order at s = 1.1.
  {
    const auto t0 = Clock::now();
    VerificationReport rep;
    rep.suite = "geodesy.convergence_order";
    rep.lemma = "Lemma 9";
    rep.seed = config.seed;
    const MetricGram metric = build_metric(1.1, structure);
    RngHandle local = rng.split(0x0DDEu);
    Vec10 u0;
    for (int k = 0; k < 10; ++k) u0(k) = local.next_gaussian();
    u0 *= 2.5 / u0.norm();
    GeodesicState start;
    start.u = u0;
    const int base = 24;
    const QMat2 ref = integrate_geodesic(start, 1.0, 4 * base, metric, false).end.g;
    const QMat2 e1 = integrate_geodesic(start, 1.0, base, metric, false).end.g;
    const QMat2 e2 = integrate_geodesic(start, 1.0, 2 * base, metric, false).end.g;
    const double err1 = qmat_frobenius(qmat_sub(e1, ref));
    const double err2 = qmat_frobenius(qmat_sub(e2, ref));
    const double order = std::log2(err1 / err2);
    rep.info("error_coarse", err1);
    rep.info("error_fine", err2);
    rep.check_le("order_deviation_from_4", std::abs(order - 4.0), 0.3);
    rep.wall_time_ms = ms_since(t0);
    reports.push_back(rep);
  }

  // Injectivity probes.
  {
    const auto t0 = Clock::now();
    VerificationReport rep = exp_injectivity_probe(
        metric1, config.probe_radius_fraction * std::numbers::pi, config.probe_pairs,
        rng.split(0x1A1u), config.jobs);
    rep.suite = "geodesy.injectivity.s=1";
    rep.seed = config.seed;
    rep.wall_time_ms = ms_since(t0);
    reports.push_back(rep);
  }
  {
    const auto t0 = Clock::now();
    const MetricGram metric = build_metric(1.1, structure);
    VerificationReport rep =
        exp_injectivity_probe(metric, 0.5, config.probe_pairs, rng.split(0x1A2u), config.jobs);
    rep.suite = "geodesy.injectivity.s=1.1";
    rep.seed = config.seed;
    rep.wall_time_ms = ms_since(t0);
    reports.push_back(rep);
  }
  return reports;
}

std::vector<VerificationReport> run_cw_suite(const So7Structure& structure,
                                             const RunConfig& config,
                                             const std::string& csv_out) {
  std::vector<VerificationReport> reports;
  const RngHandle rng(config.seed);
  const GammaGroup gamma = build_gamma(config.n);

  ShootParams params;
  params.restarts = config.geodesy_restarts;
  params.tol = config.geodesy_shoot_tol;
  params.steps_per_unit = config.geodesy_steps_per_unit;

  std::vector<double> sweep = config.s_values;
  std::sort(sweep.begin(), sweep.end());
  // The two sweep points nearest 1 (excluding 1) carry assertions.
  double below = -1, above = -1;
  for (double s : sweep) {
    if (s < 1.0 && (below < 0 || 1.0 - s < 1.0 - below)) below = s;
    if (s > 1.0 && (above < 0 || s - 1.0 < above - 1.0)) above = s;
  }

  std::ofstream csv;
  if (!csv_out.empty()) {
    csv.open(csv_out);
    if (!csv) throw std::runtime_error("cannot write CSV file " + csv_out);
    csv << "s,t0,sample_index,displacement,defect,converged\n";
  }

  std::size_t run_index = 0;
  for (double s : sweep) {
    for (std::size_t gi = 0; gi < gamma.elements.size(); ++gi) {
      const double t0_angle = gamma.angles[gi];
      if (t0_angle == 0.0) continue;
      const auto tstart = Clock::now();
      const CwExperimentResult res = cw_displacement_experiment(
          s, t0_angle, config.cw_samples, rng.split(0xC30000u + run_index), params, structure,
          config.jobs);
      ++run_index;

      if (csv.is_open()) {
        char buf[160];
        for (std::size_t i = 0; i < res.samples.size(); ++i) {
          const CwSample& smp = res.samples[i];
          std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%zu,%.17g,%.17g,%d\n", s, t0_angle, i,
                        smp.displacement_normalized, smp.defect, smp.converged ? 1 : 0);
          csv << buf;
        }
      }

      VerificationReport rep;
      rep.suite = "cw.s=" + format_value(s) + ".t0=" + format_value(t0_angle);
      rep.lemma = "Lemma 12 / Theorem 2";
      rep.seed = config.seed;
      rep.info("mean_displacement", res.mean);
      rep.info("predicted", res.predicted);
      rep.info("relative_spread", res.relative_spread);
      rep.check_true("all_shots_converged", res.all_converged);
      if (s == 1.0) {
        rep.check_le("relative_spread", res.relative_spread, 1e-4);
        rep.check_le("mean_matches_prediction",
                     std::abs(res.mean / res.predicted - 1.0), 1e-4);
      } else if (s == below || s == above) {
        rep.check_le("relative_spread", res.relative_spread, config.cw_spread_tol);
        rep.check_le("mean_matches_prediction",
                     std::abs(res.mean / res.predicted - 1.0), config.cw_spread_tol);
      }
      rep.wall_time_ms = ms_since(tstart);
      reports.push_back(rep);
    }
  }

  // Negative control: a non-CK direction spreads visibly for s != 1.
  if (above > 0 && !gamma.angles.empty()) {
    const auto tstart = Clock::now();
    const double t0_angle = gamma.angles.back();  // largest positive angle
    const QMat2 dir = QMat2::diag(Quaternion::j() * std::numbers::sqrt2, {});
    const CwExperimentResult res = cw_displacement_experiment(
        above, t0_angle, std::min(config.cw_samples, 16), rng.split(0xC3FFFFu), params,
        structure, config.jobs, dir);
    VerificationReport rep;
    rep.suite = "cw.negative_control.s=" + format_value(above);
    rep.lemma = "Lemma 12";
    rep.seed = config.seed;
    rep.info("relative_spread", res.relative_spread);
    rep.check_true("all_shots_converged", res.all_converged);
    rep.check_ge("control_spread_rejected", res.relative_spread, 1e-2);
    rep.wall_time_ms = ms_since(tstart);
    reports.push_back(rep);
  }
  return reports;
}

std::vector<VerificationReport> run_all_suites(const So7Structure& structure,
                                               const RunConfig& config,
                                               const std::string& csv_out) {
  std::vector<VerificationReport> all;
  for (auto&& batch :
       {run_structure_suite(structure, config), run_ck_suite(structure, config),
        run_orbit_suite(structure, config), run_geodesy_suite(structure, config),
        run_cw_suite(structure, config, csv_out)}) {
    all.insert(all.end(), batch.begin(), batch.end());
  }
  return all;
}

bool all_passed(const std::vector<VerificationReport>& reports) {
  return std::all_of(reports.begin(), reports.end(),
                     [](const VerificationReport& r) { return r.passed(); });
}

}  // namespace sp2cw
