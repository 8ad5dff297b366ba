#include "sp2cw/geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sp2cw/util.hpp"

namespace sp2cw {

namespace {

constexpr int kRetractEvery = 64;

// dexpinv truncated after the [Omega, [Omega, f]] term; Bernoulli B3 = 0, so
// the truncation error is O(|Omega|^4 |f|), enough for a 4th-order scheme.
Vec10 dexpinv(const Vec10& omega, const Vec10& f) {
  const Vec10 c1 = sp2_bracket_coords(omega, f);
  const Vec10 c2 = sp2_bracket_coords(omega, c1);
  return f - 0.5 * c1 + (1.0 / 12.0) * c2;
}

struct Rk4Tableau {
  static constexpr double a21 = 0.5, a32 = 0.5, a43 = 1.0;
  static constexpr double b1 = 1.0 / 6, b2 = 1.0 / 3, b3 = 1.0 / 3, b4 = 1.0 / 6;
};

// One Munthe-Kaas RK4 step of the pair (g, u): u evolves by the Euler-Arnold
// field, g by g' = g * u^ through the exponential chart at g.
GeodesicState rkmk4_step(const GeodesicState& state, double h, const MetricGram& metric,
                         const Eigen::LLT<Mat10>& llt) {
  const auto& ad = sp2_ad();
  auto ea = [&](const Vec10& u) -> Vec10 {
    Mat10 a = Mat10::Zero();
    for (int i = 0; i < 10; ++i)
      if (u(i) != 0.0) a += u(i) * ad[i];
    return llt.solve(a.transpose() * (metric.gram * u));
  };

  const Vec10 u1 = state.u;
  const Vec10 ku1 = ea(u1);
  const Vec10 ko1 = u1;  // dexpinv at Omega = 0

  const Vec10 o2 = h * Rk4Tableau::a21 * ko1;
  const Vec10 u2 = state.u + h * Rk4Tableau::a21 * ku1;
  const Vec10 ku2 = ea(u2);
  const Vec10 ko2 = dexpinv(o2, u2);

  const Vec10 o3 = h * Rk4Tableau::a32 * ko2;
  const Vec10 u3 = state.u + h * Rk4Tableau::a32 * ku2;
  const Vec10 ku3 = ea(u3);
  const Vec10 ko3 = dexpinv(o3, u3);

  const Vec10 o4 = h * Rk4Tableau::a43 * ko3;
  const Vec10 u4 = state.u + h * Rk4Tableau::a43 * ku3;
  const Vec10 ku4 = ea(u4);
  const Vec10 ko4 = dexpinv(o4, u4);

  const Vec10 omega = h * (Rk4Tableau::b1 * ko1 + Rk4Tableau::b2 * ko2 + Rk4Tableau::b3 * ko3 +
                           Rk4Tableau::b4 * ko4);
  GeodesicState next;
  next.u = state.u + h * (Rk4Tableau::b1 * ku1 + Rk4Tableau::b2 * ku2 + Rk4Tableau::b3 * ku3 +
                          Rk4Tableau::b4 * ku4);
  next.g = qmat_mul(state.g, qmat_exp(sp2_from_coords(omega)));
  return next;
}

int steps_for(const Vec10& u0, double steps_per_unit) {
  const double scale = u0.norm();
  return std::clamp(static_cast<int>(std::ceil(scale * steps_per_unit)) + 32, 64, 4000);
}

}  // namespace

Vec10 euler_arnold_rhs(const Vec10& u, const MetricGram& metric) {
  Mat10 a = Mat10::Zero();
  const auto& ad = sp2_ad();
  for (int i = 0; i < 10; ++i)
    if (u(i) != 0.0) a += u(i) * ad[i];
  return metric.factor().solve(a.transpose() * (metric.gram * u));
}

IntegrationResult integrate_geodesic(const GeodesicState& start, double T, int steps,
                                     const MetricGram& metric, bool checked) {
  if (steps < 1) throw std::invalid_argument("integrate_geodesic: steps must be >= 1");
  const Eigen::LLT<Mat10> llt = metric.factor();
  const double h = T / steps;
  const double e0 = metric.inner(start.u, start.u);
  GeodesicState state = start;
  for (int i = 0; i < steps; ++i) {
    state = rkmk4_step(state, h, metric, llt);
    if ((i + 1) % kRetractEvery == 0) state.g = retract_to_sp2(state.g);
  }
  state.g = retract_to_sp2(state.g);

  IntegrationResult out;
  out.end = state;
  const double e1 = metric.inner(state.u, state.u);
  out.energy_drift = e0 > 0 ? std::abs(e1 - e0) / e0 : std::abs(e1);
  const QMat2 defect =
      qmat_sub(qmat_mul(qmat_conj_transpose(state.g), state.g), QMat2::identity());
  out.membership_defect = qmat_max_abs(defect);
  if (checked) {
    if (out.membership_defect > 1e-9)
      throw std::runtime_error("integrate_geodesic: endpoint membership defect above 1e-9");
    if (out.energy_drift > 1e-9)
      throw std::runtime_error("integrate_geodesic: energy drift above 1e-9");
  }
  return out;
}

std::vector<GeodesicState> integrate_geodesic_path(const GeodesicState& start, double T,
                                                   int steps, const MetricGram& metric) {
  if (steps < 1) throw std::invalid_argument("integrate_geodesic_path: steps must be >= 1");
  const Eigen::LLT<Mat10> llt = metric.factor();
  const double h = T / steps;
  std::vector<GeodesicState> path;
  path.reserve(steps + 1);
  path.push_back(start);
  for (int i = 0; i < steps; ++i) {
    GeodesicState next = rkmk4_step(path.back(), h, metric, llt);
    if ((i + 1) % kRetractEvery == 0) next.g = retract_to_sp2(next.g);
    path.push_back(next);
  }
  return path;
}

QMat2 riemannian_exp(const Vec10& u0, const MetricGram& metric, double steps_per_unit) {
  GeodesicState start;
  start.u = u0;
  return integrate_geodesic(start, 1.0, steps_for(u0, steps_per_unit), metric, false).end.g;
}

double bi_distance_oracle(const QMat2& g) {
  const auto [t1, t2] = eigenangles(g);
  return std::sqrt(0.5 * (t1 * t1 + t2 * t2));
}

namespace {

// Endpoint residual of the unit-time geodesic against the target, flattened
// over the quaternion entries (16 reals).
Eigen::VectorXd endpoint_residual(const QMat2& end, const QMat2& target) {
  Eigen::VectorXd r(16);
  const QMat2 d = qmat_sub(end, target);
  int idx = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      r(idx++) = d.m[i][j].w;
      r(idx++) = d.m[i][j].x;
      r(idx++) = d.m[i][j].y;
      r(idx++) = d.m[i][j].z;
    }
  return r;
}

struct GnOutcome {
  Vec10 u0;
  double defect = 0;
  bool converged = false;
};

// Damped Gauss-Newton (Levenberg style) on u0 -> || Exp(u0) - target ||.
GnOutcome gauss_newton(const Vec10& start, const QMat2& target, const MetricGram& metric,
                       const ShootParams& params) {
  GnOutcome out;
  out.u0 = start;
  auto defect_of = [&](const Vec10& u) {
    return endpoint_residual(riemannian_exp(u, metric, params.steps_per_unit), target);
  };
  Eigen::VectorXd r = defect_of(out.u0);
  double best = r.norm();
  double mu = 1e-8;
  for (int iter = 0; iter < params.max_iterations; ++iter) {
    if (best < params.tol) break;
    // Forward-difference Jacobian.
    Eigen::Matrix<double, 16, 10> jac;
    const double eps = 1e-6 * std::max(1.0, out.u0.norm());
    for (int k = 0; k < 10; ++k) {
      Vec10 up = out.u0;
      up(k) += eps;
      jac.col(k) = (defect_of(up) - r) / eps;
    }
    const Mat10 jtj = jac.transpose() * jac;
    const Vec10 jtr = jac.transpose() * r;
    bool accepted = false;
    for (int attempt = 0; attempt < 8; ++attempt) {
      const Vec10 step = (jtj + mu * Mat10::Identity()).ldlt().solve(-jtr);
      const Vec10 candidate = out.u0 + step;
      const Eigen::VectorXd rc = defect_of(candidate);
      if (rc.norm() < best) {
        out.u0 = candidate;
        r = rc;
        best = rc.norm();
        mu = std::max(mu / 3.0, 1e-12);
        accepted = true;
        break;
      }
      mu *= 10.0;
    }
    if (!accepted) break;
  }
  out.defect = best;
  out.converged = best < params.tol;
  return out;
}

}  // namespace

DistanceEstimate shoot_distance(const QMat2& target, const MetricGram& metric,
                                const ShootParams& params, const RngHandle& rng) {
  DistanceEstimate est;
  est.length = std::numeric_limits<double>::infinity();

  std::vector<Vec10> seeded;
  if (params.hint) seeded.push_back(*params.hint);
  try {
    seeded.push_back(sp2_coords(qmat_log(target)));
  } catch (const std::exception&) {
    // No logarithm seed; random starts only.
  }
  const double base_norm =
      seeded.empty() ? std::numbers::pi : std::max(seeded.back().norm(), 0.5);

  const int min_restarts = std::min(params.restarts, 8);
  int stagnant = 0;
  int used = 0;
  for (int restart = 0; restart < params.restarts; ++restart) {
    Vec10 start;
    if (restart < static_cast<int>(seeded.size())) {
      start = seeded[restart];
    } else {
      RngHandle local = rng.split(static_cast<std::uint64_t>(restart));
      Vec10 dir;
      for (int k = 0; k < 10; ++k) dir(k) = local.next_gaussian();
      dir.normalize();
      const double len = base_norm * (0.3 + 1.2 * local.next_double());
      start = dir * len;
      if (est.converged && restart % 2 == 0) {
        // Perturb the incumbent to look for nearby shorter solutions.
        start = est.best_u0 + 0.25 * est.best_u0.norm() * dir;
      }
    }
    const GnOutcome gn = gauss_newton(start, target, metric, params);
    ++used;
    bool improved = false;
    if (gn.converged) {
      const double len = metric.norm(gn.u0);
      if (!est.converged || len < est.length - 1e-6) improved = true;
      if (!est.converged || len < est.length) {
        est.length = len;
        est.endpoint_defect = gn.defect;
        est.best_u0 = gn.u0;
        est.converged = true;
      }
    }
    stagnant = improved ? 0 : stagnant + 1;
    // Restart saturation: once past the minimum, stop when the recent half
    // of the budget brought no improvement.
    if (restart + 1 >= min_restarts && stagnant >= std::max(4, (restart + 1) / 2)) break;
  }
  est.restarts_used = used;
  if (!est.converged) {
    est.length = 0;
    est.endpoint_defect = std::numeric_limits<double>::infinity();
  }
  return est;
}

GammaGroup build_gamma(int n) {
  if (n < 1) throw std::invalid_argument("build_gamma: n must be >= 1");
  GammaGroup gamma;
  gamma.n = n;
  const QMat2 v = sp2_v();
  for (int k = -n; k <= n; ++k) {
    const double angle = 2.0 * std::numbers::pi * k / (2 * n + 1);
    gamma.angles.push_back(angle);
    gamma.elements.push_back(k == 0 ? QMat2::identity() : qmat_exp(qmat_scale(v, angle)));
  }
  return gamma;
}

CwExperimentResult cw_displacement_experiment(double s, double t0, int sample_count,
                                              const RngHandle& rng, const ShootParams& params,
                                              const So7Structure& structure, int jobs,
                                              const std::optional<QMat2>& direction) {
  if (!(t0 > -std::numbers::pi && t0 < std::numbers::pi))
    throw std::invalid_argument("cw_displacement_experiment: t0 must lie in (-pi, pi)");
  if (sample_count < 1)
    throw std::invalid_argument("cw_displacement_experiment: sample_count must be >= 1");
  const MetricGram metric = build_metric(s, structure);
  const QMat2 dir = direction.value_or(sp2_v());
  const QMat2 translation = qmat_exp(qmat_scale(dir, t0));
  const double sqrt_lambda = std::sqrt(metric.lambda);

  CwExperimentResult result;
  result.s = s;
  result.t0 = t0;
  result.samples.resize(sample_count);

  parallel_for(sample_count, jobs, [&](int i) {
    RngHandle local = rng.split(0x3D000000ull + static_cast<std::uint64_t>(i));
    const QMat2 g = random_sp2(local);
    const QMat2 ginv = qmat_conj_transpose(g);
    const QMat2 target = qmat_mul(qmat_mul(ginv, translation), g);
    // Conjugated one-parameter seed: the predicted minimizer.
    ShootParams local_params = params;
    local_params.hint = sp2_coords(qmat_scale(qmat_mul(qmat_mul(ginv, dir), g), t0));
    const DistanceEstimate est =
        shoot_distance(target, metric, local_params, local.split(0x51u));
    CwSample& sample = result.samples[i];
    sample.converged = est.converged;
    sample.defect = est.endpoint_defect;
    sample.displacement_gram = est.length;
    sample.displacement_normalized = est.length / sqrt_lambda;
  });

  std::vector<double> displacements;
  displacements.reserve(sample_count);
  result.all_converged = true;
  for (const CwSample& s2 : result.samples) {
    result.all_converged = result.all_converged && s2.converged;
    displacements.push_back(s2.displacement_normalized);
  }
  result.mean = tree_sum(displacements) / std::max<std::size_t>(1, displacements.size());
  const auto [mn, mx] = std::minmax_element(displacements.begin(), displacements.end());
  result.relative_spread = result.mean > 0 ? (*mx - *mn) / result.mean : 0.0;
  const Vec10 v_coords = sp2_coords(sp2_v());
  result.predicted = std::abs(t0) * metric.norm(v_coords) / sqrt_lambda;
  return result;
}

VerificationReport exp_injectivity_probe(const MetricGram& metric, double radius,
                                         int sample_count, const RngHandle& rng, int jobs) {
  if (!(radius < std::numbers::pi))
    throw std::invalid_argument("exp_injectivity_probe: radius must be below pi");
  VerificationReport rep;
  rep.suite = "geodesy.injectivity_probe";
  rep.lemma = "Claim A";
  rep.seed = rng.seed();

  // N velocities give N(N-1)/2 pairs; pick N so the pair count covers the
  // requested sample count.
  int n = 2;
  while (n * (n - 1) / 2 < sample_count) ++n;

  std::vector<Vec10> velocities(n);
  std::vector<QMat2> images(n);
  parallel_for(n, jobs, [&](int i) {
    RngHandle local = rng.split(static_cast<std::uint64_t>(i));
    Vec10 dir;
    for (int k = 0; k < 10; ++k) dir(k) = local.next_gaussian();
    dir.normalize();
    // Volume-uniform radius in the 10-dimensional ball.
    const double r = radius * std::pow(local.next_double(), 0.1);
    velocities[i] = r * dir;
    images[i] = riemannian_exp(velocities[i], metric);
  });

  int collisions = 0;
  long long pairs = 0;
  double min_image_gap = std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      ++pairs;
      const double vel_gap = (velocities[i] - velocities[j]).norm();
      if (vel_gap <= 1e-4) continue;  // the separation filter
      const double image_gap = qmat_frobenius(qmat_sub(images[i], images[j]));
      min_image_gap = std::min(min_image_gap, image_gap);
      if (image_gap < 1e-8) ++collisions;
    }
  }
  rep.check_eq_int("collisions", collisions, 0);
  rep.check_ge("pairs_tested", static_cast<double>(pairs), sample_count);
  rep.info("min_image_gap", min_image_gap);
  return rep;
}

}  // namespace sp2cw
