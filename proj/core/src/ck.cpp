#include "sp2cw/ck.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>

#include "sp2cw/util.hpp"

namespace sp2cw {

namespace {

// Orthogonal exponential of an antisymmetric 7x7 matrix through the
// Hermitian spectral decomposition of -iA; exact up to roundoff.
Mat7 so7_exp(const Mat7& a) {
  using cd = std::complex<double>;
  Eigen::Matrix<cd, 7, 7> h = cd(0, -1) * a.cast<cd>();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<cd, 7, 7>> es(h);
  Eigen::Matrix<cd, 7, 1> phase;
  for (int i = 0; i < 7; ++i) {
    const double lam = es.eigenvalues()(i);
    phase(i) = cd(std::cos(lam), std::sin(lam));
  }
  const Eigen::Matrix<cd, 7, 7> g =
      es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
  return g.real();
}

Mat7 random_rotation(const So7Structure& structure, RngHandle& rng) {
  Mat7 g = Mat7::Identity();
  for (int f = 0; f < 2; ++f) {
    Vec21 coords;
    for (int i = 0; i < 21; ++i) coords(i) = rng.next_gaussian();
    g = g * so7_exp(structure.to_matrix(coords));
  }
  return g;
}

}  // namespace

CkStatistic make_statistic(const std::vector<double>& values, std::uint64_t seed) {
  if (values.empty()) throw std::invalid_argument("make_statistic: no samples");
  CkStatistic s;
  s.sample_count = static_cast<int>(values.size());
  s.seed = seed;
  s.mean = tree_sum(values) / static_cast<double>(values.size());
  s.min = *std::min_element(values.begin(), values.end());
  s.max = *std::max_element(values.begin(), values.end());
  const double width = s.max - s.min;
  if (width == 0.0) {
    s.relative_spread = 0.0;
  } else if (s.mean > 0.0) {
    s.relative_spread = width / s.mean;
  } else {
    s.relative_spread = std::numeric_limits<double>::infinity();
  }
  return s;
}

CkStatistic ck_statistic_sp2(const MetricGram& metric, const QMat2& v, int samples,
                             const RngHandle& rng, int jobs) {
  if (!is_sp2_algebra(v, 1e-8)) throw std::invalid_argument("ck_statistic_sp2: v not in sp(2)");
  std::vector<double> values(samples);
  parallel_for(samples, jobs, [&](int i) {
    RngHandle local = rng.split(static_cast<std::uint64_t>(i));
    const QMat2 g = random_sp2(local);
    const Vec10 w = adjoint_coords(g, v);
    values[i] = metric.inner(w, w);
  });
  return make_statistic(values, rng.seed());
}

CkStatistic ck_statistic_s7(const So7Structure& structure, const Vec21& v, int samples,
                            const RngHandle& rng, int jobs) {
  const Mat7 vm = structure.to_matrix(v);
  std::vector<double> values(samples);
  parallel_for(samples, jobs, [&](int i) {
    RngHandle local = rng.split(static_cast<std::uint64_t>(i));
    const Mat7 g = random_rotation(structure, local);
    const Vec21 w = structure.from_matrix(g * vm * g.transpose());
    values[i] = structure.project_m(w).squaredNorm();
  });
  return make_statistic(values, rng.seed());
}

CkStatistic ck_statistic_so7_deformed(const So7Structure& structure, const Vec21& v, double s,
                                      int samples, const RngHandle& rng, int jobs) {
  if (!(s > 0)) throw std::invalid_argument("ck_statistic_so7_deformed: s must be positive");
  const Mat7 vm = structure.to_matrix(v);
  std::vector<double> values(samples);
  parallel_for(samples, jobs, [&](int i) {
    RngHandle local = rng.split(static_cast<std::uint64_t>(i));
    const Mat7 g = random_rotation(structure, local);
    const Vec21 w = structure.from_matrix(g * vm * g.transpose());
    const Vec21 wh = structure.project_h(w);
    values[i] = wh.squaredNorm() + s * (w - wh).squaredNorm();
  });
  return make_statistic(values, rng.seed());
}

double restriction_consistency_defect(const So7Structure& structure, double s, int samples,
                                      const RngHandle& rng) {
  const MetricGram metric = build_metric(s, structure);
  const QMat2 v = sp2_v();
  const Vec21 v_so7 = structure.phi_map(sp2_coords(v));
  const Mat7 vm = structure.to_matrix(v_so7);
  double defect = 0;
  for (int i = 0; i < samples; ++i) {
    RngHandle local = rng.split(static_cast<std::uint64_t>(i));
    // Same algebra draws drive both group samples, so the two sides stay
    // paired through Phi.
    QMat2 gq = QMat2::identity();
    Mat7 gs = Mat7::Identity();
    for (int f = 0; f < 2; ++f) {
      Vec10 coords;
      for (int k = 0; k < 10; ++k) coords(k) = local.next_gaussian();
      gq = qmat_mul(gq, qmat_exp(sp2_from_coords(coords)));
      gs = gs * so7_exp(structure.to_matrix(structure.phi_map(coords)));
    }
    const Vec10 wq = adjoint_coords(gq, v);
    const double value_quat = metric.inner(wq, wq);

    const Vec21 w = structure.from_matrix(gs * vm * gs.transpose());
    const Vec21 wh = structure.project_h(w);
    const double value_so7 = wh.squaredNorm() + s * (w - wh).squaredNorm();
    defect = std::max(defect, std::abs(value_so7 - value_quat));
  }
  return defect;
}

VerificationReport observation1_check(const QMat2& u, const std::vector<double>& t_list,
                                      double tol) {
  if (t_list.empty()) throw std::invalid_argument("observation1_check: empty t list");
  VerificationReport rep;
  rep.suite = "ck.observation1";
  rep.lemma = "Observation 1";

  const QMat2 v = sp2_v();
  const double defect_a = qmat_max_abs(qmat_bracket(u, v));
  const bool a = defect_a <= tol;

  auto commutes_with_exp = [&](double t) {
    const QMat2 e = qmat_exp(qmat_scale(v, t));
    return qmat_max_abs(qmat_bracket(u, e));
  };
  const double defect_b = commutes_with_exp(t_list.front());
  const bool b = defect_b <= tol;

  double defect_c = 0;
  for (double t : t_list) defect_c = std::max(defect_c, commutes_with_exp(t));
  const bool c = defect_c <= tol;

  rep.info("commutator_defect_vs_v", defect_a);
  rep.info("commutator_defect_one_t", defect_b);
  rep.info("commutator_defect_all_t", defect_c);
  rep.check_true("equivalence_a_iff_b", a == b);
  rep.check_true("equivalence_b_iff_c", b == c);
  return rep;
}

}  // namespace sp2cw
