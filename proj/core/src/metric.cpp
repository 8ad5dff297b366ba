#include "sp2cw/metric.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <limits>
#include <stdexcept>
#include <vector>

#include "sp2cw/subspace.hpp"
#include "sp2cw/util.hpp"

namespace sp2cw {

MetricGram build_metric(double s, const So7Structure& structure) {
  if (!(s > 0)) throw std::invalid_argument("build_metric: s must be positive");
  MetricGram m;
  m.s = s;
  m.lambda = structure.phi.lambda;
  const Eigen::MatrixXd img = structure.sp2_in_so7 * structure.phi.matrix;  // 21 x 10
  Mat10 g;
  for (int i = 0; i < 10; ++i) {
    const Vec21 hi = structure.project_h(img.col(i));
    const Vec21 mi = img.col(i) - hi;
    for (int j = i; j < 10; ++j) {
      const Vec21 hj = structure.project_h(img.col(j));
      const Vec21 mj = img.col(j) - hj;
      g(i, j) = hi.dot(hj) + s * mi.dot(mj);
      g(j, i) = g(i, j);
    }
  }
  Eigen::SelfAdjointEigenSolver<Mat10> es(g);
  if (es.eigenvalues()(0) <= 0) {
    throw std::runtime_error("build_metric: Gram matrix is not positive definite");
  }
  m.gram = g;
  return m;
}

Eigen::MatrixXd isometric_right_algebra(const MetricGram& metric, double* gap_out) {
  // ad(u) is skew for <.,.>_s iff G ad(u) + ad(u)^T G = 0; the map
  // u -> vec(G A(u) + A(u)^T G) is linear with A(u) = sum u_k ad_k.
  const auto& ad = sp2_ad();
  Eigen::MatrixXd defect_map(100, 10);
  for (int k = 0; k < 10; ++k) {
    const Mat10 d = metric.gram * ad[k] + ad[k].transpose() * metric.gram;
    defect_map.col(k) = Eigen::Map<const Eigen::VectorXd>(d.data(), 100);
  }
  // Operator scale keeps the s = 1 case (defect map ~ 0) unambiguous.
  const double floor = 1e-12 * metric.gram.norm();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(defect_map, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv(0) <= floor) {
    if (gap_out) *gap_out = std::numeric_limits<double>::infinity();
    return Eigen::MatrixXd::Identity(10, 10);
  }
  int rank = 0;
  while (rank < sv.size() && sv(rank) > 1e-8 * sv(0)) ++rank;
  double gap = std::numeric_limits<double>::infinity();
  if (rank > 0 && rank < 10) {
    gap = sv(rank) > 0 ? sv(rank - 1) / sv(rank) : gap;
  }
  if (gap < 1e4) {
    throw AmbiguousRankError("isometric_right_algebra: ambiguous dimension (gap " +
                             std::to_string(gap) + ")");
  }
  if (gap_out) *gap_out = gap;
  return svd.matrixV().rightCols(10 - rank);
}

Eigen::MatrixXd centralizer_of_v() {
  const Mat10 a = sp2_ad_matrix(sp2_coords(sp2_v()));
  return null_space(a, 1e-8, 1e4).basis;
}

int orbit_rank_at(const QMat2& g, const Eigen::MatrixXd& c, const Eigen::MatrixXd& ks,
                  double sv_threshold) {
  const QMat2 ginv = qmat_conj_transpose(g);
  Eigen::MatrixXd span(10, c.cols() + ks.cols());
  for (int i = 0; i < c.cols(); ++i) {
    span.col(i) = adjoint_coords(ginv, sp2_from_coords(c.col(i)));
  }
  span.rightCols(ks.cols()) = ks;
  return rank_of(span, sv_threshold);
}

OrbitReport orbit_survey(double s, const So7Structure& structure, int sample_count,
                         const RngHandle& rng, int jobs) {
  if (sample_count < 1) throw std::invalid_argument("orbit_survey: sample_count must be >= 1");
  const MetricGram metric = build_metric(s, structure);
  OrbitReport rep;
  rep.s = s;
  rep.sample_count = sample_count;
  const Eigen::MatrixXd c = centralizer_of_v();
  const Eigen::MatrixXd ks = isometric_right_algebra(metric, &rep.ks_gap);
  rep.dim_c = static_cast<int>(c.cols());
  rep.dim_ks = static_cast<int>(ks.cols());
  rep.dim_intersection = intersection_dim(c, ks);

  std::vector<int> ranks(sample_count, 0);
  parallel_for(sample_count, jobs, [&](int i) {
    RngHandle local = rng.split(static_cast<std::uint64_t>(i));
    // Mix shallow (near identity) and deep samples.
    const int depth = 1 + (i % 8);
    const double scale = (i % 3 == 0) ? 0.1 : 1.0;
    QMat2 g = QMat2::identity();
    for (int d = 0; d < depth; ++d) {
      Vec10 coords;
      for (int k = 0; k < 10; ++k) coords(k) = scale * local.next_gaussian();
      g = qmat_mul(g, qmat_exp(sp2_from_coords(coords)));
    }
    g = retract_to_sp2(g);
    ranks[i] = orbit_rank_at(g, c, ks);
  });
  rep.max_rank_over_samples = *std::max_element(ranks.begin(), ranks.end());
  return rep;
}

}  // namespace sp2cw
