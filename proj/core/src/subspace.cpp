#include "sp2cw/subspace.hpp"

#include <Eigen/SVD>
#include <limits>

namespace sp2cw {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

NullSpace null_space(const Eigen::MatrixXd& a, double rel_threshold, double min_gap) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const int n = static_cast<int>(a.cols());
  const double smax = sv.size() > 0 ? sv(0) : 0.0;

  NullSpace out;
  if (smax == 0.0) {
    out.basis = Eigen::MatrixXd::Identity(n, n);
    out.gap = kInf;
    return out;
  }
  int rank = 0;
  while (rank < sv.size() && sv(rank) > rel_threshold * smax) ++rank;
  const int null_dim = n - rank;
  if (null_dim > 0 && rank > 0) {
    const double below = sv(rank);
    out.gap = below > 0 ? sv(rank - 1) / below : kInf;
    if (out.gap < min_gap) {
      throw AmbiguousRankError("null_space: ambiguous dimension, singular-value gap " +
                               std::to_string(out.gap) + " below required " +
                               std::to_string(min_gap));
    }
  } else {
    out.gap = kInf;
  }
  out.basis = svd.matrixV().rightCols(null_dim);
  return out;
}

int rank_of(const Eigen::MatrixXd& a, double rel_threshold) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a);
  const Eigen::VectorXd sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int rank = 0;
  while (rank < sv.size() && sv(rank) > rel_threshold * sv(0)) ++rank;
  return rank;
}

Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& a, double rel_threshold) {
  if (a.cols() == 0) return a;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU);
  const Eigen::VectorXd sv = svd.singularValues();
  int rank = 0;
  while (rank < sv.size() && sv(rank) > rel_threshold * sv(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

Eigen::MatrixXd subspace_intersection(const Eigen::MatrixXd& v, const Eigen::MatrixXd& w,
                                      double rel_threshold) {
  // x = v a = w b lies in the intersection iff (a; -b) is in the null space
  // of [v w].
  Eigen::MatrixXd stacked(v.rows(), v.cols() + w.cols());
  stacked << v, w;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(stacked, Eigen::ComputeFullV);
  const Eigen::VectorXd sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  int rank = 0;
  while (rank < sv.size() && sv(rank) > rel_threshold * std::max(smax, 1.0)) ++rank;
  const int null_dim = static_cast<int>(stacked.cols()) - rank;
  if (null_dim == 0) return Eigen::MatrixXd(v.rows(), 0);
  const Eigen::MatrixXd coeff = svd.matrixV().rightCols(null_dim).topRows(v.cols());
  return orthonormalize(v * coeff);
}

int intersection_dim(const Eigen::MatrixXd& v, const Eigen::MatrixXd& w, double rel_threshold) {
  return static_cast<int>(subspace_intersection(v, w, rel_threshold).cols());
}

double subspace_distance(const Eigen::MatrixXd& v, const Eigen::MatrixXd& w) {
  const Eigen::MatrixXd pv = v * v.transpose();
  const Eigen::MatrixXd pw = w * w.transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(pv - pw);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& v) {
  return null_space(v.transpose(), 1e-10, 1.0).basis;
}

}  // namespace sp2cw
