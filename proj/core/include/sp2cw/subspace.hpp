// Dimension-revealing linear algebra used throughout the structure theory.
// Null-space and intersection dimensions are scientific claims here, so they
// are decided by an explicit singular-value gap and refuse to guess when the
// gap is ambiguous.
#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace sp2cw {

struct AmbiguousRankError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NullSpace {
  Eigen::MatrixXd basis;  // orthonormal columns
  // Ratio sigma_r / sigma_{r+1} across the rank cut (inf when the matrix
  // vanishes or has full rank).
  double gap = 0;
};

// Null space of A with the rank cut placed at rel_threshold * sigma_max.
// Throws AmbiguousRankError when the relative gap across the cut is below
// min_gap.
NullSpace null_space(const Eigen::MatrixXd& a, double rel_threshold = 1e-8,
                     double min_gap = 1e4);

// Rank with the same relative threshold convention.
int rank_of(const Eigen::MatrixXd& a, double rel_threshold = 1e-8);

// Orthonormalize the column span (drops dependent columns).
Eigen::MatrixXd orthonormalize(const Eigen::MatrixXd& a, double rel_threshold = 1e-10);

// Orthonormal basis of span(v) `intersect` span(w); columns of v and w must be
// orthonormal.
Eigen::MatrixXd subspace_intersection(const Eigen::MatrixXd& v, const Eigen::MatrixXd& w,
                                      double rel_threshold = 1e-8);

int intersection_dim(const Eigen::MatrixXd& v, const Eigen::MatrixXd& w,
                     double rel_threshold = 1e-8);

// Operator-norm distance between orthogonal projectors onto the two spans.
double subspace_distance(const Eigen::MatrixXd& v, const Eigen::MatrixXd& w);

// Orthonormal basis of the orthogonal complement of span(v) in R^n.
Eigen::MatrixXd orthogonal_complement(const Eigen::MatrixXd& v);

}  // namespace sp2cw
