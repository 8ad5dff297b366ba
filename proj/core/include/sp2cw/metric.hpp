// The deformed metric family on sp(2): <.,.>_s restricts the so(7) form
// bi|_h (+) s * bi|_m through the embedding Phi. Includes the isometric
// right-translation algebra k_s, the centralizer of v, and the orbit-rank
// survey that witnesses non-transitivity of the C x K_s action for s != 1.
#pragma once

#include <Eigen/Cholesky>
#include <optional>

#include "sp2cw/quat.hpp"
#include "sp2cw/rng.hpp"
#include "sp2cw/so7.hpp"

namespace sp2cw {

struct MetricGram {
  double s = 1.0;
  Mat10 gram = Mat10::Identity();
  double lambda = 4.0;  // carried along for unit conversions

  Eigen::LLT<Mat10> factor() const { return Eigen::LLT<Mat10>(gram); }

  double inner(const Vec10& a, const Vec10& b) const { return a.dot(gram * b); }
  double norm(const Vec10& a) const { return std::sqrt(inner(a, a)); }
};

// G_s(u, w) = <pr_h Phi u, pr_h Phi w>_bi + s <pr_m Phi u, pr_m Phi w>_bi.
// Throws on non-positive-definiteness.
MetricGram build_metric(double s, const So7Structure& structure);

// Orthonormal (coordinate) basis of k_s = { u : ad(u) is skew for <.,.>_s },
// computed as the null space of the 10 -> 100 skew-defect map with the
// singular-value gap guard. Optionally reports the gap.
Eigen::MatrixXd isometric_right_algebra(const MetricGram& metric, double* gap_out = nullptr);

// Null space of ad(v) on sp(2), v = diag(i, i). Dimension 4.
Eigen::MatrixXd centralizer_of_v();

// Rank of the C x K_s orbit tangent space at g, translated to the identity:
// span{ Ad(g^{-1}) c } + span{ k_s }.
int orbit_rank_at(const QMat2& g, const Eigen::MatrixXd& c, const Eigen::MatrixXd& ks,
                  double sv_threshold = 1e-8);

struct OrbitReport {
  double s = 1;
  int dim_c = 0;
  int dim_ks = 0;
  int dim_intersection = 0;
  int max_rank_over_samples = 0;
  int sample_count = 0;
  double ks_gap = 0;
};

// Samples group elements both near the identity and deep in the group
// (products of up to 8 exponentials) and aggregates the orbit ranks.
OrbitReport orbit_survey(double s, const So7Structure& structure, int sample_count,
                         const RngHandle& rng, int jobs = 1);

}  // namespace sp2cw
