// Monte-Carlo tests of the constant-length Killing field criteria: a vector
// v generates a right invariant CK-field on the metric Lie group iff
// <Ad(g)v, Ad(g)v> is constant over the group; on the homogeneous sphere the
// criterion uses the m-projection. The statistic records the spread of the
// sampled values; thresholds separate "constant" from "rejected" with an
// explicit inconclusive band.
#pragma once

#include <vector>

#include "sp2cw/metric.hpp"
#include "sp2cw/quat.hpp"
#include "sp2cw/report.hpp"
#include "sp2cw/rng.hpp"
#include "sp2cw/so7.hpp"

namespace sp2cw {

struct CkStatistic {
  double mean = 0;
  double min = 0;
  double max = 0;
  double relative_spread = 0;  // (max - min) / mean
  int sample_count = 0;
  std::uint64_t seed = 0;
};

CkStatistic make_statistic(const std::vector<double>& values, std::uint64_t seed);

// g -> <Ad(g)v, Ad(g)v>_s over random group samples.
CkStatistic ck_statistic_sp2(const MetricGram& metric, const QMat2& v, int samples,
                             const RngHandle& rng, int jobs = 1);

// g -> |pr_m(Ad(g)v)|^2_bi over random rotations (the adjoint action factors
// through conjugation on so(7)).
CkStatistic ck_statistic_s7(const So7Structure& structure, const Vec21& v, int samples,
                            const RngHandle& rng, int jobs = 1);

// g -> |pr_h Ad(g)v|^2 + s |pr_m Ad(g)v|^2 over random rotations.
CkStatistic ck_statistic_so7_deformed(const So7Structure& structure, const Vec21& v, double s,
                                      int samples, const RngHandle& rng, int jobs = 1);

// Pairs group samples built from the same algebra draws on both sides of Phi
// and returns the largest mismatch between the restricted deformed statistic
// and the sp(2) statistic (scaled by lambda).
double restriction_consistency_defect(const So7Structure& structure, double s, int samples,
                                      const RngHandle& rng);

// Equivalence of: [u, v] = 0; u commutes with exp(t v) for one t; and for all
// listed t. u may be a group or an algebra element.
VerificationReport observation1_check(const QMat2& u, const std::vector<double>& t_list,
                                      double tol = 1e-10);

}  // namespace sp2cw
