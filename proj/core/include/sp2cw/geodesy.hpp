// Left-invariant geodesics on Sp(2): body-velocity (Euler-Arnold) dynamics
// integrated with a 4th-order Munthe-Kaas Runge-Kutta step whose group update
// goes through the exact exponential, the Riemannian exponential, distance by
// multi-start shooting with a closed-form bi-invariant oracle, the cyclic
// subgroup inside exp(R v), and the constant-displacement experiment.
//
// Units: body velocities are coordinates over the half-trace-orthonormal
// basis; lengths measured by the Gram matrix G_s are "Gram units", and
// dividing by sqrt(lambda) converts to half-trace-normalized units (in which
// the bi-invariant oracle reports distances).
#pragma once

#include <optional>
#include <vector>

#include "sp2cw/metric.hpp"
#include "sp2cw/quat.hpp"
#include "sp2cw/report.hpp"
#include "sp2cw/rng.hpp"

namespace sp2cw {

struct GeodesicState {
  QMat2 g = QMat2::identity();
  Vec10 u = Vec10::Zero();
};

// d/dt u from <u', w>_s = <u, [u, w]>_s; orthogonal to u in <.,.>_s.
Vec10 euler_arnold_rhs(const Vec10& u, const MetricGram& metric);

struct IntegrationResult {
  GeodesicState end;
  double energy_drift = 0;        // relative |<u,u>_s| change
  double membership_defect = 0;   // group relation defect at the endpoint
};

// Fixed-step integration over [0, T] with `steps` steps; periodic retraction
// keeps roundoff drift off the group in check. Throws when drift or
// membership exceed the stated bounds (checked = true).
IntegrationResult integrate_geodesic(const GeodesicState& start, double T, int steps,
                                     const MetricGram& metric, bool checked = true);

// Sampled trajectory (steps + 1 states including both ends).
std::vector<GeodesicState> integrate_geodesic_path(const GeodesicState& start, double T,
                                                   int steps, const MetricGram& metric);

// Endpoint of the unit-time geodesic with initial body velocity u0. Steps are
// chosen from |u0| and `steps_per_unit`.
QMat2 riemannian_exp(const Vec10& u0, const MetricGram& metric, double steps_per_unit = 96);

// Bi-invariant distance from the identity in half-trace units:
// sqrt((theta1^2 + theta2^2) / 2) from the eigenangles.
double bi_distance_oracle(const QMat2& g);

struct DistanceEstimate {
  double length = 0;           // Gram units
  double endpoint_defect = 0;  // Frobenius distance of Exp(u0) to the target
  int restarts_used = 0;
  bool converged = false;
  Vec10 best_u0 = Vec10::Zero();
};

struct ShootParams {
  int restarts = 50;
  double tol = 1e-7;            // endpoint defect tolerance
  int max_iterations = 60;
  double steps_per_unit = 96;   // integrator resolution per unit coordinate norm
  std::optional<Vec10> hint;    // extra initial guess (e.g. the conjugated-v seed)
};

// Multi-start damped Gauss-Newton on the endpoint defect; the first starts
// are the hint and the matrix-logarithm guess, the rest random. Returns the
// shortest converged length (an upper bound for the distance).
DistanceEstimate shoot_distance(const QMat2& target, const MetricGram& metric,
                                const ShootParams& params, const RngHandle& rng);

struct GammaGroup {
  int n = 1;
  std::vector<QMat2> elements;      // exp(2 k pi / (2n+1) v), k = -n..n
  std::vector<double> angles;       // the reduced angles 2 k pi / (2n+1)
};

GammaGroup build_gamma(int n);

struct CwSample {
  double displacement_normalized = 0;  // half-trace units
  double displacement_gram = 0;        // Gram units
  double defect = 0;
  bool converged = false;
};

struct CwExperimentResult {
  double s = 1;
  double t0 = 0;
  std::vector<CwSample> samples;
  double mean = 0;               // normalized units
  double relative_spread = 0;
  double predicted = 0;          // t0 * sqrt(<v,v>_s) in normalized units
  bool all_converged = false;
};

// Samples g in Sp(2) and measures d_s(e, g^{-1} exp(t0 v) g) by shooting,
// seeding each shot with the conjugated one-parameter guess. Left invariance
// turns this into the displacement of the left translation by exp(t0 v).
CwExperimentResult cw_displacement_experiment(double s, double t0, int sample_count,
                                              const RngHandle& rng, const ShootParams& params,
                                              const So7Structure& structure, int jobs = 1,
                                              const std::optional<QMat2>& direction = {});

// Samples velocity pairs inside the given half-trace radius and flags pairs
// whose exponentials coincide while the velocities differ: evidence against
// injectivity on the disk. Passing is necessary, not sufficient.
VerificationReport exp_injectivity_probe(const MetricGram& metric, double radius,
                                         int sample_count, const RngHandle& rng, int jobs = 1);

}  // namespace sp2cw
