// Quaternions, 2x2 quaternionic matrices, and the group Sp(2) they model:
// Sp(2) = { g : conj_transpose(g) * g = Id } acting on H^2, with Lie algebra
// sp(2) = { u : conj_transpose(u) + u = 0 }. The canonical embedding into
// C^{4x4} carries all spectral computations (exp, log, eigenangles, polar
// retraction).
#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <utility>

#include "sp2cw/rng.hpp"

namespace sp2cw {

struct Quaternion {
  double w = 0, x = 0, y = 0, z = 0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_, double y_, double z_)
      : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion one() { return {1, 0, 0, 0}; }
  static constexpr Quaternion i() { return {0, 1, 0, 0}; }
  static constexpr Quaternion j() { return {0, 0, 1, 0}; }
  static constexpr Quaternion k() { return {0, 0, 0, 1}; }

  Quaternion conj() const { return {w, -x, -y, -z}; }
  double norm_sq() const { return w * w + x * x + y * y + z * z; }

  Quaternion operator+(const Quaternion& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
  Quaternion operator-(const Quaternion& o) const { return {w - o.w, x - o.x, y - o.y, z - o.z}; }
  Quaternion operator-() const { return {-w, -x, -y, -z}; }
  Quaternion operator*(double c) const { return {c * w, c * x, c * y, c * z}; }
};

// Hamilton product.
inline Quaternion quat_mul(const Quaternion& a, const Quaternion& b) {
  return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
          a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
          a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
          a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

inline Quaternion operator*(const Quaternion& a, const Quaternion& b) { return quat_mul(a, b); }
inline Quaternion operator*(double c, const Quaternion& q) { return q * c; }

// exp(theta * u) for a unit imaginary direction is handled through QMat2;
// this is the scalar quaternion exponential of a pure-imaginary argument.
Quaternion quat_exp_imaginary(const Quaternion& pure);

struct QMat2 {
  // Row-major entries m[r][c].
  std::array<std::array<Quaternion, 2>, 2> m{};

  static QMat2 zero() { return {}; }
  static QMat2 identity();
  static QMat2 diag(const Quaternion& a, const Quaternion& b);
  // Off-diagonal element [[0, q], [-conj(q), 0]] of sp(2).
  static QMat2 off_diag(const Quaternion& q);

  const Quaternion& operator()(int r, int c) const { return m[r][c]; }
  Quaternion& operator()(int r, int c) { return m[r][c]; }
};

QMat2 qmat_mul(const QMat2& a, const QMat2& b);
QMat2 qmat_add(const QMat2& a, const QMat2& b);
QMat2 qmat_sub(const QMat2& a, const QMat2& b);
QMat2 qmat_scale(const QMat2& a, double c);
QMat2 qmat_conj_transpose(const QMat2& a);
inline QMat2 qmat_bracket(const QMat2& a, const QMat2& b) {
  return qmat_sub(qmat_mul(a, b), qmat_mul(b, a));
}

// Entrywise max abs coefficient, the tolerance currency of the membership
// predicates.
double qmat_max_abs(const QMat2& a);
// Frobenius norm (equals the Frobenius norm of the complex embedding up to
// the factor sqrt(2) absorbed by the doubled entries).
double qmat_frobenius(const QMat2& a);

// Real part of (1/2) tr(conj_transpose(a) * b): the bi-invariant half-trace
// inner product on sp(2).
double ht_inner(const QMat2& a, const QMat2& b);

bool is_sp2_group(const QMat2& g, double tol = 1e-10);
bool is_sp2_algebra(const QMat2& u, double tol = 1e-10);

// Canonical embedding H^{2x2} -> C^{4x4}: q = a + b j maps to the block
// [[a, b], [-conj(b), conj(a)]]. Multiplicative; conj_transpose becomes the
// Hermitian adjoint.
Eigen::Matrix4cd embed_c4(const QMat2& m);
// Inverse on the embedded image; averages the block redundancy, which also
// projects small structure-violating noise away.
QMat2 unembed_c4(const Eigen::Matrix4cd& e);

// Group exponential of an algebra element, via the spectral decomposition of
// the skew-Hermitian embedding. Throws std::invalid_argument if u is not in
// sp(2) (tol 1e-6) and std::runtime_error if the result fails membership at
// 1e-10.
QMat2 qmat_exp(const QMat2& u);

// Principal logarithm of a group element: the algebra element with spectrum
// in [-pi, pi] pairs. Eigenvalue -1 is resolved into a +/- pi pair compatible
// with the quaternionic structure. Throws if g is not in Sp(2).
QMat2 qmat_log(const QMat2& g);

// The unique pair (theta1, theta2), pi >= theta1 >= theta2 >= 0, such that g
// is conjugate to diag(exp(theta1 i), exp(theta2 i)). Read from the spectrum
// of the embedding. Throws if the embedding is not unitary within tol.
std::pair<double, double> eigenangles(const QMat2& g, double tol = 1e-8);

// Nearest-group-point retraction (polar factor in the embedded picture).
// Throws std::invalid_argument if m is farther than 0.1 in embedded
// Frobenius distance from the group.
QMat2 retract_to_sp2(const QMat2& m);

// Gaussian element of sp(2) in the fixed orthonormal basis (unit variance
// per coordinate).
QMat2 random_sp2_algebra(RngHandle& rng);
// Product of three exponentials of independent Gaussian algebra elements,
// re-orthonormalized. Rich enough for Monte-Carlo sweeps; not certified Haar.
QMat2 random_sp2(RngHandle& rng);

// Fixed half-trace-orthonormal basis of quaternionic sp(2), in the order
//   sqrt2*diag(i,0), sqrt2*diag(j,0), sqrt2*diag(k,0),
//   sqrt2*diag(0,i), sqrt2*diag(0,j), sqrt2*diag(0,k),
//   offdiag(1), offdiag(i), offdiag(j), offdiag(k).
// All structure-theory coordinates refer to this basis.
const std::array<QMat2, 10>& sp2_basis();

using Vec10 = Eigen::Matrix<double, 10, 1>;
using Mat10 = Eigen::Matrix<double, 10, 10>;

// Coordinates with respect to sp2_basis() (half-trace inner products).
Vec10 sp2_coords(const QMat2& u);
QMat2 sp2_from_coords(const Vec10& c);

// v = diag(i, i), the distinguished direction whose right-invariant field is
// the constant-length Killing field of the deformed metrics.
QMat2 sp2_v();

// Structure-constant matrices: sp2_ad()[i].col(j) = coords([b_i, b_j]).
const std::array<Mat10, 10>& sp2_ad();

// ad(x) as a matrix on coordinates, and the coordinate bracket.
Mat10 sp2_ad_matrix(const Vec10& x);
inline Vec10 sp2_bracket_coords(const Vec10& x, const Vec10& y) { return sp2_ad_matrix(x) * y; }

// Adjoint action coordinates: coords(g * u * g^{-1}).
Vec10 adjoint_coords(const QMat2& g, const QMat2& u);

}  // namespace sp2cw
