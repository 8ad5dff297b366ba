#include "sp2cw/quat.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sp2cw {

namespace {

using Eigen::Matrix4cd;
using Eigen::Vector4cd;
using std::complex;

// Quaternionic structure map on C^4: J = diag(J2, J2) with J2 = [[0,1],[-1,0]].
// A complex 4x4 matrix E lies in the embedded image iff J * conj(E) * J^T = E.
Matrix4cd structure_j() {
  Matrix4cd j = Matrix4cd::Zero();
  j(0, 1) = 1;
  j(1, 0) = -1;
  j(2, 3) = 1;
  j(3, 2) = -1;
  return j;
}

}  // namespace

Quaternion quat_exp_imaginary(const Quaternion& pure) {
  const double theta = std::sqrt(pure.x * pure.x + pure.y * pure.y + pure.z * pure.z);
  if (theta < 1e-300) return Quaternion::one() + pure;
  const double c = std::cos(theta), s = std::sin(theta) / theta;
  return {c, s * pure.x, s * pure.y, s * pure.z};
}

QMat2 QMat2::identity() {
  QMat2 r;
  r.m[0][0] = Quaternion::one();
  r.m[1][1] = Quaternion::one();
  return r;
}

QMat2 QMat2::diag(const Quaternion& a, const Quaternion& b) {
  QMat2 r;
  r.m[0][0] = a;
  r.m[1][1] = b;
  return r;
}

QMat2 QMat2::off_diag(const Quaternion& q) {
  QMat2 r;
  r.m[0][1] = q;
  r.m[1][0] = -q.conj();
  return r;
}

QMat2 qmat_mul(const QMat2& a, const QMat2& b) {
  QMat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      r.m[i][j] = quat_mul(a.m[i][0], b.m[0][j]) + quat_mul(a.m[i][1], b.m[1][j]);
  return r;
}

QMat2 qmat_add(const QMat2& a, const QMat2& b) {
  QMat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.m[i][j] = a.m[i][j] + b.m[i][j];
  return r;
}

QMat2 qmat_sub(const QMat2& a, const QMat2& b) {
  QMat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.m[i][j] = a.m[i][j] - b.m[i][j];
  return r;
}

QMat2 qmat_scale(const QMat2& a, double c) {
  QMat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.m[i][j] = a.m[i][j] * c;
  return r;
}

QMat2 qmat_conj_transpose(const QMat2& a) {
  QMat2 r;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) r.m[i][j] = a.m[j][i].conj();
  return r;
}

double qmat_max_abs(const QMat2& a) {
  double s = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Quaternion& q = a.m[i][j];
      s = std::max({s, std::abs(q.w), std::abs(q.x), std::abs(q.y), std::abs(q.z)});
    }
  return s;
}

double qmat_frobenius(const QMat2& a) {
  double s = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) s += a.m[i][j].norm_sq();
  return std::sqrt(s);
}

double ht_inner(const QMat2& a, const QMat2& b) {
  // Re tr(conj_transpose(a) b) / 2 = (1/2) sum_{ij} <a_ij, b_ij>_R4.
  double s = 0;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Quaternion &p = a.m[i][j], &q = b.m[i][j];
      s += p.w * q.w + p.x * q.x + p.y * q.y + p.z * q.z;
    }
  return 0.5 * s;
}

bool is_sp2_group(const QMat2& g, double tol) {
  const QMat2 d = qmat_sub(qmat_mul(qmat_conj_transpose(g), g), QMat2::identity());
  return qmat_max_abs(d) <= tol;
}

bool is_sp2_algebra(const QMat2& u, double tol) {
  const QMat2 d = qmat_add(qmat_conj_transpose(u), u);
  return qmat_max_abs(d) <= tol;
}

Eigen::Matrix4cd embed_c4(const QMat2& m) {
  Matrix4cd e;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const Quaternion& q = m.m[i][j];
      const complex<double> a(q.w, q.x), b(q.y, q.z);
      e(2 * i, 2 * j) = a;
      e(2 * i, 2 * j + 1) = b;
      e(2 * i + 1, 2 * j) = -std::conj(b);
      e(2 * i + 1, 2 * j + 1) = std::conj(a);
    }
  return e;
}

QMat2 unembed_c4(const Eigen::Matrix4cd& e) {
  QMat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      const complex<double> a = 0.5 * (e(2 * i, 2 * j) + std::conj(e(2 * i + 1, 2 * j + 1)));
      const complex<double> b = 0.5 * (e(2 * i, 2 * j + 1) - std::conj(e(2 * i + 1, 2 * j)));
      m.m[i][j] = {a.real(), a.imag(), b.real(), b.imag()};
    }
  return m;
}

QMat2 qmat_exp(const QMat2& u) {
  if (!is_sp2_algebra(u, 1e-6)) {
    throw std::invalid_argument("qmat_exp: argument is not in sp(2)");
  }
  // Symmetrize to an exact skew-Hermitian embedding, then exponentiate
  // spectrally: E = i H with H Hermitian, exp(E) = V exp(i lambda) V^H.
  const Matrix4cd e = embed_c4(u);
  const Matrix4cd skew = 0.5 * (e - e.adjoint());
  const Matrix4cd h = complex<double>(0, -1) * skew;
  Eigen::SelfAdjointEigenSolver<Matrix4cd> es(h);
  Vector4cd phase;
  for (int i = 0; i < 4; ++i) {
    const double lam = es.eigenvalues()(i);
    phase(i) = complex<double>(std::cos(lam), std::sin(lam));
  }
  const Matrix4cd g = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
  const QMat2 out = unembed_c4(g);
  if (!is_sp2_group(out, 1e-10)) {
    throw std::runtime_error("qmat_exp: result failed group membership at 1e-10");
  }
  return out;
}

QMat2 qmat_log(const QMat2& g) {
  const Matrix4cd e = embed_c4(g);
  if ((e.adjoint() * e - Matrix4cd::Identity()).cwiseAbs().maxCoeff() > 1e-8) {
    throw std::invalid_argument("qmat_log: argument is not in Sp(2)");
  }
  // cos(theta) spectrum from the Hermitian part; the spectrum of a unitary
  // embedded matrix is {exp(+-i theta1), exp(+-i theta2)}.
  const Matrix4cd herm = 0.5 * (e + e.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4cd> es(herm);
  const Eigen::Vector4d cosines = es.eigenvalues();

  const Matrix4cd j = structure_j();
  Matrix4cd log_e = Matrix4cd::Zero();

  // Cluster equal cosines; each cluster has even dimension and carries the
  // +-theta eigenvalue pair(s) of e.
  int start = 0;
  while (start < 4) {
    int end = start + 1;
    while (end < 4 && std::abs(cosines(end) - cosines(start)) < 1e-7) ++end;
    const int dim = end - start;
    const double c = std::clamp(cosines.segment(start, dim).mean(), -1.0, 1.0);
    const double theta = std::acos(c);
    if (theta > 1e-9) {
      const Matrix4cd w = es.eigenvectors().middleCols(start, dim);
      if (std::sin(theta) > 1e-7) {
        // Split the cluster by the sign of the skew part: -i(E - E^H)/2
        // restricted to the cluster has eigenvalues +-sin(theta).
        const Matrix4cd skew = 0.5 * (e - e.adjoint());
        const Eigen::MatrixXcd s = complex<double>(0, -1) * (w.adjoint() * skew * w);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ses(s);
        for (int k = 0; k < dim; ++k) {
          if (ses.eigenvalues()(k) > 0) {
            const Vector4cd x = w * ses.eigenvectors().col(k);
            const Vector4cd xj = j * x.conjugate();
            log_e += complex<double>(0, theta) * (x * x.adjoint() - xj * xj.adjoint());
          }
        }
      } else {
        // theta == pi: pair each eigenvector with its structure partner and
        // assign opposite branch signs.
        Eigen::MatrixXcd picked(4, 0);
        for (int k = 0; k < dim && picked.cols() < dim; ++k) {
          Vector4cd x = w.col(k);
          for (int p = 0; p < picked.cols(); ++p) {
            x -= picked.col(p) * (picked.col(p).adjoint() * x)(0);
          }
          if (x.norm() < 1e-6) continue;
          x.normalize();
          const Vector4cd xj = j * x.conjugate();
          log_e += complex<double>(0, theta) * (x * x.adjoint() - xj * xj.adjoint());
          picked.conservativeResize(4, picked.cols() + 2);
          picked.col(picked.cols() - 2) = x;
          picked.col(picked.cols() - 1) = xj;
        }
      }
    }
    start = end;
  }

  const QMat2 out = unembed_c4(log_e);
  if (!is_sp2_algebra(out, 1e-8)) {
    throw std::runtime_error("qmat_log: result failed algebra membership");
  }
  return out;
}

std::pair<double, double> eigenangles(const QMat2& g, double tol) {
  const Matrix4cd e = embed_c4(g);
  if ((e.adjoint() * e - Matrix4cd::Identity()).cwiseAbs().maxCoeff() > tol) {
    throw std::invalid_argument("eigenangles: embedded matrix is not unitary within tol");
  }
  const Matrix4cd herm = 0.5 * (e + e.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix4cd> es(herm);
  // Ascending cosines pair as {cos t1, cos t1, cos t2, cos t2}, t1 >= t2.
  const Eigen::Vector4d c = es.eigenvalues();
  const double t1 = std::acos(std::clamp(0.5 * (c(0) + c(1)), -1.0, 1.0));
  const double t2 = std::acos(std::clamp(0.5 * (c(2) + c(3)), -1.0, 1.0));
  return {t1, t2};
}

QMat2 retract_to_sp2(const QMat2& m) {
  const Matrix4cd e = embed_c4(m);
  Eigen::JacobiSVD<Matrix4cd> svd(e, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix4cd polar = svd.matrixU() * svd.matrixV().adjoint();
  if ((e - polar).norm() > 0.1 + 1e-12) {
    throw std::invalid_argument("retract_to_sp2: input too far from the group");
  }
  // Unembedding averages away residual structure violation; one more polar
  // pass removes the unitarity error that averaging may reintroduce.
  const Matrix4cd e2 = embed_c4(unembed_c4(polar));
  Eigen::JacobiSVD<Matrix4cd> svd2(e2, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return unembed_c4(svd2.matrixU() * svd2.matrixV().adjoint());
}

QMat2 random_sp2_algebra(RngHandle& rng) {
  Vec10 c;
  for (int i = 0; i < 10; ++i) c(i) = rng.next_gaussian();
  return sp2_from_coords(c);
}

QMat2 random_sp2(RngHandle& rng) {
  QMat2 g = QMat2::identity();
  for (int f = 0; f < 3; ++f) {
    g = qmat_mul(g, qmat_exp(random_sp2_algebra(rng)));
  }
  return retract_to_sp2(g);
}

const std::array<QMat2, 10>& sp2_basis() {
  static const std::array<QMat2, 10> basis = [] {
    const double r2 = std::numbers::sqrt2;
    std::array<QMat2, 10> b;
    b[0] = QMat2::diag(Quaternion::i() * r2, {});
    b[1] = QMat2::diag(Quaternion::j() * r2, {});
    b[2] = QMat2::diag(Quaternion::k() * r2, {});
    b[3] = QMat2::diag({}, Quaternion::i() * r2);
    b[4] = QMat2::diag({}, Quaternion::j() * r2);
    b[5] = QMat2::diag({}, Quaternion::k() * r2);
    b[6] = QMat2::off_diag(Quaternion::one());
    b[7] = QMat2::off_diag(Quaternion::i());
    b[8] = QMat2::off_diag(Quaternion::j());
    b[9] = QMat2::off_diag(Quaternion::k());
    return b;
  }();
  return basis;
}

Vec10 sp2_coords(const QMat2& u) {
  Vec10 c;
  const auto& basis = sp2_basis();
  for (int i = 0; i < 10; ++i) c(i) = ht_inner(basis[i], u);
  return c;
}

QMat2 sp2_from_coords(const Vec10& c) {
  QMat2 u;
  const auto& basis = sp2_basis();
  for (int i = 0; i < 10; ++i) u = qmat_add(u, qmat_scale(basis[i], c(i)));
  return u;
}

QMat2 sp2_v() { return QMat2::diag(Quaternion::i(), Quaternion::i()); }

const std::array<Mat10, 10>& sp2_ad() {
  static const std::array<Mat10, 10> tables = [] {
    std::array<Mat10, 10> t;
    const auto& basis = sp2_basis();
    for (int i = 0; i < 10; ++i)
      for (int j = 0; j < 10; ++j)
        t[i].col(j) = sp2_coords(qmat_bracket(basis[i], basis[j]));
    return t;
  }();
  return tables;
}

Mat10 sp2_ad_matrix(const Vec10& x) {
  Mat10 r = Mat10::Zero();
  const auto& tables = sp2_ad();
  for (int i = 0; i < 10; ++i)
    if (x(i) != 0.0) r += x(i) * tables[i];
  return r;
}

Vec10 adjoint_coords(const QMat2& g, const QMat2& u) {
  return sp2_coords(qmat_mul(qmat_mul(g, u), qmat_conj_transpose(g)));
}

}  // namespace sp2cw
