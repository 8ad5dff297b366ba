// so(7) with a Cartan subalgebra adapted to a G2 subalgebra, the canonical
// root labels e1, e2, e3, the orthogonal decomposition g = h + m, the
// sp(2) subalgebra spanned by the e1/e2 root data, and the isomorphism Phi
// between quaternionic sp(2) and its so(7)-embedded copy.
//
// Conventions: the bi-invariant form is -tr(XY)/2 on 7x7 antisymmetric
// matrices, under which the basis L_ab = E_ab - E_ba (a < b) is orthonormal
// and short roots come out with unit length. All coordinates are relative to
// that basis, so the bi-invariant form is the coordinate dot product.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "sp2cw/quat.hpp"
#include "sp2cw/report.hpp"

namespace sp2cw {

using Vec21 = Eigen::Matrix<double, 21, 1>;
using Mat21 = Eigen::Matrix<double, 21, 21>;
using Mat7 = Eigen::Matrix<double, 7, 7>;

// One positive root with its plane: [x, u] = <x, root_vec> v and
// [x, v] = -<x, root_vec> u for all x in the Cartan subalgebra.
struct RootDatum {
  Eigen::Vector3d coeffs;   // coefficients over the labels e1, e2, e3
  Vec21 root_vec;           // the root as a vector in t (so(7) coordinates)
  Eigen::MatrixXd plane;    // 21 x 2, orthonormal (u, v)
};

// Linear isomorphism from quaternionic sp(2) onto the so(7)-embedded copy.
// `matrix` maps sp2_basis() coordinates to coefficients over the columns of
// So7Structure::sp2_in_so7; satisfies matrix^T matrix = lambda * Id, where
// lambda is the pullback scalar between the bi-invariant form and the
// half-trace form.
struct IsoPhi {
  Mat10 matrix = Mat10::Zero();
  double lambda = 0;
};

class So7Structure {
 public:
  // Runs the full construction: basis, G2 stabilizer, adapted Cartan, root
  // decomposition, labeling, sp(2) subalgebra, Phi. Throws on any structural
  // failure (wrong dimension, degenerate spectrum, homomorphism defect).
  static So7Structure build();

  // --- algebra operations (coordinates over the fixed so(7) basis) ---
  Vec21 bracket(const Vec21& x, const Vec21& y) const;
  Mat21 ad_matrix(const Vec21& x) const;
  Vec21 project_h(const Vec21& u) const;
  Vec21 project_m(const Vec21& u) const { return u - project_h(u); }

  // Phi and its inverse (the inverse is only defined on the sp(2) copy).
  Vec21 phi_map(const Vec10& quat_coords) const;
  Vec10 phi_inverse(const Vec21& so7_coords) const;

  // Matrix form of a coordinate vector (for exponentials / group work).
  Mat7 to_matrix(const Vec21& x) const;
  Vec21 from_matrix(const Mat7& x) const;

  // --- verification entry points (structure suite) ---
  // tol_scale multiplies every defect threshold (dimension checks stay exact).
  VerificationReport verify_so7(double tol_scale = 1.0) const;
  VerificationReport verify_g2(double tol_scale = 1.0) const;
  VerificationReport verify_cartan(double tol_scale = 1.0) const;
  VerificationReport verify_roots(double tol_scale = 1.0) const;
  VerificationReport verify_lemma1(double tol_scale = 1.0) const;
  VerificationReport verify_sp2_subalgebra(double tol_scale = 1.0) const;
  VerificationReport verify_phi(double tol_scale = 1.0) const;

  // --- serialization (structure file) ---
  nlohmann::ordered_json to_json() const;
  static So7Structure from_json(const nlohmann::ordered_json& j);

  // --- data ---
  std::array<Mat7, 21> basis;          // L_ab, bi-orthonormal
  Eigen::MatrixXd h_basis;             // 21 x 14, the G2 stabilizer algebra
  Eigen::MatrixXd m_basis;             // 21 x 7
  Eigen::MatrixXd cartan;              // 21 x 3 orthonormal, t
  Eigen::MatrixXd cartan_h;            // 21 x 2 orthonormal, t cap h
  Vec21 m_axis;                        // unit vector spanning t cap m
  std::array<Vec21, 3> labels;         // e1, e2, e3
  std::vector<RootDatum> roots;        // 9 positive roots of so(7)
  std::vector<RootDatum> h_roots;      // 6 positive roots of the G2 copy
  Eigen::MatrixXd sp2_in_so7;          // 21 x 10 orthonormal
  Eigen::MatrixXd sp2h_quat;           // 10 x 3, Phi^{-1}(sp(2) cap h)
  IsoPhi phi;

  // Root lookup by coefficient triple; throws if absent.
  const RootDatum& root(double c1, double c2, double c3) const;

 private:
  So7Structure() = default;
  void build_tables();
  void build_phi_();

  std::array<Mat21, 21> ad_;           // structure tensor per basis element
  double root_relation_defect(const RootDatum& r, int samples) const;
};

}  // namespace sp2cw
