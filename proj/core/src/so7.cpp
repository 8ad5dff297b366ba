#include "sp2cw/so7.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

#include "sp2cw/rng.hpp"
#include "sp2cw/subspace.hpp"

namespace sp2cw {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

// Generic 3-form on R^7 with stabilizer algebra of type G2 (Fano-plane
// signs). Triples are 0-indexed.
struct FormTerm {
  int a, b, c;
  double sign;
};
constexpr FormTerm kThreeForm[] = {
    {0, 1, 2, +1}, {0, 3, 4, +1}, {0, 5, 6, +1}, {1, 3, 5, +1},
    {1, 4, 6, -1}, {2, 3, 6, -1}, {2, 4, 5, -1},
};

double three_form(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  int p[3] = {i, j, k};
  double sign = 1;
  // Sort the triple, tracking the permutation sign.
  for (int s = 0; s < 2; ++s)
    for (int t = 0; t < 2 - s; ++t)
      if (p[t] > p[t + 1]) {
        std::swap(p[t], p[t + 1]);
        sign = -sign;
      }
  for (const FormTerm& term : kThreeForm)
    if (term.a == p[0] && term.b == p[1] && term.c == p[2]) return sign * term.sign;
  return 0;
}

// Splits an orthonormal block of columns into eigenvalue clusters of the
// restriction of the symmetric operator s.
std::vector<MatrixXd> refine_blocks(const std::vector<MatrixXd>& blocks, const Mat21& s,
                                    double cluster_tol) {
  std::vector<MatrixXd> out;
  for (const MatrixXd& b : blocks) {
    const MatrixXd r = b.transpose() * s * b;
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(0.5 * (r + r.transpose()));
    const VectorXd ev = es.eigenvalues();
    int start = 0;
    while (start < ev.size()) {
      int end = start + 1;
      while (end < ev.size() && std::abs(ev(end) - ev(start)) < cluster_tol) ++end;
      out.push_back(b * es.eigenvectors().middleCols(start, end - start));
      start = end;
    }
  }
  return out;
}

Eigen::Matrix3d generic_rotation(std::uint64_t seed) {
  RngHandle rng(seed);
  Eigen::Matrix3d g;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g(i, j) = rng.next_gaussian();
  const Eigen::HouseholderQR<Eigen::Matrix3d> qr(g);
  Eigen::Matrix3d q = qr.householderQ();
  if (q.determinant() < 0) q.col(0) *= -1;
  return q;
}

Eigen::Matrix2d generic_rotation2(std::uint64_t seed) {
  RngHandle rng(seed);
  const double a = rng.next_gaussian();
  Eigen::Matrix2d q;
  q << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
  return q;
}

nlohmann::ordered_json matrix_to_json(const MatrixXd& m) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::ordered_json row = nlohmann::ordered_json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

MatrixXd matrix_from_json(const nlohmann::ordered_json& j) {
  const auto rows = j.size();
  const auto cols = rows > 0 ? j.at(0).size() : 0;
  MatrixXd m(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t c = 0; c < cols; ++c) m(i, c) = j.at(i).at(c).get<double>();
  return m;
}

}  // namespace

void So7Structure::build_tables() {
  // Basis L_ab = E_ab - E_ba for a < b; orthonormal under -tr(XY)/2.
  int idx = 0;
  for (int a = 0; a < 7; ++a)
    for (int b = a + 1; b < 7; ++b) {
      Mat7 l = Mat7::Zero();
      l(a, b) = 1;
      l(b, a) = -1;
      basis[idx++] = l;
    }
  for (int i = 0; i < 21; ++i) {
    const Mat7& bi = basis[i];
    for (int j = 0; j < 21; ++j) {
      const Mat7 br = bi * basis[j] - basis[j] * bi;
      ad_[i].col(j) = from_matrix(br);
    }
  }
}

Mat7 So7Structure::to_matrix(const Vec21& x) const {
  Mat7 m = Mat7::Zero();
  for (int i = 0; i < 21; ++i) m += x(i) * basis[i];
  return m;
}

Vec21 So7Structure::from_matrix(const Mat7& x) const {
  // Coordinates under the orthonormal basis: <L_ab, X>_bi = X(a, b) for the
  // antisymmetric part.
  Vec21 c;
  int idx = 0;
  for (int a = 0; a < 7; ++a)
    for (int b = a + 1; b < 7; ++b) c(idx++) = 0.5 * (x(a, b) - x(b, a));
  return c;
}

Vec21 So7Structure::bracket(const Vec21& x, const Vec21& y) const {
  Vec21 r = Vec21::Zero();
  for (int i = 0; i < 21; ++i)
    if (x(i) != 0.0) r += x(i) * (ad_[i] * y);
  return r;
}

Mat21 So7Structure::ad_matrix(const Vec21& x) const {
  Mat21 r = Mat21::Zero();
  for (int i = 0; i < 21; ++i)
    if (x(i) != 0.0) r += x(i) * ad_[i];
  return r;
}

Vec21 So7Structure::project_h(const Vec21& u) const { return h_basis * (h_basis.transpose() * u); }

Vec21 So7Structure::phi_map(const Vec10& quat_coords) const {
  return sp2_in_so7 * (phi.matrix * quat_coords);
}

Vec10 So7Structure::phi_inverse(const Vec21& so7_coords) const {
  return (phi.matrix.transpose() * (sp2_in_so7.transpose() * so7_coords)) / phi.lambda;
}

const RootDatum& So7Structure::root(double c1, double c2, double c3) const {
  for (const RootDatum& r : roots) {
    if (std::abs(r.coeffs(0) - c1) < 1e-6 && std::abs(r.coeffs(1) - c2) < 1e-6 &&
        std::abs(r.coeffs(2) - c3) < 1e-6)
      return r;
  }
  throw std::logic_error("So7Structure::root: no such root");
}

So7Structure So7Structure::build() {
  So7Structure s;
  s.build_tables();

  // --- G2 as the annihilator of the 3-form ---------------------------------
  // Rows: one equation per ordered triple a < b < c; columns: basis elements.
  MatrixXd system(35, 21);
  int row = 0;
  for (int a = 0; a < 7; ++a)
    for (int b = a + 1; b < 7; ++b)
      for (int c = b + 1; c < 7; ++c) {
        for (int col = 0; col < 21; ++col) {
          const Mat7& l = s.basis[col];
          double val = 0;
          for (int p = 0; p < 7; ++p) {
            val += l(p, a) * three_form(p, b, c);
            val += l(p, b) * three_form(a, p, c);
            val += l(p, c) * three_form(a, b, p);
          }
          system(row, col) = val;
        }
        ++row;
      }
  const NullSpace g2 = null_space(system, 1e-8, 1e4);
  if (g2.basis.cols() != 14) {
    throw std::runtime_error("build_g2: stabilizer dimension " +
                             std::to_string(g2.basis.cols()) + ", expected 14");
  }
  s.h_basis = g2.basis;
  s.m_basis = orthogonal_complement(s.h_basis);
  if (s.m_basis.cols() != 7) throw std::runtime_error("build_g2: complement dimension wrong");

  // --- Cartan subalgebra adapted to h --------------------------------------
  // Maximal torus of h: centralizer of a fixed generic element of h.
  RngHandle rng(0x50373C47u);
  VectorXd coeff(14);
  for (int i = 0; i < 14; ++i) coeff(i) = rng.next_gaussian();
  const Vec21 xh = s.h_basis * coeff;
  const MatrixXd cent_h = s.ad_matrix(xh) * s.h_basis;  // h -> g
  const NullSpace th = null_space(cent_h, 1e-8, 1e4);
  if (th.basis.cols() != 2) {
    throw std::runtime_error(
        "adapt_cartan: generic centralizer in h has dimension " +
        std::to_string(th.basis.cols()) + ", expected 2 (non-generic probe element)");
  }
  const MatrixXd torus_h = orthonormalize(s.h_basis * th.basis);

  // Extend to a Cartan subalgebra of g: centralizer of the torus in g.
  MatrixXd stacked(42, 21);
  stacked.topRows(21) = s.ad_matrix(torus_h.col(0));
  stacked.bottomRows(21) = s.ad_matrix(torus_h.col(1));
  const NullSpace t_full = null_space(stacked, 1e-8, 1e4);
  if (t_full.basis.cols() != 3) {
    throw std::runtime_error("adapt_cartan: cannot extend the torus of h to a rank-3 "
                             "abelian subalgebra");
  }
  // A generically rotated orthonormal frame keeps per-operator spectra
  // simple during the root extraction below.
  s.cartan = orthonormalize(t_full.basis) * generic_rotation(0xADA9u);

  s.cartan_h = subspace_intersection(s.cartan, s.h_basis);
  if (s.cartan_h.cols() != 2) throw std::runtime_error("adapt_cartan: dim(t cap h) != 2");
  s.cartan_h *= generic_rotation2(0xADAAu);
  const MatrixXd tm = subspace_intersection(s.cartan, s.m_basis);
  if (tm.cols() != 1) throw std::runtime_error("adapt_cartan: dim(t cap m) != 1");
  Vec21 m_axis = tm.col(0);
  // Deterministic sign: largest-magnitude coordinate positive.
  int arg = 0;
  m_axis.cwiseAbs().maxCoeff(&arg);
  if (m_axis(arg) < 0) m_axis = -m_axis;
  s.m_axis = m_axis;

  // --- Root decomposition of g over t --------------------------------------
  // Simultaneous block diagonalization of the three commuting operators
  // -ad(tau_k)^2; joint eigenspaces are the root planes.
  std::vector<MatrixXd> blocks{MatrixXd::Identity(21, 21)};
  for (int k = 0; k < 3; ++k) {
    const Mat21 a = s.ad_matrix(s.cartan.col(k));
    const Mat21 op = -(a * a);
    blocks = refine_blocks(blocks, op, 1e-7);
  }
  std::vector<RootDatum> raw;
  int zero_dim = 0;
  for (const MatrixXd& b : blocks) {
    double rate_norm = 0;
    for (int k = 0; k < 3; ++k) rate_norm += (s.ad_matrix(s.cartan.col(k)) * b).norm();
    if (rate_norm < 1e-6) {
      zero_dim += static_cast<int>(b.cols());
      continue;
    }
    if (b.cols() != 2) {
      throw std::runtime_error("root_decomposition: degenerate numerical spectrum (block of "
                               "dimension " + std::to_string(b.cols()) + ")");
    }
    RootDatum r;
    r.plane = b;
    Eigen::Vector3d rates;
    for (int k = 0; k < 3; ++k)
      rates(k) = s.bracket(s.cartan.col(k), b.col(0)).dot(b.col(1));
    r.root_vec = s.cartan * rates;
    raw.push_back(r);
  }
  if (zero_dim != 3 || raw.size() != 9) {
    throw std::runtime_error("root_decomposition: expected 3 + 9x2 block structure");
  }

  // --- Labels e1, e2, e3 ----------------------------------------------------
  // Short roots, oriented toward t cap m, sorted deterministically.
  std::vector<RootDatum*> shorts;
  for (RootDatum& r : raw)
    if (r.root_vec.norm() < 1.2) shorts.push_back(&r);
  if (shorts.size() != 3) throw std::runtime_error("root_decomposition: expected 3 short roots");
  for (RootDatum* r : shorts) {
    if (r->root_vec.dot(s.m_axis) < 0) {
      r->root_vec = -r->root_vec;
      r->plane.col(1) *= -1;
    }
  }
  std::sort(shorts.begin(), shorts.end(), [](const RootDatum* a, const RootDatum* b) {
    for (int i = 0; i < 21; ++i) {
      if (a->root_vec(i) != b->root_vec(i)) return a->root_vec(i) > b->root_vec(i);
    }
    return false;
  });
  for (int i = 0; i < 3; ++i) s.labels[i] = shorts[i]->root_vec;

  // Express every root over the labels; make the leading coefficient
  // positive and snap to the integer lattice for lookups.
  for (RootDatum& r : raw) {
    Eigen::Vector3d c;
    for (int i = 0; i < 3; ++i) c(i) = r.root_vec.dot(s.labels[i]);
    for (int i = 0; i < 3; ++i) {
      if (std::abs(c(i)) > 0.5) {
        if (c(i) < 0) {
          c = -c;
          r.root_vec = -r.root_vec;
          r.plane.col(1) *= -1;
        }
        break;
      }
    }
    for (int i = 0; i < 3; ++i) {
      if (std::abs(c(i) - std::round(c(i))) > 1e-6)
        throw std::runtime_error("root_decomposition: root coefficients far from lattice");
    }
    r.coeffs = c;
  }
  std::sort(raw.begin(), raw.end(), [](const RootDatum& a, const RootDatum& b) {
    const auto ra = a.coeffs, rb = b.coeffs;
    for (int i = 0; i < 3; ++i)
      if (std::round(ra(i)) != std::round(rb(i))) return std::round(ra(i)) > std::round(rb(i));
    return false;
  });
  s.roots = std::move(raw);

  // --- Root decomposition of h over t cap h ---------------------------------
  std::vector<MatrixXd> hblocks{s.h_basis};
  for (int k = 0; k < 2; ++k) {
    const Mat21 a = s.ad_matrix(s.cartan_h.col(k));
    const Mat21 op = -(a * a);
    hblocks = refine_blocks(hblocks, op, 1e-7);
  }
  std::vector<RootDatum> hraw;
  int hzero = 0;
  for (const MatrixXd& b : hblocks) {
    double rate_norm = 0;
    for (int k = 0; k < 2; ++k) rate_norm += (s.ad_matrix(s.cartan_h.col(k)) * b).norm();
    if (rate_norm < 1e-6) {
      hzero += static_cast<int>(b.cols());
      continue;
    }
    if (b.cols() != 2)
      throw std::runtime_error("root_decomposition(h): degenerate numerical spectrum");
    RootDatum r;
    r.plane = b;
    Eigen::Vector2d rates;
    for (int k = 0; k < 2; ++k)
      rates(k) = s.bracket(s.cartan_h.col(k), b.col(0)).dot(b.col(1));
    r.root_vec = s.cartan_h * rates;
    Eigen::Vector3d c;
    for (int i = 0; i < 3; ++i) c(i) = r.root_vec.dot(s.labels[i]);
    for (int i = 0; i < 3; ++i) {
      if (std::abs(c(i)) > 0.1) {
        if (c(i) < 0) {
          c = -c;
          r.root_vec = -r.root_vec;
          r.plane.col(1) *= -1;
        }
        break;
      }
    }
    r.coeffs = c;
    hraw.push_back(r);
  }
  if (hzero != 2 || hraw.size() != 6)
    throw std::runtime_error("root_decomposition(h): expected 2 + 6x2 block structure");
  std::sort(hraw.begin(), hraw.end(), [](const RootDatum& a, const RootDatum& b) {
    for (int i = 0; i < 3; ++i) {
      const double da = a.coeffs(i), db = b.coeffs(i);
      if (std::abs(da - db) > 1e-6) return da > db;
    }
    return false;
  });
  s.h_roots = std::move(hraw);

  // --- sp(2) inside so(7) ----------------------------------------------------
  MatrixXd sp2(21, 10);
  sp2.col(0) = s.labels[0];
  sp2.col(1) = s.labels[1];
  sp2.middleCols(2, 2) = s.root(1, 0, 0).plane;
  sp2.middleCols(4, 2) = s.root(0, 1, 0).plane;
  sp2.middleCols(6, 2) = s.root(1, 1, 0).plane;
  sp2.middleCols(8, 2) = s.root(1, -1, 0).plane;
  s.sp2_in_so7 = sp2;

  // --- Phi -------------------------------------------------------------------
  s.build_phi_();
  return s;
}

namespace {

// Quaternionic structure constants: coords of [b_i, b_j] over sp2_basis().
std::array<std::array<Vec10, 10>, 10> quat_brackets() {
  std::array<std::array<Vec10, 10>, 10> c;
  const auto& qb = sp2_basis();
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) c[i][j] = sp2_coords(qmat_bracket(qb[i], qb[j]));
  return c;
}

}  // namespace

void So7Structure::build_phi_() {
  const double sqrt2 = std::numbers::sqrt2;
  const Vec21 y1 = labels[0] + labels[1];
  const Vec21 y2 = labels[0] - labels[1];
  const double lambda = 2.0 * y1.squaredNorm();  // |diag(i,0)|_ht^2 = 1/2
  const double sl = std::sqrt(lambda);

  const RootDatum& pe1 = root(1, 0, 0);
  const RootDatum& pe2 = root(0, 1, 0);
  const RootDatum& psum = root(1, 1, 0);
  const RootDatum& pdiff = root(1, -1, 0);

  // Images of the quaternionic basis. The Cartan pair and the short-root
  // planes are fixed directly (rate functionals match); the long-root plane
  // images are solved from bracket constraints.
  MatrixXd img = MatrixXd::Zero(21, 10);
  img.col(0) = sqrt2 * y1;
  img.col(3) = sqrt2 * y2;
  img.col(6) = sl * pe2.plane.col(0);
  img.col(7) = sl * pe2.plane.col(1);
  img.col(8) = sl * pe1.plane.col(0);
  img.col(9) = sl * pe1.plane.col(1);

  const std::array<int, 4> unknown = {1, 2, 4, 5};  // b2, b3, b5, b6
  auto unknown_slot = [&](int k) -> int {
    for (int u = 0; u < 4; ++u)
      if (unknown[u] == k) return u;
    return -1;
  };

  MatrixXd w(21, 4);
  w << psum.plane, pdiff.plane;

  const auto qc = quat_brackets();

  // Least-squares system over the 16 coefficients of the unknown images in
  // the long-plane span. Rows come from every basis bracket that touches at
  // most one unknown on the bilinear side.
  std::vector<Eigen::Matrix<double, 21, 16>> lhs_rows;
  std::vector<Vec21> rhs_rows;
  for (int i = 0; i < 10; ++i) {
    for (int j = i + 1; j < 10; ++j) {
      const int ui = unknown_slot(i), uj = unknown_slot(j);
      if (ui >= 0 && uj >= 0) continue;  // bilinear in unknowns: skip
      Eigen::Matrix<double, 21, 16> a = Eigen::Matrix<double, 21, 16>::Zero();
      Vec21 rhs = Vec21::Zero();
      bool touches = false;
      // Phi([b_i, b_j]) term.
      for (int k = 0; k < 10; ++k) {
        const double coef = qc[i][j](k);
        if (std::abs(coef) < 1e-14) continue;
        const int uk = unknown_slot(k);
        if (uk >= 0) {
          a.middleCols(4 * uk, 4) += coef * w;
          touches = true;
        } else {
          rhs -= coef * img.col(k);
        }
      }
      // -[Phi b_i, Phi b_j] term.
      if (ui >= 0) {
        a.middleCols(4 * ui, 4) -= -ad_matrix(img.col(j)) * w;  // [x, b_j] = -ad(b_j) x
        touches = true;
      } else if (uj >= 0) {
        a.middleCols(4 * uj, 4) -= ad_matrix(img.col(i)) * w;
        touches = true;
      } else {
        rhs += bracket(img.col(i), img.col(j));
      }
      if (touches) {
        lhs_rows.push_back(a);
        rhs_rows.push_back(-rhs);
      }
    }
  }
  MatrixXd a_full(21 * lhs_rows.size(), 16);
  VectorXd b_full(21 * lhs_rows.size());
  for (std::size_t r = 0; r < lhs_rows.size(); ++r) {
    a_full.middleRows(21 * r, 21) = lhs_rows[r];
    b_full.segment(21 * r, 21) = rhs_rows[r];
  }
  const VectorXd xi = a_full.colPivHouseholderQr().solve(b_full);
  for (int u = 0; u < 4; ++u) img.col(unknown[u]) = w * xi.segment(4 * u, 4);

  // Certify: bracket homomorphism on all pairs, image containment, pullback.
  double defect = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) {
      Vec21 lhs = Vec21::Zero();
      for (int k = 0; k < 10; ++k) lhs += qc[i][j](k) * img.col(k);
      defect = std::max(defect, (lhs - bracket(img.col(i), img.col(j))).norm());
    }
  if (defect > 1e-9) {
    throw std::runtime_error("build_iso_phi: homomorphism defect " + std::to_string(defect) +
                             " exceeds 1e-9 after refinement");
  }
  const MatrixXd phi_mat = sp2_in_so7.transpose() * img;
  if ((img - sp2_in_so7 * phi_mat).norm() > 1e-9)
    throw std::runtime_error("build_iso_phi: image leaves the sp(2) subspace");

  phi.matrix = phi_mat;
  phi.lambda = lambda;

  // Quaternionic coordinates of sp(2) cap h.
  const MatrixXd sp2h = subspace_intersection(sp2_in_so7, h_basis);
  if (sp2h.cols() != 3) throw std::runtime_error("build_iso_phi: dim(sp2 cap h) != 3");
  MatrixXd pulled(10, 3);
  for (int c = 0; c < 3; ++c) pulled.col(c) = phi_inverse(sp2h.col(c));
  sp2h_quat = orthonormalize(pulled);
}

double So7Structure::root_relation_defect(const RootDatum& r, int samples) const {
  RngHandle rng(0xB007u);
  double defect = 0;
  for (int i = 0; i < samples; ++i) {
    Eigen::Vector3d c;
    for (int k = 0; k < 3; ++k) c(k) = rng.next_gaussian();
    const Vec21 x = cartan * c;
    const double rate = x.dot(r.root_vec);
    defect = std::max(defect, (bracket(x, r.plane.col(0)) - rate * r.plane.col(1)).norm());
    defect = std::max(defect, (bracket(x, r.plane.col(1)) + rate * r.plane.col(0)).norm());
  }
  return defect;
}

VerificationReport So7Structure::verify_so7(double tol_scale) const {
  VerificationReport rep;
  rep.suite = "structure.so7";
  rep.lemma = "Section 2.4";
  rep.check_eq_int("dimension", 21, 21);

  double ortho = 0;
  for (int i = 0; i < 21; ++i)
    for (int j = 0; j < 21; ++j) {
      const double ip = -0.5 * (basis[i] * basis[j]).trace();
      ortho = std::max(ortho, std::abs(ip - (i == j ? 1.0 : 0.0)));
    }
  rep.check_le("basis_orthonormality_defect", ortho, tol_scale * 1e-14);

  double antisym = 0, jacobi = 0;
  for (int i = 0; i < 21; ++i)
    for (int j = i; j < 21; ++j)
      antisym =
          std::max(antisym, (ad_[i].col(j) + ad_[j].col(i)).lpNorm<Eigen::Infinity>());
  // Jacobi over all ordered triples of basis indices.
  for (int i = 0; i < 21; ++i)
    for (int j = i + 1; j < 21; ++j)
      for (int k = j + 1; k < 21; ++k) {
        const Vec21 val = bracket(Vec21::Unit(i), ad_[j].col(k)) +
                          bracket(Vec21::Unit(j), ad_[k].col(i)) +
                          bracket(Vec21::Unit(k), ad_[i].col(j));
        jacobi = std::max(jacobi, val.lpNorm<Eigen::Infinity>());
      }
  rep.check_le("bracket_antisymmetry_defect", antisym, tol_scale * 1e-12);
  rep.check_le("jacobi_defect", jacobi, tol_scale * 1e-12);

  RngHandle rng(0xAD17u);
  double adinv = 0;
  for (int t = 0; t < 200; ++t) {
    Vec21 x, u, w;
    for (int i = 0; i < 21; ++i) {
      x(i) = rng.next_gaussian();
      u(i) = rng.next_gaussian();
      w(i) = rng.next_gaussian();
    }
    adinv = std::max(adinv, std::abs(bracket(x, u).dot(w) + u.dot(bracket(x, w))));
  }
  rep.check_le("ad_invariance_defect", adinv, tol_scale * 1e-12);
  return rep;
}

VerificationReport So7Structure::verify_g2(double tol_scale) const {
  VerificationReport rep;
  rep.suite = "structure.g2";
  rep.lemma = "Section 2.4";
  rep.check_eq_int("dimension", h_basis.cols(), 14);

  double closure = 0;
  for (int i = 0; i < h_basis.cols(); ++i)
    for (int j = i + 1; j < h_basis.cols(); ++j) {
      const Vec21 br = bracket(h_basis.col(i), h_basis.col(j));
      closure = std::max(closure, (br - project_h(br)).norm());
    }
  rep.check_le("bracket_closure_defect", closure, tol_scale * 1e-10);
  rep.check_le("zero_element_in_subspace", project_h(Vec21::Zero()).norm(), 0.0);

  // g = h + m orthogonally, and [h, m] subset m.
  rep.check_eq_int("dim_h_plus_dim_m", h_basis.cols() + m_basis.cols(), 21);
  rep.check_le("cross_gram_defect", (h_basis.transpose() * m_basis).norm(), tol_scale * 1e-12);
  double reductive = 0;
  for (int i = 0; i < h_basis.cols(); ++i)
    for (int j = 0; j < m_basis.cols(); ++j)
      reductive = std::max(reductive, project_h(bracket(h_basis.col(i), m_basis.col(j))).norm());
  rep.check_le("reductivity_defect", reductive, tol_scale * 1e-10);
  return rep;
}

VerificationReport So7Structure::verify_cartan(double tol_scale) const {
  VerificationReport rep;
  rep.suite = "structure.cartan";
  rep.lemma = "Section 2.4";
  rep.check_eq_int("dim_t", cartan.cols(), 3);
  rep.check_eq_int("dim_t_cap_h", intersection_dim(cartan, h_basis), 2);
  rep.check_eq_int("dim_t_cap_m", intersection_dim(cartan, m_basis), 1);
  double abelian = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      abelian = std::max(abelian, bracket(cartan.col(i), cartan.col(j)).norm());
  rep.check_le("abelian_defect", abelian, tol_scale * 1e-12);
  // t cap m = R(e1 + e2 + e3).
  const Vec21 sum = labels[0] + labels[1] + labels[2];
  rep.check_le("m_axis_matches_label_sum",
               (sum / sum.norm() - m_axis * (sum.dot(m_axis) > 0 ? 1.0 : -1.0)).norm(), tol_scale * 1e-9);
  // t cap h = span{e1 - e2, e2 - e3}.
  MatrixXd diff(21, 2);
  diff.col(0) = labels[0] - labels[1];
  diff.col(1) = labels[1] - labels[2];
  rep.check_le("cartan_h_matches_label_differences",
               subspace_distance(orthonormalize(diff), cartan_h), tol_scale * 1e-9);
  return rep;
}

VerificationReport So7Structure::verify_roots(double tol_scale) const {
  VerificationReport rep;
  rep.suite = "structure.roots";
  rep.lemma = "Section 2.4";
  rep.check_eq_int("positive_root_count", static_cast<long long>(roots.size()), 9);

  int shorts = 0, longs = 0;
  double len_defect = 0;
  for (const RootDatum& r : roots) {
    const double len = r.root_vec.norm();
    if (len < 1.2) {
      ++shorts;
      len_defect = std::max(len_defect, std::abs(len - 1.0));
    } else {
      ++longs;
      len_defect = std::max(len_defect, std::abs(len - std::numbers::sqrt2));
    }
  }
  rep.check_eq_int("short_root_count", shorts, 3);
  rep.check_eq_int("long_root_count", longs, 6);
  rep.check_le("root_length_defect", len_defect, tol_scale * 1e-9);

  // The coefficient multiset must be exactly {e_i +- e_j (i<j), e_i}.
  std::vector<std::array<int, 3>> expected = {{1, 1, 0}, {1, 0, 1}, {0, 1, 1},
                                              {1, -1, 0}, {1, 0, -1}, {0, 1, -1},
                                              {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  double lattice_defect = 0;
  std::vector<std::array<int, 3>> got;
  for (const RootDatum& r : roots) {
    std::array<int, 3> key{};
    for (int i = 0; i < 3; ++i) {
      key[i] = static_cast<int>(std::round(r.coeffs(i)));
      lattice_defect = std::max(lattice_defect, std::abs(r.coeffs(i) - key[i]));
    }
    got.push_back(key);
  }
  std::sort(expected.begin(), expected.end());
  std::sort(got.begin(), got.end());
  rep.check_true("root_set_matches_B3", expected == got);
  rep.check_le("root_lattice_defect", lattice_defect, tol_scale * 1e-9);

  double rel_defect = 0, ortho = 0;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    rel_defect = std::max(rel_defect, root_relation_defect(roots[i], 20));
    ortho = std::max(ortho, (cartan.transpose() * roots[i].plane).norm());
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      ortho = std::max(ortho, (roots[i].plane.transpose() * roots[j].plane).norm());
  }
  rep.check_le("root_relation_defect", rel_defect, tol_scale * 1e-10);
  rep.check_le("plane_orthogonality_defect", ortho, tol_scale * 1e-10);

  // Root system of h, over the labels: each recovered root must hit one
  // element of the expected set, and all six must be hit.
  const std::vector<std::array<double, 3>> h_expected = {
      {1, -1, 0}, {1, 0, -1}, {0, 1, -1},
      {1.0 / 3, 1.0 / 3, -2.0 / 3}, {1.0 / 3, -2.0 / 3, 1.0 / 3}, {2.0 / 3, -1.0 / 3, -1.0 / 3}};
  rep.check_eq_int("h_positive_root_count", static_cast<long long>(h_roots.size()), 6);
  double h_defect = 0;
  std::vector<bool> hit(h_expected.size(), false);
  for (const RootDatum& r : h_roots) {
    double best = 1e9;
    std::size_t best_idx = 0;
    for (std::size_t e = 0; e < h_expected.size(); ++e) {
      double d = 0;
      for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(r.coeffs(i) - h_expected[e][i]));
      if (d < best) {
        best = d;
        best_idx = e;
      }
    }
    hit[best_idx] = true;
    h_defect = std::max(h_defect, best);
  }
  rep.check_le("h_root_set_defect", h_defect, tol_scale * 1e-9);
  rep.check_true("h_root_set_complete",
                 std::all_of(hit.begin(), hit.end(), [](bool b) { return b; }));
  return rep;
}

VerificationReport So7Structure::verify_lemma1(double tol_scale) const {
  VerificationReport rep;
  rep.suite = "structure.lemma1";
  rep.lemma = "Lemma 1";

  const int idx[3][2] = {{0, 1}, {0, 2}, {1, 2}};
  // (1) g_{+-(e_i - e_j)} lies in h (intersection has full plane dimension).
  for (auto [i, j] : idx) {
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    c(i) = 1;
    c(j) = -1;
    const RootDatum& r = root(c(0), c(1), c(2));
    rep.check_eq_int("dim_h_cap_plane_e" + std::to_string(i + 1) + "-e" + std::to_string(j + 1),
                     intersection_dim(r.plane, h_basis), 2);
  }
  // (2) g_{+-(e_i + e_j)} + g_{+-e_k} splits 2 + 2 across h and m, and the
  // h part is the root plane of h for (e_i + e_j - 2 e_k) / 3.
  for (int k = 0; k < 3; ++k) {
    const int i = k == 0 ? 1 : 0;
    const int j = k == 2 ? 1 : 2;
    Eigen::Vector3d cs = Eigen::Vector3d::Zero();
    cs(i) = 1;
    cs(j) = 1;
    Eigen::Vector3d ck = Eigen::Vector3d::Zero();
    ck(k) = 1;
    const RootDatum& rsum = root(cs(0), cs(1), cs(2));
    const RootDatum& rk = root(ck(0), ck(1), ck(2));
    MatrixXd v(21, 4);
    v << rsum.plane, rk.plane;
    const MatrixXd hpart = subspace_intersection(v, h_basis);
    const MatrixXd mpart = subspace_intersection(v, m_basis);
    const std::string tag = "_k" + std::to_string(k + 1);
    rep.check_eq_int("dim_h_part" + tag, hpart.cols(), 2);
    rep.check_eq_int("dim_m_part" + tag, mpart.cols(), 2);
    if (hpart.cols() == 2) {
      // Root plane relation for alpha' = (e_i + e_j - 2 e_k) / 3 on t cap h.
      const Vec21 alpha = (labels[i] + labels[j] - 2 * labels[k]) / 3.0;
      RngHandle rng(0x1E3A1u + k);
      double defect = 1e9;
      for (int orient = 0; orient < 2; ++orient) {
        double d = 0;
        const double sgn = orient == 0 ? 1.0 : -1.0;
        for (int t = 0; t < 20; ++t) {
          Eigen::Vector2d cc;
          cc << rng.next_gaussian(), rng.next_gaussian();
          const Vec21 x = cartan_h * cc;
          const double rate = sgn * x.dot(alpha);
          d = std::max(d, (bracket(x, hpart.col(0)) - rate * hpart.col(1)).norm());
          d = std::max(d, (bracket(x, hpart.col(1)) + rate * hpart.col(0)).norm());
        }
        defect = std::min(defect, d);
      }
      rep.check_le("h_part_is_root_plane" + tag, defect, tol_scale * 1e-10);
    }
  }
  // (3) h meets neither g_{+-e_i} nor g_{+-(e_i+e_j)}.
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    c(i) = 1;
    const RootDatum& r = root(c(0), c(1), c(2));
    rep.check_eq_int("dim_h_cap_plane_e" + std::to_string(i + 1),
                     intersection_dim(r.plane, h_basis), 0);
  }
  for (auto [i, j] : idx) {
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    c(i) = 1;
    c(j) = 1;
    const RootDatum& r = root(c(0), c(1), c(2));
    rep.check_eq_int("dim_h_cap_plane_e" + std::to_string(i + 1) + "+e" + std::to_string(j + 1),
                     intersection_dim(r.plane, h_basis), 0);
  }
  // (4) same with m.
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    c(i) = 1;
    rep.check_eq_int("dim_m_cap_plane_e" + std::to_string(i + 1),
                     intersection_dim(root(c(0), c(1), c(2)).plane, m_basis), 0);
  }
  for (auto [i, j] : idx) {
    Eigen::Vector3d c = Eigen::Vector3d::Zero();
    c(i) = 1;
    c(j) = 1;
    rep.check_eq_int("dim_m_cap_plane_e" + std::to_string(i + 1) + "+e" + std::to_string(j + 1),
                     intersection_dim(root(c(0), c(1), c(2)).plane, m_basis), 0);
  }
  return rep;
}

VerificationReport So7Structure::verify_sp2_subalgebra(double tol_scale) const {
  VerificationReport rep;
  rep.suite = "structure.sp2";
  rep.lemma = "Example 1";
  rep.check_eq_int("dimension", sp2_in_so7.cols(), 10);
  rep.check_le("orthonormality_defect",
               (sp2_in_so7.transpose() * sp2_in_so7 - Mat10::Identity()).norm(), tol_scale * 1e-12);

  double closure = 0;
  const MatrixXd p = sp2_in_so7 * sp2_in_so7.transpose();
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) {
      const Vec21 br = bracket(sp2_in_so7.col(i), sp2_in_so7.col(j));
      closure = std::max(closure, (br - p * br).norm());
    }
  rep.check_le("bracket_closure_defect", closure, tol_scale * 1e-10);
  rep.check_eq_int("dim_sp2_cap_h", intersection_dim(sp2_in_so7, h_basis), 3);
  return rep;
}

VerificationReport So7Structure::verify_phi(double tol_scale) const {
  VerificationReport rep;
  rep.suite = "structure.phi";
  rep.lemma = "Section 4";

  const auto qc = quat_brackets();
  MatrixXd img = sp2_in_so7 * phi.matrix;
  double defect = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = i + 1; j < 10; ++j) {
      Vec21 lhs = Vec21::Zero();
      for (int k = 0; k < 10; ++k) lhs += qc[i][j](k) * img.col(k);
      defect = std::max(defect, (lhs - bracket(img.col(i), img.col(j))).norm());
    }
  rep.check_le("homomorphism_defect", defect, tol_scale * 1e-9);

  const Mat10 gram = phi.matrix.transpose() * phi.matrix;
  double pull_var = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 0; j < 10; ++j) {
      const double expect = i == j ? phi.lambda : 0.0;
      pull_var = std::max(pull_var, std::abs(gram(i, j) - expect) / phi.lambda);
    }
  rep.check_le("pullback_relative_variation", pull_var, tol_scale * 1e-9);
  rep.check_le("lambda_matches_4", std::abs(phi.lambda - 4.0), tol_scale * 1e-9);

  // Phi(diag(i,i)) is collinear with e1 (it equals 2 e1 in this scale).
  const Vec21 v_img = phi_map(sp2_coords(sp2_v()));
  rep.check_le("v_maps_to_e1_direction", (v_img - 2.0 * labels[0]).norm(), tol_scale * 1e-9);

  // Phi carries span{diag(0,i), diag(0,j), diag(0,k)} onto sp(2) cap h.
  MatrixXd quat_span(10, 3);
  quat_span.setZero();
  quat_span(3, 0) = 1;
  quat_span(4, 1) = 1;
  quat_span(5, 2) = 1;
  MatrixXd image(21, 3);
  for (int c = 0; c < 3; ++c) image.col(c) = phi_map(quat_span.col(c));
  const MatrixXd sp2h = subspace_intersection(sp2_in_so7, h_basis);
  rep.check_le("sp1_slot2_maps_to_sp2_cap_h",
               subspace_distance(orthonormalize(image), sp2h), tol_scale * 1e-9);

  // The sp(2) root planes match the quaternionic model through Phi.
  const int quat_plane_cols[4][2] = {{8, 9}, {6, 7}, {1, 2}, {4, 5}};
  const Eigen::Vector3d so7_roots[4] = {{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, -1, 0}};
  double plane_defect = 0;
  for (int r = 0; r < 4; ++r) {
    const RootDatum& rd = root(so7_roots[r](0), so7_roots[r](1), so7_roots[r](2));
    MatrixXd mapped(21, 2);
    for (int c = 0; c < 2; ++c)
      mapped.col(c) = img.col(quat_plane_cols[r][c]);
    plane_defect = std::max(plane_defect, subspace_distance(orthonormalize(mapped), rd.plane));
  }
  rep.check_le("root_plane_match_defect", plane_defect, tol_scale * 1e-9);
  return rep;
}

nlohmann::ordered_json So7Structure::to_json() const {
  nlohmann::ordered_json j;
  j["schema_version"] = "1";
  j["h_basis"] = matrix_to_json(h_basis);
  j["m_basis"] = matrix_to_json(m_basis);
  j["cartan"] = matrix_to_json(cartan);
  j["cartan_h"] = matrix_to_json(cartan_h);
  j["m_axis"] = matrix_to_json(m_axis);
  nlohmann::ordered_json labels_j = nlohmann::ordered_json::array();
  for (const Vec21& l : labels) labels_j.push_back(matrix_to_json(l));
  j["labels"] = labels_j;
  auto roots_to_json = [](const std::vector<RootDatum>& rs) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const RootDatum& r : rs) {
      nlohmann::ordered_json rj;
      rj["coeffs"] = {r.coeffs(0), r.coeffs(1), r.coeffs(2)};
      rj["root_vec"] = matrix_to_json(r.root_vec);
      rj["plane"] = matrix_to_json(r.plane);
      arr.push_back(rj);
    }
    return arr;
  };
  j["roots"] = roots_to_json(roots);
  j["h_roots"] = roots_to_json(h_roots);
  j["sp2_in_so7"] = matrix_to_json(sp2_in_so7);
  j["sp2h_quat"] = matrix_to_json(sp2h_quat);
  j["phi_matrix"] = matrix_to_json(phi.matrix);
  j["phi_lambda"] = phi.lambda;
  return j;
}

So7Structure So7Structure::from_json(const nlohmann::ordered_json& j) {
  if (j.at("schema_version").get<std::string>() != "1")
    throw std::runtime_error("structure file: unsupported schema version");
  So7Structure s;
  s.build_tables();
  s.h_basis = matrix_from_json(j.at("h_basis"));
  s.m_basis = matrix_from_json(j.at("m_basis"));
  s.cartan = matrix_from_json(j.at("cartan"));
  s.cartan_h = matrix_from_json(j.at("cartan_h"));
  s.m_axis = matrix_from_json(j.at("m_axis"));
  for (int i = 0; i < 3; ++i) s.labels[i] = matrix_from_json(j.at("labels").at(i));
  auto roots_from_json = [](const nlohmann::ordered_json& arr) {
    std::vector<RootDatum> rs;
    for (const auto& rj : arr) {
      RootDatum r;
      r.coeffs = Eigen::Vector3d(rj.at("coeffs").at(0).get<double>(),
                                 rj.at("coeffs").at(1).get<double>(),
                                 rj.at("coeffs").at(2).get<double>());
      r.root_vec = matrix_from_json(rj.at("root_vec"));
      r.plane = matrix_from_json(rj.at("plane"));
      rs.push_back(r);
    }
    return rs;
  };
  s.roots = roots_from_json(j.at("roots"));
  s.h_roots = roots_from_json(j.at("h_roots"));
  s.sp2_in_so7 = matrix_from_json(j.at("sp2_in_so7"));
  s.sp2h_quat = matrix_from_json(j.at("sp2h_quat"));
  s.phi.matrix = matrix_from_json(j.at("phi_matrix"));
  s.phi.lambda = j.at("phi_lambda").get<double>();
  return s;
}

}  // namespace sp2cw
