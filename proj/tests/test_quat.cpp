#include "sp2cw/quat.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "sp2cw/rng.hpp"

namespace sp2cw {
namespace {

constexpr double kPi = std::numbers::pi;

Quaternion random_quat(RngHandle& rng) {
  return {rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian()};
}

QMat2 random_qmat(RngHandle& rng) {
  QMat2 m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) m.m[i][j] = random_quat(rng);
  return m;
}

double quat_dist(const Quaternion& a, const Quaternion& b) {
  const Quaternion d = a - b;
  return std::sqrt(d.norm_sq());
}

TEST(Quaternion, DefiningRelations) {
  const Quaternion i = Quaternion::i(), j = Quaternion::j(), k = Quaternion::k();
  EXPECT_EQ(quat_dist(i * j, k), 0.0);
  EXPECT_EQ(quat_dist(j * k, i), 0.0);
  EXPECT_EQ(quat_dist(k * i, j), 0.0);
  EXPECT_EQ(quat_dist(i * i, Quaternion{-1, 0, 0, 0}), 0.0);
  EXPECT_EQ(quat_dist(j * j, Quaternion{-1, 0, 0, 0}), 0.0);
  EXPECT_EQ(quat_dist(k * k, Quaternion{-1, 0, 0, 0}), 0.0);
  EXPECT_EQ(quat_dist(i * (j * k), Quaternion{-1, 0, 0, 0}), 0.0);
}

TEST(Quaternion, IdentityCase) {
  RngHandle rng(101);
  for (int t = 0; t < 100; ++t) {
    const Quaternion q = random_quat(rng);
    EXPECT_EQ(quat_dist(Quaternion::one() * q, q), 0.0);
    EXPECT_EQ(quat_dist(q * Quaternion::one(), q), 0.0);
  }
}

TEST(Quaternion, AssociativityOnRandomTriples) {
  RngHandle rng(102);
  for (int t = 0; t < 1000; ++t) {
    const Quaternion a = random_quat(rng), b = random_quat(rng), c = random_quat(rng);
    EXPECT_LT(quat_dist((a * b) * c, a * (b * c)), 1e-15 * (1 + std::sqrt(a.norm_sq() * b.norm_sq() * c.norm_sq())) * 8);
  }
}

TEST(Quaternion, ConjugationReversesProducts) {
  RngHandle rng(103);
  for (int t = 0; t < 200; ++t) {
    const Quaternion a = random_quat(rng), b = random_quat(rng);
    EXPECT_LT(quat_dist((a * b).conj(), b.conj() * a.conj()), 1e-13);
  }
}

TEST(QMat2, DiagImaginaryIsAlgebraElement) {
  const QMat2 u = QMat2::diag(Quaternion::i(), Quaternion::i());
  const QMat2 sum = qmat_add(qmat_conj_transpose(u), u);
  EXPECT_EQ(qmat_max_abs(sum), 0.0);
  EXPECT_TRUE(is_sp2_algebra(u, 1e-15));
}

TEST(QMat2, IdentityActsTrivially) {
  RngHandle rng(104);
  const QMat2 a = random_qmat(rng);
  const QMat2 d = qmat_sub(qmat_mul(QMat2::identity(), a), a);
  EXPECT_EQ(qmat_max_abs(d), 0.0);
}

TEST(QMat2, ConjTransposeAntiHomomorphism) {
  RngHandle rng(105);
  for (int t = 0; t < 200; ++t) {
    const QMat2 a = random_qmat(rng), b = random_qmat(rng);
    const QMat2 lhs = qmat_conj_transpose(qmat_mul(a, b));
    const QMat2 rhs = qmat_mul(qmat_conj_transpose(b), qmat_conj_transpose(a));
    EXPECT_LT(qmat_max_abs(qmat_sub(lhs, rhs)), 1e-14 * (1 + qmat_max_abs(a) * qmat_max_abs(b)) * 4);
  }
}

TEST(QMat2, ConjTransposeIsInvolutive) {
  RngHandle rng(106);
  const QMat2 a = random_qmat(rng);
  EXPECT_EQ(qmat_max_abs(qmat_sub(qmat_conj_transpose(qmat_conj_transpose(a)), a)), 0.0);
}

TEST(Membership, GroupPredicate) {
  EXPECT_TRUE(is_sp2_group(QMat2::identity(), 1e-15));
  RngHandle rng(107);
  for (int t = 0; t < 20; ++t) {
    const double theta = 2 * kPi * rng.next_double() - kPi;
    const QMat2 g = QMat2::diag(quat_exp_imaginary(Quaternion::i() * theta),
                                quat_exp_imaginary(Quaternion::i() * theta));
    EXPECT_TRUE(is_sp2_group(g, 1e-14));
  }
  QMat2 bad = QMat2::identity();
  bad.m[0][0] = bad.m[0][0] * 1.01;
  EXPECT_FALSE(is_sp2_group(bad, 1e-10));
}

TEST(Embedding, IdentityMapsToIdentity) {
  const Eigen::Matrix4cd e = embed_c4(QMat2::identity());
  EXPECT_LT((e - Eigen::Matrix4cd::Identity()).cwiseAbs().maxCoeff(), 1e-16);
}

TEST(Embedding, DiagonalEigenvalues) {
  const double t0 = 0.8372;
  const QMat2 g = QMat2::diag(quat_exp_imaginary(Quaternion::i() * t0),
                              quat_exp_imaginary(Quaternion::i() * t0));
  Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(embed_c4(g));
  // Spectrum must be {exp(+-i t0)} with multiplicity two each.
  int plus = 0, minus = 0;
  for (int i = 0; i < 4; ++i) {
    const std::complex<double> ev = es.eigenvalues()(i);
    if (std::abs(ev - std::polar(1.0, t0)) < 1e-12) ++plus;
    if (std::abs(ev - std::polar(1.0, -t0)) < 1e-12) ++minus;
  }
  EXPECT_EQ(plus, 2);
  EXPECT_EQ(minus, 2);
}

TEST(Embedding, MultiplicativeOnRandomPairs) {
  RngHandle rng(108);
  for (int t = 0; t < 1000; ++t) {
    const QMat2 a = random_qmat(rng), b = random_qmat(rng);
    const Eigen::Matrix4cd lhs = embed_c4(qmat_mul(a, b));
    const Eigen::Matrix4cd rhs = embed_c4(a) * embed_c4(b);
    EXPECT_LT((lhs - rhs).cwiseAbs().maxCoeff(),
              1e-13 * (1 + qmat_max_abs(a) * qmat_max_abs(b)));
    const Eigen::Matrix4cd ct = embed_c4(qmat_conj_transpose(a));
    EXPECT_EQ((ct - embed_c4(a).adjoint()).cwiseAbs().maxCoeff(), 0.0);
  }
}

TEST(Embedding, UnembedRoundTrip) {
  RngHandle rng(109);
  const QMat2 a = random_qmat(rng);
  const QMat2 back = unembed_c4(embed_c4(a));
  EXPECT_EQ(qmat_max_abs(qmat_sub(a, back)), 0.0);
}

TEST(Exponential, ZeroMapsToIdentity) {
  const QMat2 e = qmat_exp(QMat2::zero());
  EXPECT_LT(qmat_max_abs(qmat_sub(e, QMat2::identity())), 1e-15);
}

TEST(Exponential, PiVIsMinusIdentity) {
  const QMat2 v = sp2_v();
  const QMat2 e = qmat_exp(qmat_scale(v, kPi));
  const QMat2 minus_id = qmat_scale(QMat2::identity(), -1.0);
  EXPECT_LT(qmat_max_abs(qmat_sub(e, minus_id)), 1e-14);
}

TEST(Exponential, MatchesDiagonalClosedForm) {
  const QMat2 v = sp2_v();
  RngHandle rng(110);
  for (int t = 0; t < 50; ++t) {
    const double theta = 4 * (rng.next_double() - 0.5) * kPi;
    const QMat2 e = qmat_exp(qmat_scale(v, theta));
    const QMat2 expected = QMat2::diag(quat_exp_imaginary(Quaternion::i() * theta),
                                       quat_exp_imaginary(Quaternion::i() * theta));
    EXPECT_LT(qmat_max_abs(qmat_sub(e, expected)), 1e-12);
  }
}

TEST(Exponential, OneParameterProperty) {
  const QMat2 v = sp2_v();
  RngHandle rng(111);
  for (int t = 0; t < 100; ++t) {
    const double a = 3 * (rng.next_double() - 0.5);
    const double b = 3 * (rng.next_double() - 0.5);
    const QMat2 lhs = qmat_exp(qmat_scale(v, a + b));
    const QMat2 rhs = qmat_mul(qmat_exp(qmat_scale(v, a)), qmat_exp(qmat_scale(v, b)));
    EXPECT_LT(qmat_max_abs(qmat_sub(lhs, rhs)), 1e-12);
  }
}

TEST(Exponential, ResultsAreGroupMembers) {
  RngHandle rng(112);
  for (int t = 0; t < 500; ++t) {
    const QMat2 g = qmat_exp(random_sp2_algebra(rng));
    EXPECT_TRUE(is_sp2_group(g, 1e-10));
  }
}

TEST(Exponential, RejectsNonAlgebraArgument) {
  EXPECT_THROW(qmat_exp(QMat2::identity()), std::invalid_argument);
}

TEST(Logarithm, RecoverssmallElements) {
  RngHandle rng(113);
  for (int t = 0; t < 100; ++t) {
    QMat2 u = random_sp2_algebra(rng);
    u = qmat_scale(u, 0.4 / qmat_frobenius(u));
    const QMat2 back = qmat_log(qmat_exp(u));
    EXPECT_LT(qmat_max_abs(qmat_sub(u, back)), 1e-11);
  }
}

TEST(Logarithm, HandlesMinusIdentity) {
  const QMat2 minus_id = qmat_scale(QMat2::identity(), -1.0);
  const QMat2 log_m = qmat_log(minus_id);
  EXPECT_TRUE(is_sp2_algebra(log_m, 1e-10));
  const QMat2 exp_back = qmat_exp(log_m);
  EXPECT_LT(qmat_max_abs(qmat_sub(exp_back, minus_id)), 1e-12);
}

TEST(Eigenangles, IdentityIsZero) {
  const auto [t1, t2] = eigenangles(QMat2::identity());
  EXPECT_EQ(t1, 0.0);
  EXPECT_EQ(t2, 0.0);
}

TEST(Eigenangles, DiagonalCase) {
  RngHandle rng(114);
  for (int t = 0; t < 50; ++t) {
    const double t0 = 0.05 + 0.9 * kPi * rng.next_double();
    const QMat2 g = QMat2::diag(quat_exp_imaginary(Quaternion::i() * t0),
                                quat_exp_imaginary(Quaternion::i() * t0));
    const auto [a, b] = eigenangles(g);
    EXPECT_NEAR(a, t0, 1e-7);
    EXPECT_NEAR(b, t0, 1e-7);
  }
}

TEST(Eigenangles, SortedDescending) {
  const QMat2 g = QMat2::diag(quat_exp_imaginary(Quaternion::i() * 0.5),
                              quat_exp_imaginary(Quaternion::i() * 2.5));
  const auto [a, b] = eigenangles(g);
  EXPECT_NEAR(a, 2.5, 1e-12);
  EXPECT_NEAR(b, 0.5, 1e-12);
}

TEST(Eigenangles, ConjugationInvariance) {
  RngHandle rng(115);
  for (int t = 0; t < 1000; ++t) {
    const QMat2 h = random_sp2(rng);
    const QMat2 g = random_sp2(rng);
    const QMat2 conjugated =
        qmat_mul(qmat_mul(qmat_conj_transpose(g), h), g);
    const auto [a1, b1] = eigenangles(h);
    const auto [a2, b2] = eigenangles(conjugated);
    EXPECT_NEAR(a1, a2, 1e-10);
    EXPECT_NEAR(b1, b2, 1e-10);
  }
}

TEST(Eigenangles, RejectsNonUnitary) {
  QMat2 bad = QMat2::identity();
  bad.m[0][0] = bad.m[0][0] * 1.5;
  EXPECT_THROW(eigenangles(bad), std::invalid_argument);
}

TEST(Retraction, FixedPointOnGroup) {
  RngHandle rng(116);
  for (int t = 0; t < 50; ++t) {
    const QMat2 g = random_sp2(rng);
    EXPECT_LT(qmat_max_abs(qmat_sub(retract_to_sp2(g), g)), 1e-13);
  }
}

TEST(Retraction, SmallPerturbation) {
  QMat2 m = QMat2::identity();
  m.m[0][1] = {1e-9, 0, 0, 0};
  const QMat2 r = retract_to_sp2(m);
  EXPECT_LT(qmat_max_abs(qmat_sub(r, QMat2::identity())), 1e-8);
}

TEST(Retraction, LandsOnGroupFromNoisyInput) {
  RngHandle rng(117);
  for (int t = 0; t < 100; ++t) {
    const QMat2 g = random_sp2(rng);
    QMat2 noise;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) noise.m[i][j] = random_quat(rng) * 1e-3;
    const QMat2 r = retract_to_sp2(qmat_add(g, noise));
    EXPECT_TRUE(is_sp2_group(r, 1e-12));
  }
}

TEST(Retraction, RejectsFarInput) {
  EXPECT_THROW(retract_to_sp2(qmat_scale(QMat2::identity(), 2.0)), std::invalid_argument);
}

TEST(Sampling, MembershipAtTightTolerance) {
  RngHandle rng(42);
  for (int t = 0; t < 10000; ++t) {
    RngHandle local = rng.split(t);
    EXPECT_TRUE(is_sp2_group(random_sp2(local), 1e-12));
  }
}

TEST(Sampling, SeedDeterminismIsBitIdentical) {
  RngHandle a(42), b(42);
  for (int t = 0; t < 50; ++t) {
    const QMat2 ga = random_sp2(a);
    const QMat2 gb = random_sp2(b);
    EXPECT_EQ(qmat_max_abs(qmat_sub(ga, gb)), 0.0);
  }
  RngHandle c(43);
  bool any_different = false;
  RngHandle a2(42);
  for (int t = 0; t < 5; ++t) {
    if (qmat_max_abs(qmat_sub(random_sp2(a2), random_sp2(c))) > 0) any_different = true;
  }
  EXPECT_TRUE(any_different);
}

TEST(Sampling, AdjointImagesCenterWithinMonteCarloBounds) {
  // The sampled mean of each coordinate of Ad(g) v should vanish within
  // 3 sigma of the Monte-Carlo error.
  RngHandle rng(2024);
  const QMat2 v = sp2_v();
  const int n = 20000;
  Vec10 sum = Vec10::Zero(), sumsq = Vec10::Zero();
  for (int t = 0; t < n; ++t) {
    RngHandle local = rng.split(t);
    const Vec10 w = adjoint_coords(random_sp2(local), v);
    sum += w;
    sumsq += w.cwiseProduct(w);
  }
  const Vec10 mean = sum / n;
  for (int k = 0; k < 10; ++k) {
    const double var = sumsq(k) / n - mean(k) * mean(k);
    const double sigma = std::sqrt(std::max(var, 1e-30) / n);
    EXPECT_LT(std::abs(mean(k)), 3.5 * sigma + 1e-6) << "coordinate " << k;
  }
}

TEST(Basis, HalfTraceOrthonormal) {
  const auto& basis = sp2_basis();
  for (int i = 0; i < 10; ++i) {
    EXPECT_TRUE(is_sp2_algebra(basis[i], 1e-15));
    for (int j = 0; j < 10; ++j) {
      EXPECT_NEAR(ht_inner(basis[i], basis[j]), i == j ? 1.0 : 0.0, 1e-15);
    }
  }
}

TEST(Basis, CoordinateRoundTrip) {
  RngHandle rng(118);
  for (int t = 0; t < 100; ++t) {
    const QMat2 u = random_sp2_algebra(rng);
    const QMat2 back = sp2_from_coords(sp2_coords(u));
    EXPECT_LT(qmat_max_abs(qmat_sub(u, back)), 1e-14);
  }
}

TEST(Rng, SplitStreamsAreOrderIndependent) {
  RngHandle base(7);
  RngHandle s3 = base.split(3);
  RngHandle s5 = base.split(5);
  const double a3 = s3.next_gaussian();
  const double a5 = s5.next_gaussian();
  RngHandle s5b = base.split(5);
  RngHandle s3b = base.split(3);
  EXPECT_EQ(a5, s5b.next_gaussian());
  EXPECT_EQ(a3, s3b.next_gaussian());
}

}  // namespace
}  // namespace sp2cw
