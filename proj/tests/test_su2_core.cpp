#include <gtest/gtest.h>

#include <cmath>
#include <complex>

#include "s3hopf/rng.hpp"
#include "s3hopf/su2.hpp"

using namespace s3hopf;

namespace {

void expect_quat_near(const Quaternion& a, const Quaternion& b, double tol) {
  for (int c = 0; c < 4; ++c) EXPECT_NEAR(a[c], b[c], tol) << "component " << c;
}

// det of the 4x4 matrix with rows (x, s1, s2, s3)
double det4(const std::array<Quaternion, 4>& r) {
  double m[4][4];
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) m[a][b] = r[static_cast<std::size_t>(a)][b];
  double det = 1.0;
  for (int c = 0; c < 4; ++c) {
    int p = c;
    for (int a = c + 1; a < 4; ++a)
      if (std::abs(m[a][c]) > std::abs(m[p][c])) p = a;
    if (p != c) {
      for (int b = 0; b < 4; ++b) std::swap(m[c][b], m[p][b]);
      det = -det;
    }
    det *= m[c][c];
    for (int a = c + 1; a < 4; ++a) {
      const double f = m[a][c] / m[c][c];
      for (int b = c; b < 4; ++b) m[a][b] -= f * m[c][b];
    }
  }
  return det;
}

}  // namespace

TEST(Quaternion, UnitProducts) {
  expect_quat_near(Quaternion::i() * Quaternion::j(), Quaternion::k(), 0);
  expect_quat_near(Quaternion::j() * Quaternion::k(), Quaternion::i(), 0);
  expect_quat_near(Quaternion::k() * Quaternion::i(), Quaternion::j(), 0);
  for (const auto& u : kImaginaryUnits) expect_quat_near(u * u, -Quaternion::one(), 0);
}

TEST(Quaternion, IdentityAndNormMultiplicative) {
  Rng rng(1);
  for (int t = 0; t < 100; ++t) {
    const Quaternion a = rng.normal_quaternion(), b = rng.normal_quaternion(), c = rng.normal_quaternion();
    expect_quat_near(quat_mul(Quaternion::one(), a), a, 0);
    EXPECT_NEAR((a * b).norm(), a.norm() * b.norm(), 1e-12 * (1 + a.norm() * b.norm()));
    expect_quat_near((a * b) * c, a * (b * c), 1e-12 * (1 + a.norm() * b.norm() * c.norm()));
  }
}

TEST(Quaternion, BracketMatchesPauliCommutators) {
  expect_quat_near(commutator(Quaternion::i(), Quaternion::j()), Quaternion::k() * 2.0, 0);
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 3; ++k) {
      AlgebraVector pj, pk;
      pj[j] = 1;
      pk[k] = 1;
      const AlgebraVector b = bracket(pj, pk);
      for (int l = 0; l < 3; ++l) EXPECT_EQ(b[l], 2.0 * levi_civita(j, k, l));
    }
  }
}

TEST(UnitQuaternion, RejectsNonUnitAndRenormalizes) {
  EXPECT_THROW(UnitQuaternion(Quaternion{2, 0, 0, 0}), precondition_error);
  const UnitQuaternion u(Quaternion{1 + 1e-9, 0, 0, 0});
  EXPECT_NEAR(u.q().norm2(), 1.0, 1e-15);
  EXPECT_THROW(UnitQuaternion::normalized(Quaternion{}), precondition_error);
}

TEST(TangentVector, RejectsNormalComponent) {
  const UnitQuaternion x;
  EXPECT_THROW(TangentVector(x, Quaternion{1, 0, 0, 0}), precondition_error);
  EXPECT_NO_THROW(TangentVector(x, Quaternion::i()));
  const TangentVector p = TangentVector::project(x, Quaternion{1, 2, 0, 0});
  EXPECT_EQ(p.vec().w, 0.0);
}

TEST(Frame, AtIdentity) {
  const auto f = frame_at(UnitQuaternion());
  expect_quat_near(f[0].vec(), Quaternion::i(), 0);
  expect_quat_near(f[1].vec(), Quaternion::j(), 0);
  expect_quat_near(f[2].vec(), Quaternion::k(), 0);
}

TEST(Frame, FirstVectorIsMultiplicationByI) {
  Rng rng(2);
  for (int t = 0; t < 100; ++t) {
    const UnitQuaternion x = rng.unit_quaternion();
    const auto f = frame_at(x);
    // i (z1, z2) = (i z1, i z2)
    const std::complex<double> I{0, 1};
    const UnitQuaternion ix = UnitQuaternion::from_complex(I * x.z1(), I * x.z2());
    expect_quat_near(f[0].vec(), ix.q(), 1e-14);
  }
}

TEST(Frame, OrthonormalAndPositivelyOriented) {
  Rng rng(3);
  for (int t = 0; t < 100; ++t) {
    const UnitQuaternion x = rng.unit_quaternion();
    const auto f = frame_at(x);
    for (int a = 0; a < 3; ++a) {
      EXPECT_NEAR(dot(f[static_cast<std::size_t>(a)].vec(), x.q()), 0.0, 1e-14);
      for (int b = 0; b < 3; ++b)
        EXPECT_NEAR(dot(f[static_cast<std::size_t>(a)].vec(), f[static_cast<std::size_t>(b)].vec()), a == b ? 1.0 : 0.0, 1e-12);
    }
    EXPECT_NEAR(det4({x.q(), f[0].vec(), f[1].vec(), f[2].vec()}), 1.0, 1e-12);
  }
}

TEST(HopfMap, Poles) {
  const auto a = hopf_map(UnitQuaternion::from_complex(1.0, 0.0));
  EXPECT_EQ(a[0], 0.0);
  EXPECT_EQ(a[1], 0.0);
  EXPECT_EQ(a[2], -1.0);
  const auto b = hopf_map(UnitQuaternion::from_complex(0.0, 1.0));
  EXPECT_EQ(b[2], 1.0);
}

TEST(HopfMap, UnitAndFiberInvariant) {
  Rng rng(4);
  for (int t = 0; t < 100; ++t) {
    const UnitQuaternion x = rng.unit_quaternion();
    const double s = rng.uniform(-3, 3);
    const auto h = hopf_map(x);
    EXPECT_NEAR(h[0] * h[0] + h[1] * h[1] + h[2] * h[2], 1.0, 1e-13);
    const auto g = hopf_map(UnitQuaternion(x.q() * exp_imaginary(Quaternion::imaginary(s, 0, 0))));
    for (int c = 0; c < 3; ++c) EXPECT_NEAR(g[static_cast<std::size_t>(c)], h[static_cast<std::size_t>(c)], 1e-12);
  }
}

TEST(Translations, MuOfFrameIsConstant) {
  Rng rng(5);
  for (int t = 0; t < 50; ++t) {
    const UnitQuaternion x = rng.unit_quaternion();
    const auto f = frame_at(x);
    for (int j = 0; j < 3; ++j) {
      const AlgebraVector m = mu_translate(x, f[static_cast<std::size_t>(j)]);
      for (int l = 0; l < 3; ++l) EXPECT_NEAR(m[l], j == l ? 1.0 : 0.0, 1e-14);
    }
  }
}

TEST(Translations, RejectForeignBasePoint) {
  const UnitQuaternion x;
  const TangentVector y(UnitQuaternion(Quaternion::i()), Quaternion::j());
  EXPECT_THROW(mu_translate(x, y), precondition_error);
  EXPECT_THROW(eta_translate(x, y), precondition_error);
}

TEST(Translations, EtaOfHopfFieldIsHopfMap) {
  Rng rng(6);
  for (int t = 0; t < 100; ++t) {
    const UnitQuaternion x = rng.unit_quaternion();
    const AlgebraVector e = eta_translate(x, frame_at(x)[0]);
    const auto c = hopf_coordinates_of_eta(e);
    const auto h = hopf_map(x);
    for (int l = 0; l < 3; ++l) EXPECT_NEAR(c[static_cast<std::size_t>(l)], h[static_cast<std::size_t>(l)], 1e-13);
  }
}

TEST(Translations, ConjugationExpansion) {
  // x i x^{-1} = (|z1|^2 - |z2|^2) P1 + 2 Re(conj(z1) z2) P2 - 2 Im(conj(z1) z2) P3
  Rng rng(7);
  for (int t = 0; t < 100; ++t) {
    const UnitQuaternion x = rng.unit_quaternion();
    const AlgebraVector e = adjoint(x.q(), AlgebraVector(1, 0, 0));
    const std::complex<double> u = std::conj(x.z1()) * x.z2();
    EXPECT_NEAR(e[0], std::norm(x.z1()) - std::norm(x.z2()), 1e-12);
    EXPECT_NEAR(e[1], 2 * u.real(), 1e-12);
    EXPECT_NEAR(e[2], -2 * u.imag(), 1e-12);
  }
}

TEST(HopfMap, EquivariantUnderLeftTranslation) {
  // eta(sigma_1)(u x) = Ad(u) eta(sigma_1)(x)
  Rng rng(8);
  for (int t = 0; t < 50; ++t) {
    const UnitQuaternion x = rng.unit_quaternion(), u = rng.unit_quaternion();
    const UnitQuaternion ux = u * x;
    const AlgebraVector lhs = eta_translate(ux, frame_at(ux)[0]);
    const AlgebraVector rhs = adjoint(u.q(), eta_translate(x, frame_at(x)[0]));
    for (int l = 0; l < 3; ++l) EXPECT_NEAR(lhs[l], rhs[l], 1e-12);
  }
}
