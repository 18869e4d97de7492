#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "s3hopf/harmonic_basis.hpp"
#include "s3hopf/quadrature.hpp"
#include "s3hopf/rng.hpp"

using namespace s3hopf;

namespace {

const double kPi2 = std::numbers::pi * std::numbers::pi;

// Independent oracle: 2 prod Gamma((a_i+1)/2) / Gamma((|a|+4)/2).
double gamma_oracle(const MultiIndex& a) {
  for (int v : a)
    if (v % 2) return 0.0;
  double num = 2.0;
  int total = 0;
  for (int v : a) {
    num *= std::tgamma((v + 1) / 2.0);
    total += v;
  }
  return num / std::tgamma((total + 4) / 2.0);
}

}  // namespace

TEST(MonomialIntegral, HandValues) {
  EXPECT_NEAR(monomial_integral({0, 0, 0, 0}), 2 * kPi2, 1e-14);
  EXPECT_NEAR(monomial_integral({2, 0, 0, 0}), kPi2 / 2, 1e-14);
  EXPECT_NEAR(monomial_integral({4, 0, 0, 0}), kPi2 / 4, 1e-14);
  EXPECT_EQ(monomial_integral({1, 1, 0, 0}), 0.0);
}

TEST(MonomialIntegral, MatchesGammaFormula) {
  for (int d = 0; d <= 26; ++d) {
    const MonomialSet set(d);
    for (const auto& a : set.exponents()) {
      const double o = gamma_oracle(a);
      const double v = monomial_integral(a);
      if (o == 0.0) {
        EXPECT_EQ(v, 0.0);
      } else {
        EXPECT_LE(std::abs(v - o), 1e-12 * std::abs(o)) << d;
      }
    }
  }
}

TEST(Quadrature, WeightsSumToVolume) {
  for (GridLevels l : {GridLevels{1, 1, 1}, GridLevels{3, 5, 7}, GridLevels{8, 16, 16}}) {
    const auto g = hopf_grid(l);
    double s = 0;
    for (double w : g.weights()) {
      EXPECT_GT(w, 0.0);
      s += w;
    }
    EXPECT_NEAR(s, 2 * kPi2, 1e-12);
  }
}

TEST(Quadrature, NodesOnSphere) {
  const auto g = hopf_grid({4, 6, 5});
  EXPECT_EQ(g.size(), 4 * 6 * 5);
  for (const auto& x : g.nodes()) EXPECT_NEAR(x.norm2(), 1.0, 1e-15);
}

TEST(Quadrature, SecondMoment) {
  const auto g = hopf_grid({5, 8, 8});
  EXPECT_NEAR(g.integrate([](const Quaternion& x) { return x.w * x.w; }), kPi2 / 2, 1e-13);
}

TEST(Quadrature, ExactOnAllMonomialsUpToExactness) {
  const auto g = hopf_grid({8, 16, 16});
  ASSERT_GE(g.exactness(), 12);
  for (int d = 0; d <= g.exactness(); ++d) {
    const MonomialSet set(d);
    for (const auto& a : set.exponents()) {
      const double q = g.integrate([&](const Quaternion& x) {
        return std::pow(x.w, a[0]) * std::pow(x.x, a[1]) * std::pow(x.y, a[2]) * std::pow(x.z, a[3]);
      });
      const double o = gamma_oracle(a);
      EXPECT_LE(std::abs(q - o), 1e-12 * std::max(1.0, std::abs(o))) << d;
    }
  }
}

TEST(Quadrature, ExactnessIsSharpInXi) {
  // x1^D integrated with D = L1 is not captured when D is even and the trig order exceeds L1 - 1.
  const auto g = hopf_grid({8, 4, 16});
  EXPECT_EQ(g.exactness(), 3);
  const double q = g.integrate([](const Quaternion& x) { return std::pow(x.w, 4) * 1.0; });
  // cos^4 has order 4 > 3: trapezoid aliases
  EXPECT_GT(std::abs(q - gamma_oracle({4, 0, 0, 0})), 1e-6);
}

TEST(Quadrature, LevelsForExactness) {
  for (int d = 0; d <= 30; ++d) EXPECT_GE(QuadratureGrid::exactness_for(levels_for_exactness(d)), d);
}

TEST(HarmonicBasis, Dimensions) {
  EXPECT_EQ(basis_dimension(4), 55);
  const HarmonicBasis b(4);
  EXPECT_EQ(b.dimension(), 55);
  for (int n = 0; n <= 4; ++n) EXPECT_EQ(b.coefficients(n).cols(), (n + 1) * (n + 1));
  EXPECT_EQ(b.degree_of(0), 0);
  EXPECT_EQ(b.degree_of(1), 1);
  EXPECT_EQ(b.degree_of(5), 2);
  EXPECT_THROW(HarmonicBasis(13), precondition_error);
  EXPECT_THROW(HarmonicBasis(-1), precondition_error);
}

TEST(HarmonicBasis, LowBlocks) {
  const HarmonicBasis b(1);
  const Quaternion x{0.5, 0.5, 0.5, 0.5};
  const Eigen::VectorXd v = b.evaluate_all(x);
  EXPECT_NEAR(std::abs(v(0)), 1 / std::sqrt(2 * kPi2), 1e-15);
  // degree-1 block: x_i sqrt(2) / pi
  double s = 0;
  for (int i = 1; i < 5; ++i) s += v(i) * v(i);
  EXPECT_NEAR(s, 2.0 / kPi2 * x.norm2(), 1e-14);
}

TEST(HarmonicBasis, OrthonormalAndHarmonicUpToCap) {
  const HarmonicBasis b(HarmonicBasis::kMaxSupportedDegree);
  for (int n = 0; n <= b.max_degree(); ++n) {
    EXPECT_LT(b.orthonormality_error(n), 1e-10) << n;
    EXPECT_LT(b.harmonicity_residual(n), 1e-10) << n;
  }
}

TEST(HarmonicBasis, QuadratureGramIsIdentity) {
  const int N = 6;
  const HarmonicBasis b(N);
  const auto g = hopf_grid(levels_for_exactness(2 * N));
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(b.dimension(), b.dimension());
  for (int i = 0; i < g.size(); ++i) {
    const Eigen::VectorXd v = b.evaluate_all(g.nodes()[static_cast<std::size_t>(i)]);
    gram += g.weights()[static_cast<std::size_t>(i)] * v * v.transpose();
  }
  EXPECT_LT((gram - Eigen::MatrixXd::Identity(b.dimension(), b.dimension())).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(HarmonicBasis, Parity) {
  const HarmonicBasis b(5);
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const Quaternion x = rng.unit_quaternion().q();
    const Eigen::VectorXd p = b.evaluate_all(x), m = b.evaluate_all(-x);
    for (int i = 0; i < b.dimension(); ++i) {
      const double s = b.degree_of(i) % 2 == 0 ? 1.0 : -1.0;
      EXPECT_NEAR(m(i), s * p(i), 1e-12);
    }
  }
}

TEST(HarmonicBasis, RestoreFromTables) {
  const HarmonicBasis b(3);
  std::vector<Eigen::MatrixXd> t;
  for (int n = 0; n <= 3; ++n) t.push_back(b.coefficients(n));
  const HarmonicBasis r = HarmonicBasis::from_tables(3, t);
  EXPECT_LT(r.orthonormality_error(3), 1e-12);
  t.pop_back();
  EXPECT_THROW(HarmonicBasis::from_tables(3, t), precondition_error);
}
