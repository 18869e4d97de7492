#pragma once

// Homogeneous polynomials on R^4 in the monomial basis, and the exact
// integral of a monomial over the unit sphere S^3.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace s3hopf {

using MultiIndex = std::array<int, 4>;

using MatrixLd = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
using VectorLd = Eigen::Matrix<long double, Eigen::Dynamic, 1>;

/// Number of monomials of total degree n in four variables.
constexpr int monomial_count(int n) { return n < 0 ? 0 : (n + 1) * (n + 2) * (n + 3) / 6; }

/// Ordered list of the exponents of all degree-n monomials: x0 exponent
/// descending, then x1, then x2.
class MonomialSet {
 public:
  explicit MonomialSet(int degree) : degree_(degree), lookup_(static_cast<std::size_t>((degree + 1) * (degree + 1) * (degree + 1)), -1) {
    if (degree < 0) throw std::invalid_argument("MonomialSet: negative degree");
    for (int a0 = degree; a0 >= 0; --a0) {
      for (int a1 = degree - a0; a1 >= 0; --a1) {
        for (int a2 = degree - a0 - a1; a2 >= 0; --a2) {
          const int a3 = degree - a0 - a1 - a2;
          lookup_[key(a1, a2, a3)] = static_cast<int>(exps_.size());
          exps_.push_back({a0, a1, a2, a3});
        }
      }
    }
  }

  int degree() const { return degree_; }
  int size() const { return static_cast<int>(exps_.size()); }
  const MultiIndex& operator[](int idx) const { return exps_[static_cast<std::size_t>(idx)]; }
  const std::vector<MultiIndex>& exponents() const { return exps_; }

  /// Index of the monomial with the given exponents; -1 when the degree differs.
  int index_of(const MultiIndex& a) const {
    if (a[0] + a[1] + a[2] + a[3] != degree_) return -1;
    for (int v : a)
      if (v < 0) return -1;
    return lookup_[key(a[1], a[2], a[3])];
  }

 private:
  std::size_t key(int a1, int a2, int a3) const {
    const auto d = static_cast<std::size_t>(degree_ + 1);
    return (static_cast<std::size_t>(a1) * d + static_cast<std::size_t>(a2)) * d + static_cast<std::size_t>(a3);
  }

  int degree_;
  std::vector<MultiIndex> exps_;
  std::vector<int> lookup_;
};

namespace detail {

inline long double double_factorial_odd(int m) {  // (m)!! for odd m >= -1
  long double r = 1.0L;
  for (int k = m; k > 1; k -= 2) r *= static_cast<long double>(k);
  return r;
}

}  // namespace detail

/// Integral over S^3 of x0^a0 x1^a1 x2^a2 x3^a3:
///   zero if any exponent is odd, else 2 prod Gamma((a_i+1)/2) / Gamma((|a|+4)/2),
/// evaluated through double factorials as
///   2 pi^2 prod (a_i - 1)!! / (2^{|a|/2} (|a|/2 + 1)!).
inline long double monomial_integral_ld(const MultiIndex& a) {
  int total = 0;
  long double num = 1.0L;
  for (int v : a) {
    if (v < 0) throw std::invalid_argument("monomial_integral: negative exponent");
    if (v % 2 != 0) return 0.0L;
    num *= detail::double_factorial_odd(v - 1);
    total += v;
  }
  const int half = total / 2;
  long double den = 1.0L;
  for (int k = 0; k < half; ++k) den *= 2.0L;
  for (int k = 2; k <= half + 1; ++k) den *= static_cast<long double>(k);
  constexpr long double kPi = 3.141592653589793238462643383279502884L;
  return 2.0L * kPi * kPi * num / den;
}

inline double monomial_integral(const MultiIndex& a) { return static_cast<double>(monomial_integral_ld(a)); }

/// L^2(S^3) Gram matrix of the degree-n monomials.
inline MatrixLd monomial_gram(const MonomialSet& set) {
  const int m = set.size();
  MatrixLd g = MatrixLd::Zero(m, m);
  for (int r = 0; r < m; ++r) {
    for (int c = r; c < m; ++c) {
      const MultiIndex& a = set[r];
      const MultiIndex& b = set[c];
      if (((a[0] + b[0]) | (a[1] + b[1]) | (a[2] + b[2]) | (a[3] + b[3])) & 1) continue;
      const long double v = monomial_integral_ld({a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]});
      g(r, c) = v;
      g(c, r) = v;
    }
  }
  return g;
}

/// Matrix, in the degree-n monomial basis, of p -> Dp(x)[A x] for a linear
/// vector field x -> A x on R^4. Preserves the degree.
inline MatrixLd linear_field_derivative(const MonomialSet& set, const Eigen::Matrix4d& a) {
  const int m = set.size();
  MatrixLd d = MatrixLd::Zero(m, m);
  for (int col = 0; col < m; ++col) {
    const MultiIndex& e = set[col];
    for (int p = 0; p < 4; ++p) {  // d/dx_p
      if (e[static_cast<std::size_t>(p)] == 0) continue;
      for (int q = 0; q < 4; ++q) {  // times (A x)_p = sum_q A(p,q) x_q
        const double coef = a(p, q);
        if (coef == 0.0) continue;
        MultiIndex f = e;
        f[static_cast<std::size_t>(p)] -= 1;
        f[static_cast<std::size_t>(q)] += 1;
        d(set.index_of(f), col) += static_cast<long double>(coef) * e[static_cast<std::size_t>(p)];
      }
    }
  }
  return d;
}

/// Matrix of the Euclidean Laplacian from degree n to degree n - 2.
inline MatrixLd euclidean_laplacian(const MonomialSet& from, const MonomialSet& to) {
  MatrixLd l = MatrixLd::Zero(to.size(), from.size());
  for (int col = 0; col < from.size(); ++col) {
    const MultiIndex& e = from[col];
    for (int p = 0; p < 4; ++p) {
      const int k = e[static_cast<std::size_t>(p)];
      if (k < 2) continue;
      MultiIndex f = e;
      f[static_cast<std::size_t>(p)] -= 2;
      l(to.index_of(f), col) += static_cast<long double>(k * (k - 1));
    }
  }
  return l;
}

/// Values of all degree-n monomials at a point, in MonomialSet order.
inline Eigen::VectorXd monomial_values(const MonomialSet& set, const std::array<double, 4>& x) {
  const int n = set.degree();
  std::array<std::vector<double>, 4> pw;
  for (std::size_t a = 0; a < 4; ++a) {
    pw[a].assign(static_cast<std::size_t>(n + 1), 1.0);
    for (int k = 1; k <= n; ++k) pw[a][static_cast<std::size_t>(k)] = pw[a][static_cast<std::size_t>(k - 1)] * x[a];
  }
  Eigen::VectorXd v(set.size());
  for (int i = 0; i < set.size(); ++i) {
    const MultiIndex& e = set[i];
    v(i) = pw[0][static_cast<std::size_t>(e[0])] * pw[1][static_cast<std::size_t>(e[1])] *
           pw[2][static_cast<std::size_t>(e[2])] * pw[3][static_cast<std::size_t>(e[3])];
  }
  return v;
}

}  // namespace s3hopf
