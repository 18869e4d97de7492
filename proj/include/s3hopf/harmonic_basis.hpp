#pragma once

// Orthonormal basis of harmonic homogeneous polynomials on R^4, restricted to
// S^3. Degree block n spans the Laplace eigenspace H_n (eigenvalue n(n+2)) and
// has dimension (n+1)^2.
//
// Construction per degree n: a harmonic polynomial h = sum_k x0^k h_k(x1,x2,x3)
// is fixed by its first two slices, with h_{k+2} = -Lap' h_k / ((k+2)(k+1)).
// Seeding (h_0, h_1) with the monomials of degree n and n-1 in (x1, x2, x3)
// gives a spanning set of exactly (n+1)^2 harmonic polynomials, which is then
// orthonormalized by modified Gram-Schmidt against the exact monomial Gram
// matrix. Arithmetic is carried in long double and rounded once at the end.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "s3hopf/polynomial.hpp"
#include "s3hopf/quaternion.hpp"

namespace s3hopf {

/// Dimension of the degree block H_n.
constexpr int block_dimension(int n) { return (n + 1) * (n + 1); }

/// Index of the first basis function of degree n in the global ordering.
constexpr int block_offset(int n) { return n * (n + 1) * (2 * n + 1) / 6; }

/// Total dimension of H_0 + ... + H_N.
constexpr int basis_dimension(int max_degree) { return block_offset(max_degree + 1); }

class HarmonicBasis {
 public:
  static constexpr int kMaxSupportedDegree = 12;
  static constexpr double kReorthogonalizeTol = 1e-10;

  explicit HarmonicBasis(int max_degree);

  int max_degree() const { return max_degree_; }
  int dimension() const { return basis_dimension(max_degree_); }
  int degree_of(int index) const;

  const MonomialSet& monomials(int n) const { return monomials_[static_cast<std::size_t>(n)]; }
  /// Columns are the degree-n basis polynomials in the monomial basis.
  const MatrixLd& coefficients_ld(int n) const { return coeffs_ld_[static_cast<std::size_t>(n)]; }
  const Eigen::MatrixXd& coefficients(int n) const { return coeffs_[static_cast<std::size_t>(n)]; }
  const MatrixLd& monomial_gram_matrix(int n) const { return gram_[static_cast<std::size_t>(n)]; }

  /// max |<b_i, b_j> - delta_ij| within degree n, exact integration.
  double orthonormality_error(int n) const { return ortho_err_[static_cast<std::size_t>(n)]; }
  /// max coefficient of the Euclidean Laplacian applied to the degree-n block.
  double harmonicity_residual(int n) const { return harm_err_[static_cast<std::size_t>(n)]; }
  int reorthogonalization_passes(int n) const { return passes_[static_cast<std::size_t>(n)]; }

  /// Values of every basis function at an ambient point.
  Eigen::VectorXd evaluate_all(const std::array<double, 4>& x) const {
    Eigen::VectorXd v(dimension());
    for (int n = 0; n <= max_degree_; ++n) {
      v.segment(block_offset(n), block_dimension(n)) =
          coeffs_[static_cast<std::size_t>(n)].transpose() * monomial_values(monomials(n), x);
    }
    return v;
  }

  Eigen::VectorXd evaluate_all(const Quaternion& x) const { return evaluate_all(x.coords()); }

  /// Sum_i c_i b_i(x).
  double evaluate(const Eigen::VectorXd& coefficients, const Quaternion& x) const {
    check_size(coefficients);
    return coefficients.dot(evaluate_all(x));
  }

  /// Replaces the polynomial tables; used when restoring a cache file.
  static HarmonicBasis from_tables(int max_degree, std::vector<Eigen::MatrixXd> tables);

 private:
  HarmonicBasis() = default;
  void check_size(const Eigen::VectorXd& c) const {
    if (c.size() != dimension()) throw precondition_error("HarmonicBasis: coefficient vector has wrong length");
  }
  void measure(int n);

  int max_degree_ = 0;
  std::vector<MonomialSet> monomials_;
  std::vector<MatrixLd> gram_;
  std::vector<MatrixLd> coeffs_ld_;
  std::vector<Eigen::MatrixXd> coeffs_;
  std::vector<double> ortho_err_;
  std::vector<double> harm_err_;
  std::vector<int> passes_;
};

namespace detail {

/// Spanning set of harmonic polynomials of degree n, as monomial coefficient columns.
inline MatrixLd harmonic_spanning_set(const MonomialSet& set) {
  const int n = set.degree();
  const int m = set.size();
  std::vector<MultiIndex> seeds;
  for (int start = 0; start <= std::min(1, n); ++start) {
    for (const MultiIndex& e : set.exponents()) {
      if (e[0] == start) seeds.push_back(e);
    }
  }
  MatrixLd span = MatrixLd::Zero(m, static_cast<int>(seeds.size()));
  for (std::size_t s = 0; s < seeds.size(); ++s) {
    VectorLd h = VectorLd::Zero(m);
    h(set.index_of(seeds[s])) = 1.0L;
    // Fill slices k + 2 from slice k.
    for (int k = seeds[s][0]; k + 2 <= n; k += 2) {
      for (int idx = 0; idx < m; ++idx) {
        const MultiIndex& e = set[idx];
        if (e[0] != k || h(idx) == 0.0L) continue;
        for (int p = 1; p < 4; ++p) {
          const int a = e[static_cast<std::size_t>(p)];
          if (a < 2) continue;
          MultiIndex f = e;
          f[static_cast<std::size_t>(p)] -= 2;
          f[0] += 2;
          h(set.index_of(f)) -= h(idx) * static_cast<long double>(a * (a - 1)) /
                                 static_cast<long double>((k + 2) * (k + 1));
        }
      }
    }
    span.col(static_cast<int>(s)) = h;
  }
  return span;
}

inline void modified_gram_schmidt(MatrixLd& v, const MatrixLd& gram) {
  MatrixLd gv(v.rows(), v.cols());  // gram * finished columns
  for (int i = 0; i < v.cols(); ++i) {
    for (int j = 0; j < i; ++j) {
      const long double c = gv.col(j).dot(v.col(i));
      v.col(i) -= c * v.col(j);
    }
    VectorLd g = gram * v.col(i);
    const long double nrm = std::sqrt(v.col(i).dot(g));
    if (!(nrm > 1e-30L)) throw std::runtime_error("HarmonicBasis: spanning set is degenerate");
    v.col(i) /= nrm;
    gv.col(i) = g / nrm;
  }
}

inline double max_identity_deviation(const MatrixLd& g) {
  long double e = 0.0L;
  for (int r = 0; r < g.rows(); ++r)
    for (int c = 0; c < g.cols(); ++c) e = std::max(e, std::abs(g(r, c) - (r == c ? 1.0L : 0.0L)));
  return static_cast<double>(e);
}

}  // namespace detail

inline HarmonicBasis::HarmonicBasis(int max_degree) : max_degree_(max_degree) {
  if (max_degree < 0 || max_degree > kMaxSupportedDegree) {
    throw precondition_error("build_basis: degree " + std::to_string(max_degree) + " outside supported range [0, " +
                             std::to_string(kMaxSupportedDegree) + "]");
  }
  for (int n = 0; n <= max_degree; ++n) {
    monomials_.emplace_back(n);
    gram_.push_back(monomial_gram(monomials_.back()));
    MatrixLd v = detail::harmonic_spanning_set(monomials_.back());
    int passes = 0;
    do {
      detail::modified_gram_schmidt(v, gram_.back());
      ++passes;
    } while (passes < 3 && detail::max_identity_deviation(v.transpose() * gram_.back() * v) > kReorthogonalizeTol);
    passes_.push_back(passes);
    coeffs_ld_.push_back(v);
    coeffs_.push_back(v.cast<double>());
    measure(n);
  }
}

inline void HarmonicBasis::measure(int n) {
  const auto un = static_cast<std::size_t>(n);
  const MatrixLd& c = coeffs_ld_[un];
  ortho_err_.push_back(detail::max_identity_deviation(c.transpose() * gram_[un] * c));
  if (n >= 2) {
    const MonomialSet lower(n - 2);
    harm_err_.push_back(static_cast<double>((euclidean_laplacian(monomials_[un], lower) * c).cwiseAbs().maxCoeff()));
  } else {
    harm_err_.push_back(0.0);
  }
}

inline HarmonicBasis HarmonicBasis::from_tables(int max_degree, std::vector<Eigen::MatrixXd> tables) {
  if (max_degree < 0 || max_degree > kMaxSupportedDegree || static_cast<int>(tables.size()) != max_degree + 1) {
    throw precondition_error("HarmonicBasis::from_tables: inconsistent degree");
  }
  HarmonicBasis b;
  b.max_degree_ = max_degree;
  for (int n = 0; n <= max_degree; ++n) {
    b.monomials_.emplace_back(n);
    const auto& t = tables[static_cast<std::size_t>(n)];
    if (t.rows() != b.monomials_.back().size() || t.cols() != block_dimension(n)) {
      throw precondition_error("HarmonicBasis::from_tables: table shape mismatch at degree " + std::to_string(n));
    }
    b.gram_.push_back(monomial_gram(b.monomials_.back()));
    b.coeffs_ld_.push_back(t.cast<long double>());
    b.coeffs_.push_back(t);
    b.passes_.push_back(0);
    b.measure(n);
  }
  return b;
}

inline int HarmonicBasis::degree_of(int index) const {
  for (int n = 0; n <= max_degree_; ++n)
    if (index < block_offset(n + 1)) return n;
  throw precondition_error("HarmonicBasis::degree_of: index out of range");
}

inline HarmonicBasis build_basis(int max_degree) { return HarmonicBasis(max_degree); }

}  // namespace s3hopf
