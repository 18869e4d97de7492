#pragma once

// Degree-block matrices of differential operators on the harmonic basis.
//
// The frame derivatives f -> sigma_j(f) are rotation generators of R^4, so they
// commute with the Euclidean Laplacian and map each H_n into itself; their
// matrices are therefore block diagonal without truncation.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <string>
#include <vector>

#include "s3hopf/harmonic_basis.hpp"
#include "s3hopf/su2.hpp"

namespace s3hopf {

enum class OperatorKind {
  laplacian,
  frame_derivative_1,
  frame_derivative_2,
  frame_derivative_3,
  vertical_lambda,    // Delta - 2i D1
  hopf_map_lambda,    // Delta - 4i D1
  field_rough_laplacian,
  identity_jacobi,    // rough Laplacian on fields minus 2
};

inline std::string to_string(OperatorKind k) {
  switch (k) {
    case OperatorKind::laplacian: return "laplacian";
    case OperatorKind::frame_derivative_1: return "D1";
    case OperatorKind::frame_derivative_2: return "D2";
    case OperatorKind::frame_derivative_3: return "D3";
    case OperatorKind::vertical_lambda: return "lambda";
    case OperatorKind::hopf_map_lambda: return "lambda4";
    case OperatorKind::field_rough_laplacian: return "rough_laplacian_field";
    case OperatorKind::identity_jacobi: return "identity_jacobi";
  }
  return "unknown";
}

/// One square matrix per degree n <= N. Scalar operators act on the (n+1)^2
/// coefficients of degree n; field operators act on (f1, f2, f3) stacked, so
/// their blocks have size 3 (n+1)^2.
template <class Scalar>
struct DegreeBlockOperator {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  OperatorKind kind{};
  std::vector<Matrix> blocks;
  int components = 1;

  int max_degree() const { return static_cast<int>(blocks.size()) - 1; }
  const Matrix& block(int n) const { return blocks.at(static_cast<std::size_t>(n)); }

  /// Applies the operator to a scalar coefficient vector (components == 1).
  Vector apply(const Vector& c) const {
    if (components != 1) throw precondition_error("DegreeBlockOperator::apply: field operator needs apply_field");
    if (c.size() != basis_dimension(max_degree())) throw precondition_error("DegreeBlockOperator::apply: size mismatch");
    Vector out(c.size());
    for (int n = 0; n <= max_degree(); ++n) {
      out.segment(block_offset(n), block_dimension(n)) = block(n) * c.segment(block_offset(n), block_dimension(n));
    }
    return out;
  }

  /// Applies a field operator to three coefficient vectors.
  std::array<Vector, 3> apply_field(const std::array<Vector, 3>& f) const {
    if (components != 3) throw precondition_error("DegreeBlockOperator::apply_field: scalar operator");
    std::array<Vector, 3> out;
    for (auto& o : out) o = Vector::Zero(f[0].size());
    for (int n = 0; n <= max_degree(); ++n) {
      const int m = block_dimension(n), off = block_offset(n);
      Vector stacked(3 * m);
      for (int l = 0; l < 3; ++l) stacked.segment(l * m, m) = f[static_cast<std::size_t>(l)].segment(off, m);
      const Vector r = block(n) * stacked;
      for (int l = 0; l < 3; ++l) out[static_cast<std::size_t>(l)].segment(off, m) = r.segment(l * m, m);
    }
    return out;
  }
};

using RealBlockOperator = DegreeBlockOperator<double>;
using ComplexBlockOperator = DegreeBlockOperator<std::complex<double>>;

/// Matrix of the linear vector field x -> x e_j on R^4 (0-based j).
inline Eigen::Matrix4d left_frame_generator(int j) {
  Eigen::Matrix4d a;
  for (int b = 0; b < 4; ++b) {
    Quaternion e{};
    if (b == 0) e = Quaternion::one();
    if (b == 1) e = Quaternion::i();
    if (b == 2) e = Quaternion::j();
    if (b == 3) e = Quaternion::k();
    const Quaternion img = frame_vector(e, j);
    for (int r = 0; r < 4; ++r) a(r, b) = img[r];
  }
  return a;
}

/// Degree-block matrix of f -> sigma_j(f) = Df(x)[x e_j] (0-based j), obtained
/// by differentiating each basis polynomial exactly and projecting with the
/// exact Gram data.
inline RealBlockOperator assemble_derivative(int j, const HarmonicBasis& basis) {
  if (j < 0 || j > 2) throw precondition_error("assemble_derivative: frame index must be 0, 1 or 2");
  RealBlockOperator op;
  op.kind = static_cast<OperatorKind>(static_cast<int>(OperatorKind::frame_derivative_1) + j);
  const Eigen::Matrix4d gen = left_frame_generator(j);
  for (int n = 0; n <= basis.max_degree(); ++n) {
    const MatrixLd& c = basis.coefficients_ld(n);
    const MatrixLd dc = linear_field_derivative(basis.monomials(n), gen) * c;
    op.blocks.push_back((c.transpose() * basis.monomial_gram_matrix(n) * dc).cast<double>());
  }
  return op;
}

/// Largest L^2 norm of the part of sigma_j(b) lying outside span(H_n), over the
/// degree-n basis functions b, for every n <= N.
inline double derivative_leakage(int j, const HarmonicBasis& basis) {
  const Eigen::Matrix4d gen = left_frame_generator(j);
  long double worst = 0.0L;
  for (int n = 0; n <= basis.max_degree(); ++n) {
    const MatrixLd& c = basis.coefficients_ld(n);
    const MatrixLd& g = basis.monomial_gram_matrix(n);
    const MatrixLd dc = linear_field_derivative(basis.monomials(n), gen) * c;
    const MatrixLd coef = c.transpose() * g * dc;
    const MatrixLd resid = dc - c * coef;
    const MatrixLd rr = resid.transpose() * g * resid;
    for (int i = 0; i < rr.rows(); ++i) worst = std::max(worst, std::sqrt(std::max(0.0L, rr(i, i))));
  }
  return static_cast<double>(worst);
}

inline RealBlockOperator laplacian_operator(int max_degree) {
  RealBlockOperator op;
  op.kind = OperatorKind::laplacian;
  for (int n = 0; n <= max_degree; ++n) {
    op.blocks.push_back(static_cast<double>(n * (n + 2)) * Eigen::MatrixXd::Identity(block_dimension(n), block_dimension(n)));
  }
  return op;
}

/// -sum_j D_j^2, the Laplace-Beltrami operator rebuilt from the frame.
inline RealBlockOperator laplacian_from_frame(const std::array<RealBlockOperator, 3>& d) {
  RealBlockOperator op;
  op.kind = OperatorKind::laplacian;
  for (int n = 0; n <= d[0].max_degree(); ++n) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(block_dimension(n), block_dimension(n));
    for (const auto& dj : d) s -= dj.block(n) * dj.block(n);
    op.blocks.push_back(s);
  }
  return op;
}

/// Delta - c i D1 on complex coefficient blocks (c = 2: vertical Jacobi, c = 4: Hopf map).
inline ComplexBlockOperator twisted_laplacian(const RealBlockOperator& d1, double c) {
  ComplexBlockOperator op;
  op.kind = c == 2.0 ? OperatorKind::vertical_lambda : OperatorKind::hopf_map_lambda;
  const std::complex<double> ic{0.0, c};
  for (int n = 0; n <= d1.max_degree(); ++n) {
    const int m = block_dimension(n);
    Eigen::MatrixXcd b = static_cast<double>(n * (n + 2)) * Eigen::MatrixXcd::Identity(m, m);
    b -= ic * d1.block(n).cast<std::complex<double>>();
    op.blocks.push_back(b);
  }
  return op;
}

inline ComplexBlockOperator lambda_matrix(const RealBlockOperator& d1) { return twisted_laplacian(d1, 2.0); }
inline ComplexBlockOperator lambda4_matrix(const RealBlockOperator& d1) { return twisted_laplacian(d1, 4.0); }

/// Frame components of the rough Laplacian of X = sum_k f_k sigma_k:
///   (nabla* nabla X)_l = (Delta + 2) f_l - 2 sum_{j,k} eps_{jkl} sigma_j(f_k),
/// from the product rule for nabla* nabla (lambda X) with nabla* nabla sigma_k = 2 sigma_k.
inline Eigen::MatrixXd rough_laplacian_field_block(const std::array<RealBlockOperator, 3>& d, int n, double shift = 0.0) {
  const int m = block_dimension(n);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(3 * m, 3 * m);
  for (int l = 0; l < 3; ++l) {
    b.block(l * m, l * m, m, m) += (n * (n + 2) + 2.0 - shift) * Eigen::MatrixXd::Identity(m, m);
    for (int k = 0; k < 3; ++k) {
      for (int j = 0; j < 3; ++j) {
        const int e = levi_civita(j, k, l);
        if (e != 0) b.block(l * m, k * m, m, m) -= 2.0 * e * d[static_cast<std::size_t>(j)].block(n);
      }
    }
  }
  return b;
}

inline RealBlockOperator rough_laplacian_field_operator(const std::array<RealBlockOperator, 3>& d, double shift = 0.0) {
  RealBlockOperator op;
  op.kind = shift == 0.0 ? OperatorKind::field_rough_laplacian : OperatorKind::identity_jacobi;
  op.components = 3;
  for (int n = 0; n <= d[0].max_degree(); ++n) op.blocks.push_back(rough_laplacian_field_block(d, n, shift));
  return op;
}

/// Jacobi operator of the identity map of S^3: nabla* nabla - 2.
inline RealBlockOperator identity_jacobi_operator(const std::array<RealBlockOperator, 3>& d) {
  return rough_laplacian_field_operator(d, 2.0);
}

/// Real symmetric embedding of a complex block operator, block by block. The
/// embedded matrix of Delta - c i D1 is [[Delta, c D1], [-c D1, Delta]] acting
/// on (f2, f3) for f = f2 + i f3.
inline Eigen::MatrixXd real_block(const Eigen::MatrixXcd& b) {
  const Eigen::Index m = b.rows();
  Eigen::MatrixXd e(2 * m, 2 * m);
  e << b.real(), -b.imag(), b.imag(), b.real();
  return e;
}

}  // namespace s3hopf
