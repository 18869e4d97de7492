#pragma once

// Harmonic basis + quadrature grid + frame derivative matrices, bundled so that
// field operations can move between coefficients and nodal values.

#include <Eigen/Dense>
#include <array>
#include <memory>
#include <string>

#include "s3hopf/harmonic_basis.hpp"
#include "s3hopf/operators.hpp"
#include "s3hopf/parallel.hpp"
#include "s3hopf/quadrature.hpp"

namespace s3hopf {

inline std::array<RealBlockOperator, 3> assemble_frame_derivatives(const HarmonicBasis& basis) {
  return {assemble_derivative(0, basis), assemble_derivative(1, basis), assemble_derivative(2, basis)};
}

class Discretization {
 public:
  Discretization(int max_degree, GridLevels levels)
      : Discretization(HarmonicBasis(max_degree), hopf_grid(levels)) {}

  Discretization(HarmonicBasis basis, QuadratureGrid grid)
      : basis_(std::move(basis)), grid_(std::move(grid)), d_(assemble_frame_derivatives(basis_)) {
    const int nodes = grid_.size();
    b_.resize(nodes, basis_.dimension());
    parallel_for(nodes, [&](int i) { b_.row(i) = basis_.evaluate_all(grid_.nodes()[static_cast<std::size_t>(i)]).transpose(); });
    w_ = Eigen::Map<const Eigen::VectorXd>(grid_.weights().data(), nodes);
    bw_ = b_.transpose() * w_.asDiagonal();
  }

  const HarmonicBasis& basis() const { return basis_; }
  const QuadratureGrid& grid() const { return grid_; }
  int max_degree() const { return basis_.max_degree(); }
  int dimension() const { return basis_.dimension(); }
  int node_count() const { return grid_.size(); }
  const Quaternion& node(int i) const { return grid_.nodes()[static_cast<std::size_t>(i)]; }

  /// nodes x dimension matrix of basis values.
  const Eigen::MatrixXd& nodal_matrix() const { return b_; }
  const Eigen::VectorXd& weights() const { return w_; }
  const RealBlockOperator& derivative(int j) const { return d_.at(static_cast<std::size_t>(j)); }
  const std::array<RealBlockOperator, 3>& derivatives() const { return d_; }

  /// Grid resolves products of two degree-N functions (and one more order).
  bool resolves_products() const { return grid_.exactness() >= 2 * max_degree() + 2; }

  Eigen::VectorXd evaluate(const Eigen::VectorXd& coeffs) const {
    check(coeffs);
    return b_ * coeffs;
  }

  double evaluate_at(const Eigen::VectorXd& coeffs, const Quaternion& x) const { return basis_.evaluate(coeffs, x); }

  /// L^2 projection of nodal values onto the basis. Exact on the span of the
  /// basis only if the grid integrates degree 2N exactly, which is required.
  Eigen::VectorXd project(const Eigen::VectorXd& nodal) const {
    if (grid_.exactness() < 2 * max_degree()) {
      throw precondition_error("project: grid exactness " + std::to_string(grid_.exactness()) +
                               " is below 2N = " + std::to_string(2 * max_degree()));
    }
    if (nodal.size() != node_count()) throw precondition_error("project: nodal vector has wrong length");
    return bw_ * nodal;
  }

  double integrate(const Eigen::VectorXd& nodal) const {
    if (nodal.size() != node_count()) throw precondition_error("integrate: nodal vector has wrong length");
    return w_.dot(nodal);
  }

  Eigen::VectorXd apply_derivative(int j, const Eigen::VectorXd& coeffs) const {
    check(coeffs);
    return derivative(j).apply(coeffs);
  }

  /// Laplace-Beltrami operator (nonnegative convention), diagonal on the basis.
  Eigen::VectorXd apply_laplacian(const Eigen::VectorXd& coeffs) const {
    check(coeffs);
    Eigen::VectorXd out(coeffs.size());
    for (int n = 0; n <= max_degree(); ++n) {
      out.segment(block_offset(n), block_dimension(n)) = (n * (n + 2.0)) * coeffs.segment(block_offset(n), block_dimension(n));
    }
    return out;
  }

 private:
  void check(const Eigen::VectorXd& c) const {
    if (c.size() != dimension()) throw precondition_error("Discretization: coefficient vector has wrong length");
  }

  HarmonicBasis basis_;
  QuadratureGrid grid_;
  std::array<RealBlockOperator, 3> d_;
  Eigen::MatrixXd b_;
  Eigen::VectorXd w_;
  Eigen::MatrixXd bw_;
};

}  // namespace s3hopf
