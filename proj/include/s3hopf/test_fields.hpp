#pragma once

// Named families of fields: Hopf fields, eigenvectors of the vertical Jacobi
// operator at sigma_1, and seeded random unit fields and variations.
// Everything is built from pointwise formulas, evaluated at the grid nodes and
// projected; a formula that does not fit the basis degree is rejected.

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "s3hopf/field.hpp"
#include "s3hopf/rng.hpp"
#include "s3hopf/su2.hpp"

namespace s3hopf {

inline constexpr double kProjectionReproduceTol = 1e-10;

using FrameFunction = std::function<Eigen::Vector3d(const Quaternion&)>;

/// Projects a pointwise field; throws if the projection does not reproduce it.
inline FramedField field_from_function(const Discretization& disc, const FrameFunction& fn, Provenance prov = {}) {
  Eigen::MatrixX3d nodal(disc.node_count(), 3);
  for (int i = 0; i < disc.node_count(); ++i) nodal.row(i) = fn(disc.node(i)).transpose();
  FramedField r = project_field(disc, nodal);
  const double err = (nodal_values(disc, r) - nodal).cwiseAbs().maxCoeff();
  if (err > kProjectionReproduceTol * std::max(1.0, nodal.cwiseAbs().maxCoeff())) {
    throw precondition_error("field '" + prov.generator + "' is not representable at degree " +
                             std::to_string(disc.max_degree()) + " (nodal error " + std::to_string(err) + ")");
  }
  r.provenance = std::move(prov);
  return r;
}

namespace detail {
inline std::string join(std::initializer_list<double> xs) {
  std::ostringstream os;
  os.precision(17);
  bool first = true;
  for (double x : xs) {
    os << (first ? "" : ",") << x;
    first = false;
  }
  return os.str();
}

inline Eigen::Vector3d unit_axis(const Eigen::Vector3d& u, const char* what) {
  const double n = u.norm();
  if (!(n > 1e-12)) throw precondition_error(std::string(what) + ": zero axis");
  return u / n;
}
}  // namespace detail

/// Left-invariant field x -> x u (frame components u).
inline FramedField hopf_left(const Discretization& disc, const Eigen::Vector3d& axis) {
  const Eigen::Vector3d u = detail::unit_axis(axis, "hopf_left");
  // constant coefficients only, so derivatives vanish exactly
  const double b0 = disc.basis().evaluate_all(Quaternion::one())(0);
  FramedField r = FramedField::zero(disc.dimension());
  for (int l = 0; l < 3; ++l) r[l](0) = u(l) / b0;
  r.provenance = {"hopf_left", 0, detail::join({u(0), u(1), u(2)})};
  return mark_unit(disc, r);
}

/// Right-invariant field x -> u x, i.e. frame components Ad(x^{-1}) u.
inline FramedField hopf_right(const Discretization& disc, const Eigen::Vector3d& axis) {
  const AlgebraVector u = to_algebra(detail::unit_axis(axis, "hopf_right"));
  FramedField r = field_from_function(disc, [&](const Quaternion& x) { return to_eigen(adjoint(x.conj(), u)); },
                                      {"hopf_right", 0, detail::join({u[0], u[1], u[2]})});
  return mark_unit(disc, r);
}

/// Gradient of x -> <a, x> on S^3, frame components <a, x e_j>.
inline FramedField conformal_gradient(const Discretization& disc, const Eigen::Vector4d& a) {
  const Quaternion qa{a(0), a(1), a(2), a(3)};
  return field_from_function(
      disc,
      [&](const Quaternion& x) {
        return Eigen::Vector3d(dot(qa, frame_vector(x, 0)), dot(qa, frame_vector(x, 1)), dot(qa, frame_vector(x, 2)));
      },
      {"conformal_gradient", 0, detail::join({a(0), a(1), a(2), a(3)})});
}

/// Part of the conformal gradient orthogonal to sigma_1; eigenvalue 1 of the vertical Jacobi operator.
inline VariationField conformal_gradient_horizontal(const Discretization& disc, const Eigen::Vector4d& a) {
  if (!(a.norm() > 1e-12)) throw precondition_error("conformal_gradient_horizontal: zero vector");
  VariationField v = VariationField::from_framed(conformal_gradient(disc, a));
  v.provenance.generator = "conformal_gradient_horizontal";
  return v;
}

/// Horizontal lift through the Hopf map of the conformal gradient of b on S^2,
/// scaled by 1/2; eigenvalue 4 of the vertical Jacobi operator.
inline VariationField conformal_lift(const Discretization& disc, const Eigen::Vector3d& b) {
  if (!(b.norm() > 1e-12)) throw precondition_error("conformal_lift: zero vector");
  const AlgebraVector bv = to_algebra(b);
  const FramedField r = field_from_function(
      disc,
      [&](const Quaternion& x) {
        const AlgebraVector c = adjoint(x.conj(), bv);
        return Eigen::Vector3d(0.0, -0.5 * c[2], 0.5 * c[1]);
      },
      {"conformal_lift", 0, detail::join({b(0), b(1), b(2)})});
  return VariationField::from_framed(r);
}

/// Nodally normalizes a pointwise field and projects it; the result denotes its
/// own normalization and records the measured unit deviation.
inline FramedField normalized_field(const Discretization& disc, const FrameFunction& fn, Provenance prov) {
  Eigen::MatrixX3d nodal(disc.node_count(), 3);
  for (int i = 0; i < disc.node_count(); ++i) nodal.row(i) = fn(disc.node(i)).normalized().transpose();
  FramedField r = project_field(disc, nodal);
  r.provenance = std::move(prov);
  return mark_normalized(disc, r);
}

/// A Hopf field plus a random polynomial perturbation of degree <= max_degree,
/// normalized nodally and projected. The base is left-invariant, or right-invariant
/// (frame components Ad(x^{-1}) u, degree 2) with probability 1/2 when
/// max_degree >= 2. The perturbation Q has max nodal norm 1 and enters with
/// weight in [0.2, 0.5], so the field never vanishes and stays homotopic to its
/// base.
inline FramedField random_unit(const Discretization& disc, int max_degree, std::uint64_t seed) {
  if (max_degree < 1 || max_degree > disc.max_degree()) throw precondition_error("random_unit: degree out of range");
  Rng rng(seed);
  const bool right = max_degree >= 2 && rng.uniform() < 0.5;
  const AlgebraVector u = rng.unit_imaginary();
  const double weight = rng.uniform(0.2, 0.5);
  Eigen::MatrixX3d q = Eigen::MatrixX3d::Zero(disc.dimension(), 3);
  for (int n = 0; n <= max_degree; ++n)
    for (int i = block_offset(n); i < block_offset(n) + block_dimension(n); ++i)
      for (int l = 0; l < 3; ++l) q(i, l) = rng.normal() / (n + 1.0);
  q /= (disc.nodal_matrix() * q).rowwise().norm().maxCoeff();
  const HarmonicBasis& basis = disc.basis();
  const Eigen::MatrixX3d qb = q.topRows(basis_dimension(max_degree));
  auto base = [&](const Quaternion& x) { return right ? to_eigen(adjoint(x.conj(), u)) : to_eigen(u); };
  return normalized_field(
      disc,
      [&](const Quaternion& x) {
        const Eigen::VectorXd b = basis.evaluate_all(x).head(qb.rows());
        return Eigen::Vector3d(base(x) + weight * (b.transpose() * qb).transpose());
      },
      {"random_unit", seed, std::string("max_degree=") + std::to_string(max_degree) + ";base=" + (right ? "right" : "left")});
}

/// Gaussian coefficients for f2, f3 on blocks 0..max_degree, block n scaled by 1/(n+1).
inline VariationField random_variation(const Discretization& disc, int max_degree, std::uint64_t seed) {
  if (max_degree < 0 || max_degree > disc.max_degree()) throw precondition_error("random_variation: degree out of range");
  Rng rng(seed);
  VariationField v;
  v.f = Eigen::VectorXcd::Zero(disc.dimension());
  for (int n = 0; n <= max_degree; ++n)
    for (int i = block_offset(n); i < block_offset(n) + block_dimension(n); ++i) {
      const double re = rng.normal(), im = rng.normal();
      v.f(i) = std::complex<double>(re, im) / (n + 1.0);
    }
  v.provenance = {"random_variation", seed, "max_degree=" + std::to_string(max_degree)};
  return v;
}

/// Random real field (all three components), same coefficient law as random_variation.
inline FramedField random_field(const Discretization& disc, int max_degree, std::uint64_t seed) {
  if (max_degree < 0 || max_degree > disc.max_degree()) throw precondition_error("random_field: degree out of range");
  Rng rng(seed);
  FramedField r = FramedField::zero(disc.dimension());
  for (int n = 0; n <= max_degree; ++n)
    for (int i = block_offset(n); i < block_offset(n) + block_dimension(n); ++i)
      for (int l = 0; l < 3; ++l) r[l](i) = rng.normal() / (n + 1.0);
  r.provenance = {"random_field", seed, "max_degree=" + std::to_string(max_degree)};
  return r;
}

/// sigma_1 + amplitude (x0 sigma_2 - x1 sigma_3), flagged as denoting its normalization.
inline FramedField perturbed_hopf(const Discretization& disc, double amplitude) {
  FramedField r = field_from_function(
      disc, [&](const Quaternion& x) { return Eigen::Vector3d(1.0, amplitude * x.w, -amplitude * x.x); },
      {"perturbed_hopf", 0, detail::join({amplitude})});
  return mark_normalized(disc, r);
}

/// Pullback by the isometry y -> u y v: frame components Ad(v) f(u y v).
inline FramedField pullback(const Discretization& disc, const FramedField& x, const Quaternion& u, const Quaternion& v) {
  FramedField r = field_from_function(
      disc,
      [&](const Quaternion& y) {
        const Eigen::VectorXd b = disc.basis().evaluate_all(u * y * v);
        const Eigen::Vector3d f = (b.transpose() * x.matrix()).transpose();
        return to_eigen(adjoint(v, to_algebra(f)));
      },
      x.provenance);
  r.unit = x.unit;
  r.unit_deviation = x.unit_deviation;
  return r;
}

enum class TestFieldKind { hopf_left, hopf_right, conformal_gradient_horizontal, conformal_lift, random_unit, random_variation };

inline TestFieldKind parse_test_field_kind(const std::string& s) {
  if (s == "hopf_left") return TestFieldKind::hopf_left;
  if (s == "hopf_right") return TestFieldKind::hopf_right;
  if (s == "conformal_gradient_horizontal") return TestFieldKind::conformal_gradient_horizontal;
  if (s == "conformal_lift") return TestFieldKind::conformal_lift;
  if (s == "random_unit") return TestFieldKind::random_unit;
  if (s == "random_variation") return TestFieldKind::random_variation;
  throw precondition_error("unknown test field kind '" + s + "'");
}

/// Dispatch by kind. Parameters: axis (3) for Hopf fields, a (4) or b (3) for
/// the conformal families, {max_degree} for the random ones.
inline std::variant<FramedField, VariationField> generate_test_fields(const Discretization& disc, TestFieldKind kind,
                                                                      const std::vector<double>& params,
                                                                      std::uint64_t seed = 0) {
  auto need = [&](std::size_t n) {
    if (params.size() != n) throw precondition_error("generate_test_fields: expected " + std::to_string(n) + " parameters");
  };
  switch (kind) {
    case TestFieldKind::hopf_left: need(3); return hopf_left(disc, {params[0], params[1], params[2]});
    case TestFieldKind::hopf_right: need(3); return hopf_right(disc, {params[0], params[1], params[2]});
    case TestFieldKind::conformal_gradient_horizontal:
      need(4);
      return conformal_gradient_horizontal(disc, {params[0], params[1], params[2], params[3]});
    case TestFieldKind::conformal_lift: need(3); return conformal_lift(disc, {params[0], params[1], params[2]});
    case TestFieldKind::random_unit: need(1); return random_unit(disc, static_cast<int>(params[0]), seed);
    case TestFieldKind::random_variation: need(1); return random_variation(disc, static_cast<int>(params[0]), seed);
  }
  throw precondition_error("generate_test_fields: bad kind");
}

}  // namespace s3hopf
