#pragma once

// Vector fields on S^3 in the left-invariant frame: X = f1 sigma_1 + f2 sigma_2 + f3 sigma_3,
// each f_l stored as harmonic-basis coefficients.
//
// Unit fields come in two flavours. An `exact` unit field has |f| = 1 at every
// grid node to within the acceptance tolerance. A `normalized` field denotes the
// unit field f / |f|; its coefficients hold a nonvanishing polynomial whose
// nodal normalization is the field. Functionals on unit fields always evaluate
// f / |f|, which for exact fields is f itself up to rounding.

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <cstdint>
#include <limits>
#include <string>

#include "s3hopf/discretization.hpp"

namespace s3hopf {

enum class UnitMode { none, exact, normalized };

inline std::string to_string(UnitMode m) {
  switch (m) {
    case UnitMode::none: return "none";
    case UnitMode::exact: return "exact";
    case UnitMode::normalized: return "normalized";
  }
  return "none";
}

inline UnitMode parse_unit_mode(const std::string& s) {
  if (s == "none") return UnitMode::none;
  if (s == "exact") return UnitMode::exact;
  if (s == "normalized") return UnitMode::normalized;
  throw precondition_error("unknown unit mode '" + s + "'");
}

struct Provenance {
  std::string generator;
  std::uint64_t seed = 0;
  std::string parameters;
};

inline Eigen::Vector3d to_eigen(const AlgebraVector& v) { return {v[0], v[1], v[2]}; }
inline AlgebraVector to_algebra(const Eigen::Vector3d& v) { return {v(0), v(1), v(2)}; }

inline constexpr double kUnitTolerance = 1e-6;
inline constexpr double kNormalizableMinNorm = 1e-3;

struct FramedField {
  std::array<Eigen::VectorXd, 3> f;
  UnitMode unit = UnitMode::none;
  double unit_deviation = std::numeric_limits<double>::quiet_NaN();  // max nodal |1 - |f|^2|, when measured
  Provenance provenance;

  static FramedField zero(int dimension) {
    FramedField z;
    for (auto& c : z.f) c = Eigen::VectorXd::Zero(dimension);
    return z;
  }

  int dimension() const { return static_cast<int>(f[0].size()); }
  bool is_unit() const { return unit != UnitMode::none; }
  const Eigen::VectorXd& operator[](int l) const { return f[static_cast<std::size_t>(l)]; }
  Eigen::VectorXd& operator[](int l) { return f[static_cast<std::size_t>(l)]; }

  /// dimension x 3 coefficient matrix.
  Eigen::MatrixX3d matrix() const {
    Eigen::MatrixX3d m(dimension(), 3);
    for (int l = 0; l < 3; ++l) m.col(l) = f[static_cast<std::size_t>(l)];
    return m;
  }

  static FramedField from_matrix(const Eigen::MatrixX3d& m) {
    FramedField r;
    for (int l = 0; l < 3; ++l) r.f[static_cast<std::size_t>(l)] = m.col(l);
    return r;
  }

  // Linear combinations drop the unit flag.
  FramedField operator+(const FramedField& o) const { return from_matrix(matrix() + o.matrix()); }
  FramedField operator-(const FramedField& o) const { return from_matrix(matrix() - o.matrix()); }
  FramedField operator*(double s) const { return from_matrix(matrix() * s); }
};

/// A field pointwise orthogonal to sigma_1, as f = f2 + i f3.
struct VariationField {
  Eigen::VectorXcd f;
  Provenance provenance;

  int dimension() const { return static_cast<int>(f.size()); }

  FramedField as_framed() const {
    FramedField r = FramedField::zero(dimension());
    r[1] = f.real();
    r[2] = f.imag();
    r.provenance = provenance;
    return r;
  }

  /// Drops the sigma_1 component.
  static VariationField from_framed(const FramedField& x) {
    VariationField v;
    v.f.resize(x.dimension());
    v.f.real() = x[1];
    v.f.imag() = x[2];
    v.provenance = x.provenance;
    return v;
  }
};

/// nodes x 3 matrix of frame components.
inline Eigen::MatrixX3d nodal_values(const Discretization& disc, const FramedField& x) {
  if (x.dimension() != disc.dimension()) throw precondition_error("nodal_values: field and discretization differ in degree");
  return disc.nodal_matrix() * x.matrix();
}

/// Projects nodal frame components (nodes x 3) onto the basis.
inline FramedField project_field(const Discretization& disc, const Eigen::MatrixX3d& nodal) {
  FramedField r;
  for (int l = 0; l < 3; ++l) r[l] = disc.project(nodal.col(l));
  return r;
}

inline double max_unit_deviation(const Discretization& disc, const FramedField& x) {
  const Eigen::MatrixX3d v = nodal_values(disc, x);
  return (Eigen::VectorXd::Ones(v.rows()) - v.rowwise().squaredNorm()).cwiseAbs().maxCoeff();
}

/// Flags x as an exact unit field; throws when a node deviates by more than tol.
inline FramedField mark_unit(const Discretization& disc, FramedField x, double tol = kUnitTolerance) {
  const double dev = max_unit_deviation(disc, x);
  if (!(dev < tol)) {
    throw precondition_error("field is not unit: max nodal |1 - |F|^2| = " + std::to_string(dev));
  }
  x.unit = UnitMode::exact;
  x.unit_deviation = dev;
  return x;
}

/// Flags x as denoting its nodal normalization. The polynomial must stay away from zero.
inline FramedField mark_normalized(const Discretization& disc, FramedField x) {
  const Eigen::MatrixX3d v = nodal_values(disc, x);
  const double min_norm = v.rowwise().norm().minCoeff();
  if (!(min_norm > kNormalizableMinNorm)) {
    throw precondition_error("field cannot be normalized: min nodal |F| = " + std::to_string(min_norm));
  }
  x.unit_deviation = (Eigen::VectorXd::Ones(v.rows()) - v.rowwise().squaredNorm()).cwiseAbs().maxCoeff();
  x.unit = x.unit_deviation < kUnitTolerance ? UnitMode::exact : UnitMode::normalized;
  return x;
}

inline void require_unit(const FramedField& x, const char* what) {
  if (!x.is_unit()) throw precondition_error(std::string(what) + ": field is not flagged unit");
}

}  // namespace s3hopf
