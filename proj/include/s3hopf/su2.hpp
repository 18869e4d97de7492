#pragma once

// Left-invariant frame, Hopf map, and the translations mu (Maurer-Cartan)
// and eta (its right-invariant analogue) on S^3 = SU(2).

#include <array>

#include "s3hopf/quaternion.hpp"

namespace s3hopf {

inline constexpr std::array<Quaternion, 3> kImaginaryUnits{Quaternion::i(), Quaternion::j(), Quaternion::k()};

/// Totally antisymmetric symbol on {0,1,2}.
constexpr int levi_civita(int j, int k, int l) {
  if (j == k || k == l || j == l) return 0;
  return ((j == 0 && k == 1) || (j == 1 && k == 2) || (j == 2 && k == 0)) ? 1 : -1;
}

/// sigma_j(x) = x e_j with (e1, e2, e3) = (i, j, k). sigma_1 is the canonical
/// Hopf field, x -> i x in the complex coordinates (z1, z2).
inline std::array<TangentVector, 3> frame_at(const UnitQuaternion& x) {
  return {TangentVector::project(x, x.q() * Quaternion::i()),
          TangentVector::project(x, x.q() * Quaternion::j()),
          TangentVector::project(x, x.q() * Quaternion::k())};
}

/// Ambient vector x e_j without the TangentVector wrapper (hot loops).
constexpr Quaternion frame_vector(const Quaternion& x, int j) { return x * kImaginaryUnits[static_cast<std::size_t>(j)]; }

/// phi(z1, z2) = (2 conj(z1) z2, |z2|^2 - |z1|^2) in C x R = R^3.
inline std::array<double, 3> hopf_map(const UnitQuaternion& x) {
  const std::complex<double> z1 = x.z1(), z2 = x.z2();
  const std::complex<double> u = 2.0 * std::conj(z1) * z2;
  return {u.real(), u.imag(), std::norm(z2) - std::norm(z1)};
}

/// mu(Y) = x^{-1} Y in Pauli coordinates.
inline AlgebraVector mu_translate(const UnitQuaternion& x, const TangentVector& y) {
  if (dot(x.q() - y.base().q(), x.q() - y.base().q()) > 1e-24) {
    throw precondition_error("mu_translate: tangent vector is based at a different point");
  }
  return AlgebraVector::from_quaternion(x.q().conj() * y.vec());
}

/// eta(Y) = Y x^{-1} in Pauli coordinates.
inline AlgebraVector eta_translate(const UnitQuaternion& x, const TangentVector& y) {
  if (dot(x.q() - y.base().q(), x.q() - y.base().q()) > 1e-24) {
    throw precondition_error("eta_translate: tangent vector is based at a different point");
  }
  return AlgebraVector::from_quaternion(y.vec() * x.q().conj());
}

/// Ad(x) v = x v x^{-1}.
inline AlgebraVector adjoint(const Quaternion& x, const AlgebraVector& v) {
  return AlgebraVector::from_quaternion(x * v.as_quaternion() * x.conj());
}

/// Coordinates of eta(sigma_1)(x) = x P1 x^{-1} in the ordered basis
/// (P2, -P3, -P1). With the Pauli correspondence z1 = w + i x, z2 = z + i y this
/// reproduces hopf_map exactly.
inline std::array<double, 3> hopf_coordinates_of_eta(const AlgebraVector& a) { return {a[1], -a[2], -a[0]}; }

}  // namespace s3hopf
