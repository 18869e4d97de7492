#pragma once

// Quaternion arithmetic and the strong types used for points of S^3 = SU(2),
// tangent vectors, and elements of su(2) in the Pauli basis.
//
// Conventions (fixed for the whole library):
//   q = w + x i + y j + z k, ambient coordinates (x0, x1, x2, x3) = (w, x, y, z);
//   i, j, k correspond to the Pauli matrices P1, P2, P3;
//   complex coordinates of the Pauli correspondence are z1 = w + i x, z2 = z + i y.

#include <array>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace s3hopf {

/// Raised when an input violates a documented precondition.
class precondition_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct Quaternion {
  double w = 0.0, x = 0.0, y = 0.0, z = 0.0;

  constexpr Quaternion() = default;
  constexpr Quaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}

  static constexpr Quaternion one() { return {1, 0, 0, 0}; }
  static constexpr Quaternion i() { return {0, 1, 0, 0}; }
  static constexpr Quaternion j() { return {0, 0, 1, 0}; }
  static constexpr Quaternion k() { return {0, 0, 0, 1}; }
  static constexpr Quaternion imaginary(double a, double b, double c) { return {0, a, b, c}; }

  constexpr double operator[](int a) const {
    return a == 0 ? w : a == 1 ? x : a == 2 ? y : z;
  }
  constexpr std::array<double, 4> coords() const { return {w, x, y, z}; }

  constexpr Quaternion operator+(const Quaternion& o) const { return {w + o.w, x + o.x, y + o.y, z + o.z}; }
  constexpr Quaternion operator-(const Quaternion& o) const { return {w - o.w, x - o.x, y - o.y, z - o.z}; }
  constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }
  constexpr Quaternion operator*(double s) const { return {w * s, x * s, y * s, z * s}; }
  friend constexpr Quaternion operator*(double s, const Quaternion& q) { return q * s; }

  // Hamilton product.
  constexpr Quaternion operator*(const Quaternion& o) const {
    return {w * o.w - x * o.x - y * o.y - z * o.z,
            w * o.x + x * o.w + y * o.z - z * o.y,
            w * o.y - x * o.z + y * o.w + z * o.x,
            w * o.z + x * o.y - y * o.x + z * o.w};
  }

  constexpr Quaternion conj() const { return {w, -x, -y, -z}; }
  constexpr double norm2() const { return w * w + x * x + y * y + z * z; }
  double norm() const { return std::sqrt(norm2()); }
  constexpr Quaternion imag() const { return {0, x, y, z}; }
};

constexpr double dot(const Quaternion& a, const Quaternion& b) {
  return a.w * b.w + a.x * b.x + a.y * b.y + a.z * b.z;
}

constexpr Quaternion quat_mul(const Quaternion& a, const Quaternion& b) { return a * b; }

/// a b - b a
constexpr Quaternion commutator(const Quaternion& a, const Quaternion& b) { return a * b - b * a; }

/// exp of a purely imaginary quaternion v (the real part of v is ignored).
inline Quaternion exp_imaginary(const Quaternion& v) {
  const Quaternion u = v.imag();
  const double th = u.norm();
  if (th == 0.0) return Quaternion::one();
  const double s = std::sin(th) / th;
  return {std::cos(th), s * u.x, s * u.y, s * u.z};
}

/// Element a1 P1 + a2 P2 + a3 P3 of su(2), stored by its Pauli coefficients.
struct AlgebraVector {
  std::array<double, 3> a{0.0, 0.0, 0.0};

  constexpr AlgebraVector() = default;
  constexpr AlgebraVector(double a1, double a2, double a3) : a{a1, a2, a3} {}

  constexpr double operator[](int l) const { return a[static_cast<std::size_t>(l)]; }
  constexpr double& operator[](int l) { return a[static_cast<std::size_t>(l)]; }

  constexpr Quaternion as_quaternion() const { return {0, a[0], a[1], a[2]}; }
  static constexpr AlgebraVector from_quaternion(const Quaternion& q) { return {q.x, q.y, q.z}; }

  constexpr AlgebraVector operator+(const AlgebraVector& o) const { return {a[0] + o.a[0], a[1] + o.a[1], a[2] + o.a[2]}; }
  constexpr AlgebraVector operator-(const AlgebraVector& o) const { return {a[0] - o.a[0], a[1] - o.a[1], a[2] - o.a[2]}; }
  constexpr AlgebraVector operator*(double s) const { return {a[0] * s, a[1] * s, a[2] * s}; }
  constexpr double dot(const AlgebraVector& o) const { return a[0] * o.a[0] + a[1] * o.a[1] + a[2] * o.a[2]; }
  double norm() const { return std::sqrt(dot(*this)); }
};

/// Lie bracket in su(2); satisfies [P_j, P_k] = 2 eps_{jkl} P_l.
constexpr AlgebraVector bracket(const AlgebraVector& u, const AlgebraVector& v) {
  return AlgebraVector::from_quaternion(commutator(u.as_quaternion(), v.as_quaternion()));
}

/// A point of S^3. Construction normalizes; inputs far from the sphere are rejected.
class UnitQuaternion {
 public:
  static constexpr double kRenormalizeTol = 1e-14;
  static constexpr double kAcceptTol = 1e-6;

  UnitQuaternion() : q_(Quaternion::one()) {}

  explicit UnitQuaternion(const Quaternion& q) : q_(q) {
    const double n2 = q.norm2();
    if (!(std::abs(1.0 - n2) <= kAcceptTol)) {
      throw precondition_error("UnitQuaternion: |q|^2 = " + std::to_string(n2) + " is not 1");
    }
    if (std::abs(1.0 - n2) > kRenormalizeTol) q_ = q * (1.0 / std::sqrt(n2));
  }

  /// Projects any nonzero quaternion onto S^3.
  static UnitQuaternion normalized(const Quaternion& q) {
    const double n = q.norm();
    if (n == 0.0) throw precondition_error("UnitQuaternion::normalized: zero quaternion");
    return UnitQuaternion(q * (1.0 / n));
  }

  const Quaternion& q() const { return q_; }
  operator const Quaternion&() const { return q_; }
  UnitQuaternion inverse() const { return UnitQuaternion(q_.conj()); }

  std::complex<double> z1() const { return {q_.w, q_.x}; }
  std::complex<double> z2() const { return {q_.z, q_.y}; }

  static UnitQuaternion from_complex(std::complex<double> z1, std::complex<double> z2) {
    return UnitQuaternion(Quaternion{z1.real(), z1.imag(), z2.imag(), z2.real()});
  }

 private:
  Quaternion q_;
};

inline UnitQuaternion operator*(const UnitQuaternion& a, const UnitQuaternion& b) {
  return UnitQuaternion::normalized(a.q() * b.q());
}

/// A tangent vector to S^3, stored in ambient R^4 coordinates.
class TangentVector {
 public:
  static constexpr double kTangencyTol = 1e-12;

  /// Rejects vectors whose normal component exceeds the tolerance.
  TangentVector(const UnitQuaternion& base, const Quaternion& v) : base_(base), v_(v) {
    const double n = dot(v, base.q());
    if (std::abs(n) > kTangencyTol * std::max(1.0, v.norm())) {
      throw precondition_error("TangentVector: vector is not tangent at base point");
    }
    v_ = v - base.q() * n;
  }

  /// Orthogonal projection of an arbitrary ambient vector onto T_x S^3.
  static TangentVector project(const UnitQuaternion& base, const Quaternion& v) {
    return TangentVector(base, v - base.q() * dot(v, base.q()), Unchecked{});
  }

  const UnitQuaternion& base() const { return base_; }
  const Quaternion& vec() const { return v_; }

 private:
  struct Unchecked {};
  TangentVector(const UnitQuaternion& base, const Quaternion& v, Unchecked) : base_(base), v_(v) {}

  UnitQuaternion base_;
  Quaternion v_;
};

}  // namespace s3hopf
