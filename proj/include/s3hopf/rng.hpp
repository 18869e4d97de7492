#pragma once

// Portable seeded random numbers. std::normal_distribution is
// implementation-defined, so normals are drawn by Box-Muller from raw
// mt19937_64 output to keep every randomized suite bit-reproducible.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "s3hopf/quaternion.hpp"

namespace s3hopf {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
    has_spare_ = true;
    return r * std::cos(2.0 * std::numbers::pi * u2);
  }

  Quaternion normal_quaternion() { return {normal(), normal(), normal(), normal()}; }

  UnitQuaternion unit_quaternion() {
    for (;;) {
      const Quaternion q = normal_quaternion();
      if (q.norm2() > 1e-12) return UnitQuaternion::normalized(q);
    }
  }

  AlgebraVector unit_imaginary() {
    for (;;) {
      const AlgebraVector v{normal(), normal(), normal()};
      const double n = v.norm();
      if (n > 1e-6) return v * (1.0 / n);
    }
  }

  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace s3hopf
