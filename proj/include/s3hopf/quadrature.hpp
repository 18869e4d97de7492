#pragma once

// Product quadrature on S^3 in Hopf coordinates
//   z1 = cos(eta) e^{i xi1},  z2 = sin(eta) e^{i xi2},  eta in [0, pi/2],
// with dvol = sin(eta) cos(eta) d eta d xi1 d xi2 = (1/4) dt d xi1 d xi2 for
// t = cos(2 eta). Gauss-Legendre in t, uniform trapezoid in xi1 and xi2.
//
// Node ordering: t index outermost, then xi1, then xi2 innermost; xi_m = 2 pi m / L.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <utility>
#include <vector>

#include "s3hopf/quaternion.hpp"

namespace s3hopf {

/// Gauss-Legendre nodes (ascending) and weights on [-1, 1].
inline std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int count) {
  if (count < 1) throw precondition_error("gauss_legendre: need at least one node");
  std::vector<double> x(static_cast<std::size_t>(count)), w(static_cast<std::size_t>(count));
  const int half = (count + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (count + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= count; ++k) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = count * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    if (count == 1) {
      z = 0.0;
      dp = 1.0;
    }
    const double wi = 2.0 / ((1.0 - z * z) * dp * dp);
    x[static_cast<std::size_t>(i)] = -z;
    x[static_cast<std::size_t>(count - 1 - i)] = z;
    w[static_cast<std::size_t>(i)] = wi;
    w[static_cast<std::size_t>(count - 1 - i)] = wi;
  }
  return {x, w};
}

struct GridLevels {
  int t = 8;
  int xi1 = 16;
  int xi2 = 16;
  friend bool operator==(const GridLevels&, const GridLevels&) = default;
};

class QuadratureGrid {
 public:
  QuadratureGrid(GridLevels levels, std::vector<Quaternion> nodes, std::vector<double> weights)
      : levels_(levels), nodes_(std::move(nodes)), weights_(std::move(weights)) {}

  const GridLevels& levels() const { return levels_; }
  const std::vector<Quaternion>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  int size() const { return static_cast<int>(nodes_.size()); }

  /// Largest total polynomial degree integrated exactly.
  int exactness() const { return exactness_for(levels_); }

  static int exactness_for(const GridLevels& l) {
    // Degree-D monomials are polynomials of degree D/2 in t and trigonometric
    // of order <= D in each xi.
    return std::min({4 * l.t - 2, l.xi1 - 1, l.xi2 - 1});
  }

  template <class F>
  double integrate(F&& f) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * f(nodes_[i]);
    return s;
  }

 private:
  GridLevels levels_;
  std::vector<Quaternion> nodes_;
  std::vector<double> weights_;
};

inline QuadratureGrid hopf_grid(GridLevels levels) {
  if (levels.t < 1 || levels.xi1 < 1 || levels.xi2 < 1) throw precondition_error("hopf_grid: levels must be >= 1");
  const auto [tn, tw] = gauss_legendre(levels.t);
  std::vector<Quaternion> nodes;
  std::vector<double> weights;
  nodes.reserve(static_cast<std::size_t>(levels.t * levels.xi1 * levels.xi2));
  const double dxi1 = 2.0 * std::numbers::pi / levels.xi1;
  const double dxi2 = 2.0 * std::numbers::pi / levels.xi2;
  for (int a = 0; a < levels.t; ++a) {
    const double t = tn[static_cast<std::size_t>(a)];
    const double ce = std::sqrt(0.5 * (1.0 + t));
    const double se = std::sqrt(0.5 * (1.0 - t));
    const double w = 0.25 * tw[static_cast<std::size_t>(a)] * dxi1 * dxi2;
    for (int b = 0; b < levels.xi1; ++b) {
      const double xi1 = b * dxi1;
      for (int c = 0; c < levels.xi2; ++c) {
        const double xi2 = c * dxi2;
        // z1 = w + i x, z2 = z + i y.
        nodes.push_back({ce * std::cos(xi1), ce * std::sin(xi1), se * std::sin(xi2), se * std::cos(xi2)});
        weights.push_back(w);
      }
    }
  }
  return QuadratureGrid(levels, std::move(nodes), std::move(weights));
}

/// Smallest grid whose exactness is at least the requested degree.
inline GridLevels levels_for_exactness(int degree) {
  const int l = std::max(1, degree + 1);
  return {std::max(1, (degree + 2 + 3) / 4), l, l};
}

}  // namespace s3hopf
