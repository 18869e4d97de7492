#pragma once

// Dense symmetric / Hermitian eigensolver by cyclic Jacobi rotations.
//
// A complex Hermitian matrix H = A + iB (m x m) is diagonalized through its
// real symmetric embedding [[A, -B], [B, A]] (2m x 2m), whose spectrum is the
// spectrum of H with every eigenvalue doubled. Complex eigenvectors are
// recovered as x + iy from embedded eigenvectors (x; y), keeping one of each
// pair {z, iz} by complex Gram-Schmidt.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "s3hopf/quaternion.hpp"

namespace s3hopf {

struct SymmetricEigen {
  Eigen::VectorXd values;   // ascending
  Eigen::MatrixXd vectors;  // columns, orthonormal
  int sweeps = 0;
};

struct HermitianEigen {
  Eigen::VectorXd values;    // ascending
  Eigen::MatrixXcd vectors;  // columns, orthonormal
  int sweeps = 0;
};

inline constexpr double kJacobiRelativeTol = 1e-13;
inline constexpr int kJacobiMaxSweeps = 100;

/// Cyclic Jacobi. Converges when the off-diagonal Frobenius norm drops
/// below kJacobiRelativeTol * ||M||_F.
inline SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& m_in, double symmetry_tol = 1e-12) {
  const Eigen::Index n = m_in.rows();
  if (m_in.cols() != n) throw precondition_error("symmetric_eigen: matrix is not square");
  const double scale = m_in.norm();
  if ((m_in - m_in.transpose()).norm() > symmetry_tol * std::max(1.0, scale)) {
    throw precondition_error("symmetric_eigen: matrix is not symmetric");
  }
  Eigen::MatrixXd a = 0.5 * (m_in + m_in.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  SymmetricEigen out;

  auto off_norm = [&]() {
    double s = 0.0;
    for (Eigen::Index c = 0; c < n; ++c)
      for (Eigen::Index r = 0; r < c; ++r) s += 2.0 * a(r, c) * a(r, c);
    return std::sqrt(s);
  };

  const double target = kJacobiRelativeTol * scale;
  while (off_norm() > target) {
    if (out.sweeps >= kJacobiMaxSweeps) throw std::runtime_error("symmetric_eigen: no convergence");
    ++out.sweeps;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        // Skip entries already negligible relative to both diagonals.
        if (out.sweeps > 4 && std::abs(apq) < 1e-18 * (std::abs(a(p, p)) + std::abs(a(q, q)))) {
          a(p, q) = a(q, p) = 0.0;
          continue;
        }
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {  // columns p, q
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {  // rows p, q
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (Eigen::Index k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index x, Eigen::Index y) { return a(x, x) < a(y, y); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    out.values(i) = a(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(i)]);
    out.vectors.col(i) = v.col(order[static_cast<std::size_t>(i)]);
  }
  return out;
}

/// [[Re H, -Im H], [Im H, Re H]]
inline Eigen::MatrixXd real_embedding(const Eigen::MatrixXcd& h) {
  const Eigen::Index m = h.rows();
  Eigen::MatrixXd e(2 * m, 2 * m);
  e.topLeftCorner(m, m) = h.real();
  e.topRightCorner(m, m) = -h.imag();
  e.bottomLeftCorner(m, m) = h.imag();
  e.bottomRightCorner(m, m) = h.real();
  return e;
}

inline HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& h, double hermitian_tol = 1e-12) {
  const Eigen::Index m = h.rows();
  if (h.cols() != m) throw precondition_error("hermitian_eigen: matrix is not square");
  if ((h - h.adjoint()).norm() > hermitian_tol * std::max(1.0, h.norm())) {
    throw precondition_error("hermitian_eigen: matrix is not Hermitian");
  }
  const SymmetricEigen sym = symmetric_eigen(real_embedding(h), hermitian_tol);

  HermitianEigen out;
  out.sweeps = sym.sweeps;
  out.values.resize(m);
  out.vectors.resize(m, m);
  const double cluster_tol = 1e-9 * std::max(1.0, h.norm());
  Eigen::Index kept = 0;
  Eigen::Index begin = 0;
  while (begin < 2 * m) {
    Eigen::Index end = begin + 1;
    while (end < 2 * m && sym.values(end) - sym.values(end - 1) <= cluster_tol) ++end;
    const Eigen::Index want = (end - begin) / 2;
    if ((end - begin) % 2 != 0) throw std::runtime_error("hermitian_eigen: odd cluster in real embedding");
    std::vector<Eigen::VectorXcd> cand;
    for (Eigen::Index i = begin; i < end; ++i) {
      Eigen::VectorXcd z(m);
      for (Eigen::Index r = 0; r < m; ++r) z(r) = {sym.vectors(r, i), sym.vectors(r + m, i)};
      cand.push_back(z);
    }
    // Pivoted complex Gram-Schmidt: each accepted z removes its partner i z.
    for (Eigen::Index taken = 0; taken < want; ++taken) {
      std::size_t best = 0;
      double best_norm = -1.0;
      for (std::size_t c = 0; c < cand.size(); ++c) {
        const double nc = cand[c].norm();
        if (nc > best_norm) {
          best_norm = nc;
          best = c;
        }
      }
      if (best_norm < 1e-6) throw std::runtime_error("hermitian_eigen: could not extract a complex eigenbasis");
      const Eigen::VectorXcd q = cand[best] / best_norm;
      out.vectors.col(kept) = q;
      out.values(kept) = 0.5 * (sym.values(begin + 2 * taken) + sym.values(begin + 2 * taken + 1));
      ++kept;
      for (auto& c : cand) c -= q.dot(c) * q;
    }
    begin = end;
  }
  if (kept != m) throw std::runtime_error("hermitian_eigen: could not extract a complex eigenbasis");
  return out;
}

}  // namespace s3hopf
