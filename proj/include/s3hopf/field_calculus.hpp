#pragma once

// Frame calculus for vector fields on S^3.
//
// With sigma_j the left-invariant frame, nabla_{sigma_j} sigma_k = eps_{jkl} sigma_l, so
// for X = sum f_k sigma_k the frame components of nabla_{sigma_j} X are
//   C(l, j) = sigma_j f_l + sum_k eps_{jkl} f_k.
// Pointwise quantities are computed from a PointJet (values, first frame
// derivatives and Laplacians of the components); the jet of the unit field
// f / |f| follows from the quotient rule.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "s3hopf/discretization.hpp"
#include "s3hopf/field.hpp"
#include "s3hopf/su2.hpp"

namespace s3hopf {

struct PointJet {
  Eigen::Vector3d f = Eigen::Vector3d::Zero();
  Eigen::Matrix3d d = Eigen::Matrix3d::Zero();  // d(l, j) = sigma_j f_l
  Eigen::Vector3d lap = Eigen::Vector3d::Zero();  // Delta f_l, Delta = -sum_j sigma_j^2
};

/// Coefficient-space derivatives of a field, evaluated at nodes or anywhere.
class FieldJets {
 public:
  FieldJets(const Discretization& disc, const FramedField& x) : disc_(&disc) {
    if (x.dimension() != disc.dimension()) throw precondition_error("FieldJets: field and discretization differ in degree");
    c_ = x.matrix();
    for (int j = 0; j < 3; ++j) {
      dc_[static_cast<std::size_t>(j)].resize(c_.rows(), 3);
      for (int l = 0; l < 3; ++l) dc_[static_cast<std::size_t>(j)].col(l) = disc.derivative(j).apply(c_.col(l));
    }
    lc_.resize(c_.rows(), 3);
    for (int l = 0; l < 3; ++l) lc_.col(l) = disc.apply_laplacian(c_.col(l));
  }

  /// Jets at every grid node, in node order.
  std::vector<PointJet> nodal() const {
    const Eigen::MatrixXd& b = disc_->nodal_matrix();
    const Eigen::MatrixX3d v = b * c_;
    std::array<Eigen::MatrixX3d, 3> dv;
    for (int j = 0; j < 3; ++j) dv[static_cast<std::size_t>(j)] = b * dc_[static_cast<std::size_t>(j)];
    const Eigen::MatrixX3d lv = b * lc_;
    std::vector<PointJet> out(static_cast<std::size_t>(v.rows()));
    for (Eigen::Index i = 0; i < v.rows(); ++i) {
      PointJet& p = out[static_cast<std::size_t>(i)];
      p.f = v.row(i).transpose();
      for (int j = 0; j < 3; ++j) p.d.col(j) = dv[static_cast<std::size_t>(j)].row(i).transpose();
      p.lap = lv.row(i).transpose();
    }
    return out;
  }

  PointJet at(const Quaternion& x) const {
    const Eigen::VectorXd b = disc_->basis().evaluate_all(x);
    PointJet p;
    p.f = (b.transpose() * c_).transpose();
    for (int j = 0; j < 3; ++j) p.d.col(j) = (b.transpose() * dc_[static_cast<std::size_t>(j)]).transpose();
    p.lap = (b.transpose() * lc_).transpose();
    return p;
  }

 private:
  const Discretization* disc_;
  Eigen::MatrixX3d c_;
  std::array<Eigen::MatrixX3d, 3> dc_;
  Eigen::MatrixX3d lc_;
};

inline std::vector<PointJet> nodal_jets(const Discretization& disc, const FramedField& x) { return FieldJets(disc, x).nodal(); }

/// Jet of f / |f|.
inline PointJet normalized(const PointJet& p) {
  const double g = p.f.squaredNorm();
  if (!(g > 0.0)) throw precondition_error("normalized: field vanishes");
  const double lam = 1.0 / std::sqrt(g);
  const Eigen::RowVector3d dg = 2.0 * p.f.transpose() * p.d;  // sigma_j g
  double lap_g = 0.0;
  for (int l = 0; l < 3; ++l) lap_g += 2.0 * p.f(l) * p.lap(l) - 2.0 * p.d.row(l).squaredNorm();
  const Eigen::RowVector3d dlam = -0.5 * lam * lam * lam * dg;
  const double lap_lam = -0.75 * std::pow(g, -2.5) * dg.squaredNorm() - 0.5 * lam * lam * lam * lap_g;
  PointJet q;
  q.f = lam * p.f;
  q.d = lam * p.d + p.f * dlam;
  q.lap = lap_lam * p.f + lam * p.lap - 2.0 * p.d * dlam.transpose();
  return q;
}

inline std::vector<PointJet> normalized(const std::vector<PointJet>& jets) {
  std::vector<PointJet> out;
  out.reserve(jets.size());
  for (const auto& p : jets) out.push_back(normalized(p));
  return out;
}

/// Jets of the unit field a unit-flagged FramedField denotes.
inline std::vector<PointJet> unit_jets(const Discretization& disc, const FramedField& x) {
  require_unit(x, "unit_jets");
  return normalized(nodal_jets(disc, x));
}

// ---- pointwise quantities ----

/// C(l, j): frame components of nabla_{sigma_j} X.
inline Eigen::Matrix3d covariant(const PointJet& p) {
  Eigen::Matrix3d c = p.d;
  for (int l = 0; l < 3; ++l)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) c(l, j) += levi_civita(j, k, l) * p.f(k);
  return c;
}

/// |nabla X|^2.
inline double energy_density(const PointJet& p) { return covariant(p).squaredNorm(); }

/// L_X g in the frame: L(j, k) = <nabla_j X, sigma_k> + <sigma_j, nabla_k X>.
inline Eigen::Matrix3d lie_tensor(const PointJet& p) {
  const Eigen::Matrix3d c = covariant(p);
  return c + c.transpose();
}

inline double divergence(const PointJet& p) { return covariant(p).trace(); }

/// Frame components of nabla* nabla X.
inline Eigen::Vector3d rough_laplacian(const PointJet& p) {
  Eigen::Vector3d r = p.lap + 2.0 * p.f;
  for (int l = 0; l < 3; ++l)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) r(l) -= 2.0 * levi_civita(j, k, l) * p.d(k, j);
  return r;
}

/// |d(mu X)|^2: mu X = x^{-1} X has Pauli coordinates f.
inline double mu_density(const PointJet& p) { return p.d.squaredNorm(); }

/// |d(eta X)|^2: eta X = Ad(x) f, whose sigma_j derivative is Ad(x)(sigma_j f + [e_j, f]).
inline double eta_density(const PointJet& p) {
  Eigen::Matrix3d e = p.d;
  for (int l = 0; l < 3; ++l)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) e(l, j) += 2.0 * levi_civita(j, k, l) * p.f(k);
  return e.squaredNorm();
}

/// Orthonormal (alpha, beta) with (alpha, beta, F) positively oriented, in frame
/// components. alpha is the part of sigma_2 orthogonal to F, or of sigma_3 when
/// |<F, sigma_2>| > 0.9.
struct AdaptedFrame {
  Eigen::Vector3d alpha, beta;
  bool fallback = false;
};

inline AdaptedFrame adapted_frame(const Eigen::Vector3d& unit_f) {
  AdaptedFrame fr;
  Eigen::Vector3d ref = Eigen::Vector3d::UnitY();
  if (std::abs(unit_f.dot(ref)) > 0.9) {
    ref = Eigen::Vector3d::UnitZ();
    fr.fallback = true;
  }
  fr.alpha = (ref - ref.dot(unit_f) * unit_f).normalized();
  fr.beta = unit_f.cross(fr.alpha);
  return fr;
}

struct ShearPoint {
  std::complex<double> phi;  // <nabla_Z F, conj Z> / 2, Z = alpha + i beta
  double geodesity = 0.0;    // |nabla_F F|
  double shear = 0.0;        // |trace-free part of L_F g on the horizontal plane|
  bool fallback = false;
  AdaptedFrame frame;
};

/// Shear data of a unit field at a point. Phi is unchanged by rotating (alpha, beta),
/// so it depends only on the orientation convention.
inline ShearPoint shear_point(const PointJet& unit) {
  const Eigen::Matrix3d c = covariant(unit);
  ShearPoint s;
  s.frame = adapted_frame(unit.f);
  s.fallback = s.frame.fallback;
  const Eigen::Vector3d& a = s.frame.alpha;
  const Eigen::Vector3d& b = s.frame.beta;
  const Eigen::Vector3d ca = c * a, cb = c * b;
  s.phi = 0.5 * std::complex<double>(a.dot(ca) + b.dot(cb), a.dot(cb) - b.dot(ca));
  s.geodesity = (c * unit.f).norm();
  const Eigen::Matrix3d l = c + c.transpose();
  const double laa = a.dot(l * a), lbb = b.dot(l * b), lab = a.dot(l * b);
  s.shear = std::sqrt(0.5 * (laa - lbb) * (laa - lbb) + 2.0 * lab * lab);
  return s;
}

inline constexpr int kManifoldDimension = 3;

/// (n-1)|L_X g|^2 - 4 (div X)^2.
inline double inequality_gap_value(const PointJet& x) {
  const Eigen::Matrix3d l = lie_tensor(x);
  const double div = 0.5 * l.trace();
  return (kManifoldDimension - 1) * l.squaredNorm() - 4.0 * div * div;
}

/// The same gap expanded in an orthonormal frame (a1, a2, s), n = 3:
///   (L_ss^2 - 2 L_ss (L_11 + L_22)) + 4 sum_i L_si^2 + 4 L_12^2 + (L_11 - L_22)^2.
/// The first bracket vanishes when L(s, s) = 0.
struct GapTerms {
  double sigma_sigma = 0.0;
  double sigma_alpha = 0.0;
  double off_diagonal = 0.0;
  double diagonal_difference = 0.0;
  double total() const { return sigma_sigma + sigma_alpha + off_diagonal + diagonal_difference; }
};

inline GapTerms gap_terms(const Eigen::Matrix3d& l, const Eigen::Vector3d& s, const Eigen::Vector3d& a1,
                          const Eigen::Vector3d& a2) {
  const double lss = s.dot(l * s), l11 = a1.dot(l * a1), l22 = a2.dot(l * a2);
  const double ls1 = s.dot(l * a1), ls2 = s.dot(l * a2), l12 = a1.dot(l * a2);
  GapTerms t;
  t.sigma_sigma = lss * lss - 2.0 * lss * (l11 + l22);
  t.sigma_alpha = 2.0 * (kManifoldDimension - 1) * (ls1 * ls1 + ls2 * ls2);
  t.off_diagonal = (kManifoldDimension - 1) * 2.0 * l12 * l12;
  t.diagonal_difference = (l11 - l22) * (l11 - l22);
  return t;
}

// ---- field operations (coefficient-exact) ----

/// nabla_{sigma_j} X (0-based j).
inline FramedField covariant_derivative(const Discretization& disc, int j, const FramedField& x) {
  if (j < 0 || j > 2) throw precondition_error("covariant_derivative: frame index must be 0, 1 or 2");
  FramedField r;
  for (int l = 0; l < 3; ++l) {
    r[l] = disc.apply_derivative(j, x[l]);
    for (int k = 0; k < 3; ++k) {
      const int e = levi_civita(j, k, l);
      if (e != 0) r[l] += e * x[k];
    }
  }
  return r;
}

/// nabla* nabla X via the block operator.
inline FramedField rough_laplacian(const Discretization& disc, const FramedField& x) {
  const RealBlockOperator op = rough_laplacian_field_operator(disc.derivatives());
  const auto out = op.apply_field({x[0], x[1], x[2]});
  FramedField r;
  for (int l = 0; l < 3; ++l) r[l] = out[static_cast<std::size_t>(l)];
  return r;
}

// ---- nodal operations ----

/// |nabla F|^2 at every node for a unit field.
inline Eigen::VectorXd energy_density(const Discretization& disc, const FramedField& x) {
  const auto jets = unit_jets(disc, x);
  Eigen::VectorXd e(static_cast<Eigen::Index>(jets.size()));
  for (std::size_t i = 0; i < jets.size(); ++i) e(static_cast<Eigen::Index>(i)) = energy_density(jets[i]);
  return e;
}

/// Nodal L_X g in the frame.
struct FrameTensor {
  std::vector<Eigen::Matrix3d> values;
  Eigen::Index size() const { return static_cast<Eigen::Index>(values.size()); }
  const Eigen::Matrix3d& operator[](Eigen::Index i) const { return values[static_cast<std::size_t>(i)]; }
};

inline FrameTensor lie_derivative_metric(const Discretization& disc, const FramedField& x) {
  FrameTensor t;
  for (const auto& p : nodal_jets(disc, x)) t.values.push_back(lie_tensor(p));
  return t;
}

inline Eigen::VectorXd divergence(const Discretization& disc, const FramedField& x) {
  const auto jets = nodal_jets(disc, x);
  Eigen::VectorXd d(static_cast<Eigen::Index>(jets.size()));
  for (std::size_t i = 0; i < jets.size(); ++i) d(static_cast<Eigen::Index>(i)) = divergence(jets[i]);
  return d;
}

struct ShearReport {
  Eigen::VectorXcd phi;
  Eigen::VectorXd geodesity;
  Eigen::VectorXd shear;
  int fallback_nodes = 0;
  std::vector<AdaptedFrame> frames;
};

inline ShearReport shear_parameters(const Discretization& disc, const FramedField& x) {
  const auto jets = unit_jets(disc, x);
  const auto n = static_cast<Eigen::Index>(jets.size());
  ShearReport r;
  r.phi.resize(n);
  r.geodesity.resize(n);
  r.shear.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const ShearPoint s = shear_point(jets[static_cast<std::size_t>(i)]);
    r.phi(i) = s.phi;
    r.geodesity(i) = s.geodesity;
    r.shear(i) = s.shear;
    r.fallback_nodes += s.fallback ? 1 : 0;
    r.frames.push_back(s.frame);
  }
  return r;
}

enum class GapKind { linear, nonlinear };

struct GapReport {
  GapKind kind{};
  Eigen::VectorXd gap;
  std::vector<GapTerms> terms;          // expansion in the frame adapted to F
  std::vector<int> violating_nodes;     // nodes where a precondition fails
  double min_gap() const { return gap.size() ? gap.minCoeff() : 0.0; }
  double max_expansion_error() const {
    double e = 0.0;
    for (Eigen::Index i = 0; i < gap.size(); ++i) e = std::max(e, std::abs(gap(i) - terms[static_cast<std::size_t>(i)].total()));
    return e;
  }
};

inline constexpr double kGeodesicTolerance = 1e-8;
inline constexpr double kOrthogonalityTolerance = 1e-8;

/// Nonlinear: gap of the unit field F itself. Linear: gap of A, where F is a
/// geodesic unit field and A is orthogonal to F; nodes violating either
/// condition are listed, the gap is still evaluated there.
inline GapReport inequality_gap(GapKind kind, const Discretization& disc, const FramedField& f,
                                const FramedField* a = nullptr) {
  const auto fj = unit_jets(disc, f);
  GapReport r;
  r.kind = kind;
  r.gap.resize(static_cast<Eigen::Index>(fj.size()));
  std::vector<PointJet> aj;
  if (kind == GapKind::linear) {
    if (a == nullptr) throw precondition_error("inequality_gap: linear kind needs a variation field");
    aj = nodal_jets(disc, *a);
  }
  for (std::size_t i = 0; i < fj.size(); ++i) {
    const PointJet& x = kind == GapKind::linear ? aj[i] : fj[i];
    const AdaptedFrame fr = adapted_frame(fj[i].f);
    r.gap(static_cast<Eigen::Index>(i)) = inequality_gap_value(x);
    r.terms.push_back(gap_terms(lie_tensor(x), fj[i].f, fr.alpha, fr.beta));
    if (kind == GapKind::linear) {
      const double geo = (covariant(fj[i]) * fj[i].f).norm();
      const double orth = std::abs(aj[i].f.dot(fj[i].f));
      if (geo > kGeodesicTolerance || orth > kOrthogonalityTolerance) r.violating_nodes.push_back(static_cast<int>(i));
    }
  }
  return r;
}

/// Lambda v = Delta f - 2i sigma_1 f, together with the nodal evaluation of
///   nabla* nabla alpha - |nabla sigma|^2 alpha - 2 <nabla sigma, nabla alpha> sigma
/// for sigma = sigma_1 and alpha = f2 sigma_2 + f3 sigma_3. Throws when the two
/// disagree by more than tol (scaled by the size of the result).
inline VariationField apply_vertical_jacobi(const Discretization& disc, const VariationField& v, double tol = 1e-8,
                                            double* discrepancy = nullptr) {
  if (v.dimension() != disc.dimension()) throw precondition_error("apply_vertical_jacobi: degree mismatch");
  const Eigen::VectorXd re = v.f.real(), im = v.f.imag();
  const Eigen::VectorXd d1re = disc.apply_derivative(0, re), d1im = disc.apply_derivative(0, im);
  VariationField out;
  out.f.resize(v.dimension());
  out.f.real() = disc.apply_laplacian(re) + 2.0 * d1im;
  out.f.imag() = disc.apply_laplacian(im) - 2.0 * d1re;
  out.provenance = v.provenance;

  PointJet hopf;
  hopf.f = Eigen::Vector3d::UnitX();
  const Eigen::Matrix3d cs = covariant(hopf);
  const double grad_sigma2 = cs.squaredNorm();
  const auto aj = nodal_jets(disc, v.as_framed());
  const Eigen::MatrixX3d spectral = nodal_values(disc, out.as_framed());
  double worst = 0.0;
  for (std::size_t i = 0; i < aj.size(); ++i) {
    const Eigen::Matrix3d ca = covariant(aj[i]);
    Eigen::Vector3d j = rough_laplacian(aj[i]) - grad_sigma2 * aj[i].f;
    j -= 2.0 * (cs.cwiseProduct(ca)).sum() * hopf.f;
    worst = std::max(worst, (j - spectral.row(static_cast<Eigen::Index>(i)).transpose()).cwiseAbs().maxCoeff());
  }
  const double scale = std::max(1.0, spectral.cwiseAbs().maxCoeff());
  if (discrepancy != nullptr) *discrepancy = worst;
  if (worst > tol * scale) {
    throw std::runtime_error("apply_vertical_jacobi: spectral and nodal forms disagree by " + std::to_string(worst));
  }
  return out;
}

}  // namespace s3hopf
