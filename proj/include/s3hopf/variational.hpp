#pragma once

// Energies of unit vector fields, the second variation at sigma_1, projected
// gradient descent of the vertical energy, and Hopf classification.
//
// Energy convention: E^v(F) = 1/2 int |nabla F|^2, so a Hopf field has 2 pi^2.
// Map energies use the same 1/2.

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "s3hopf/field_calculus.hpp"

namespace s3hopf {

inline constexpr double kPi2 = std::numbers::pi * std::numbers::pi;
/// Volume of the unit S^3.
inline constexpr double kSphereVolume = 2.0 * kPi2;
/// Vertical energy of a Hopf field.
inline constexpr double kHopfEnergy = kSphereVolume;

namespace detail {
template <class F>
Eigen::VectorXd nodal_map(const std::vector<PointJet>& jets, F&& fn) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(jets.size()));
  for (std::size_t i = 0; i < jets.size(); ++i) v(static_cast<Eigen::Index>(i)) = fn(jets[i]);
  return v;
}
}  // namespace detail

inline double vertical_energy(const Discretization& disc, const FramedField& f) {
  const auto jets = unit_jets(disc, f);
  return 0.5 * disc.integrate(detail::nodal_map(jets, [](const PointJet& p) { return energy_density(p); }));
}

enum class MapKind { eta, mu };

inline double map_energy(MapKind kind, const Discretization& disc, const FramedField& f) {
  const auto jets = unit_jets(disc, f);
  return 0.5 * disc.integrate(detail::nodal_map(
                   jets, [&](const PointJet& p) { return kind == MapKind::eta ? eta_density(p) : mu_density(p); }));
}

struct EnergyReport {
  double e_vertical = 0.0;
  double e_eta = 0.0;
  double e_mu = 0.0;
  double identity_residual = 0.0;   // E_eta - (4 pi^2 + 2 E_vertical - E_mu)
  double pointwise_residual = 0.0;  // max |d(eta F)|^2 - 4|F|^2 - 2|nabla F|^2 + |d(mu F)|^2
};

inline EnergyReport energy_identity_report(const Discretization& disc, const FramedField& f) {
  const auto jets = unit_jets(disc, f);
  const Eigen::VectorXd ev = detail::nodal_map(jets, [](const PointJet& p) { return energy_density(p); });
  const Eigen::VectorXd ee = detail::nodal_map(jets, [](const PointJet& p) { return eta_density(p); });
  const Eigen::VectorXd em = detail::nodal_map(jets, [](const PointJet& p) { return mu_density(p); });
  const Eigen::VectorXd one = detail::nodal_map(jets, [](const PointJet& p) { return p.f.squaredNorm(); });
  EnergyReport r;
  r.e_vertical = 0.5 * disc.integrate(ev);
  r.e_eta = 0.5 * disc.integrate(ee);
  r.e_mu = 0.5 * disc.integrate(em);
  r.identity_residual = r.e_eta - (2.0 * kSphereVolume + 2.0 * r.e_vertical - r.e_mu);
  r.pointwise_residual = (ee - 4.0 * one - 2.0 * ev + em).cwiseAbs().maxCoeff();
  return r;
}

/// Second variation of E^v at sigma_1 in two independent forms:
///   jacobi:   int <J a, b>, with J acting as Lambda on f2 + i f3,
///   bochner:  int (1/2 <L_a g, L_b g> - div a div b).
struct HessianValue {
  double value_jacobi = 0.0;
  double value_bochner = 0.0;
  double scale = 0.0;  // ||a|| ||b|| in L^2
  bool consistent = false;
  double relative_difference() const {
    const double s = std::max({std::abs(value_jacobi), std::abs(value_bochner), scale});
    return s > 0.0 ? std::abs(value_jacobi - value_bochner) / s : 0.0;
  }
};

inline constexpr double kHessianRelativeTol = 1e-8;

inline HessianValue hessian(const Discretization& disc, const VariationField& a, const VariationField& b,
                            double tol = kHessianRelativeTol) {
  if (a.dimension() != disc.dimension() || b.dimension() != disc.dimension()) {
    throw precondition_error("hessian: degree mismatch");
  }
  if (disc.grid().exactness() < 2 * disc.max_degree()) throw precondition_error("hessian: grid cannot integrate products");
  HessianValue h;
  const VariationField ja = apply_vertical_jacobi(disc, a);
  h.value_jacobi = b.f.dot(ja.f).real();  // orthonormal basis: int conj(g) (Lambda f)
  const auto aj = nodal_jets(disc, a.as_framed());
  const auto bj = nodal_jets(disc, b.as_framed());
  Eigen::VectorXd integrand(disc.node_count());
  for (int i = 0; i < disc.node_count(); ++i) {
    const Eigen::Matrix3d la = lie_tensor(aj[static_cast<std::size_t>(i)]);
    const Eigen::Matrix3d lb = lie_tensor(bj[static_cast<std::size_t>(i)]);
    integrand(i) = 0.5 * la.cwiseProduct(lb).sum() - 0.25 * la.trace() * lb.trace();
  }
  h.value_bochner = disc.integrate(integrand);
  h.scale = a.f.norm() * b.f.norm();
  h.consistent = h.relative_difference() <= tol;
  return h;
}

/// Both sides of int (|nabla X|^2 - Ric(X, X)) = int (1/2 |L_X g|^2 - (div X)^2), Ric = 2g.
struct BochnerYano {
  double lhs = 0.0;
  double rhs = 0.0;
};

inline BochnerYano bochner_yano(const Discretization& disc, const FramedField& x) {
  const auto jets = nodal_jets(disc, x);
  BochnerYano r;
  r.lhs = disc.integrate(detail::nodal_map(jets, [](const PointJet& p) { return energy_density(p) - 2.0 * p.f.squaredNorm(); }));
  r.rhs = disc.integrate(detail::nodal_map(jets, [](const PointJet& p) {
    const Eigen::Matrix3d l = lie_tensor(p);
    return 0.5 * l.squaredNorm() - 0.25 * l.trace() * l.trace();
  }));
  return r;
}

/// Nodal nabla* nabla F - |nabla F|^2 F for the unit field F.
struct SectionResidual {
  Eigen::MatrixX3d nodal;   // nodes x 3 frame components
  double norm = 0.0;        // L^2 norm
  double max_normal = 0.0;  // max |<R, F>|
  double energy = 0.0;      // E^v of the same field
};

inline SectionResidual section_residual_from_jets(const Discretization& disc, const std::vector<PointJet>& unit) {
  SectionResidual r;
  r.nodal.resize(static_cast<Eigen::Index>(unit.size()), 3);
  Eigen::VectorXd sq(r.nodal.rows()), e(r.nodal.rows());
  for (std::size_t i = 0; i < unit.size(); ++i) {
    const PointJet& p = unit[i];
    const double ed = energy_density(p);
    const Eigen::Vector3d v = rough_laplacian(p) - ed * p.f;
    const auto k = static_cast<Eigen::Index>(i);
    r.nodal.row(k) = v.transpose();
    sq(k) = v.squaredNorm();
    e(k) = ed;
    r.max_normal = std::max(r.max_normal, std::abs(v.dot(p.f)));
  }
  r.norm = std::sqrt(disc.integrate(sq));
  r.energy = 0.5 * disc.integrate(e);
  return r;
}

inline SectionResidual harmonic_section_residual(const Discretization& disc, const FramedField& f) {
  return section_residual_from_jets(disc, unit_jets(disc, f));
}

// ---- gradient flow ----

struct FlowParams {
  double step = 0.05;
  int max_iters = 5000;
  double tol = 1e-7;
  double min_step = 1e-12;
  /// Energies closer than this (relative) are indistinguishable in double precision.
  double energy_rounding = 1e-14;
  double regrowth = 1.1;
};

struct FlowStep {
  int iter = 0;
  double energy = 0.0;
  double residual = 0.0;
  double step = 0.0;
  double unit_violation = 0.0;
};

enum class FlowStatus { converged, max_iterations, step_collapse };

inline std::string to_string(FlowStatus s) {
  switch (s) {
    case FlowStatus::converged: return "converged";
    case FlowStatus::max_iterations: return "max_iterations";
    case FlowStatus::step_collapse: return "step_collapse";
  }
  return "unknown";
}

struct FlowTrace {
  std::vector<FlowStep> steps;  // entry 0 is the initial field
  FlowStatus status = FlowStatus::max_iterations;
  FramedField final_field;
  int rejected_trials = 0;
};

namespace detail {
inline std::optional<FramedField> flagged(const Discretization& disc, FramedField p) {
  try {
    return mark_normalized(disc, std::move(p));
  } catch (const precondition_error&) {
    return std::nullopt;
  }
}

inline std::optional<FramedField> renormalized(const Discretization& disc, const FramedField& p) {
  Eigen::MatrixX3d n = nodal_values(disc, p);
  for (Eigen::Index i = 0; i < n.rows(); ++i) {
    const double len = n.row(i).norm();
    if (!(len > 0.0)) return std::nullopt;
    n.row(i) /= len;
  }
  FramedField r = project_field(disc, n);
  r.provenance = p.provenance;
  return flagged(disc, std::move(r));
}
}  // namespace detail

/// Projected gradient descent of E^v. The stored polynomial P denotes P / |P|;
/// the step is P <- P - tau Proj(R / |P|), the coefficient gradient of
/// E^v(P / |P|), followed by nodal renormalization and reprojection whenever
/// that does not raise the energy. tau halves while the energy would rise and
/// grows back towards its initial value by a factor `regrowth` after accepted steps.
inline FlowTrace gradient_flow(const Discretization& disc, const FramedField& f0, const FlowParams& params = {}) {
  require_unit(f0, "gradient_flow");
  if (!(params.step > 0.0) || params.max_iters < 0 || !(params.tol > 0.0)) throw precondition_error("gradient_flow: bad parameters");
  FlowTrace trace;
  FramedField cur = f0;
  SectionResidual res = harmonic_section_residual(disc, cur);
  trace.steps.push_back({0, res.energy, res.norm, 0.0, max_unit_deviation(disc, cur)});
  double tau = params.step;
  auto try_accept = [&](const std::optional<FramedField>& cand, int it) {
    if (!cand) return false;
    SectionResidual cr = harmonic_section_residual(disc, *cand);
    // Within the rounding floor the energy cannot rank two fields; the residual must not grow instead.
    const bool lower = cr.energy < res.energy;
    const bool tie = std::abs(cr.energy - res.energy) <= params.energy_rounding * res.energy && cr.norm <= res.norm;
    if (!(lower || tie)) return false;
    cur = *cand;
    res = std::move(cr);
    trace.steps.push_back({it, res.energy, res.norm, tau, cur.unit_deviation});
    return true;
  };
  for (int it = 1;; ++it) {
    if (res.norm < params.tol) {
      trace.status = FlowStatus::converged;
      break;
    }
    if (it > params.max_iters) {
      trace.status = FlowStatus::max_iterations;
      break;
    }
    const Eigen::MatrixX3d p = nodal_values(disc, cur);
    Eigen::MatrixX3d scaled = res.nodal;
    for (Eigen::Index i = 0; i < scaled.rows(); ++i) scaled.row(i) /= p.row(i).norm();
    const FramedField grad = project_field(disc, scaled);
    bool accepted = false;
    while (tau >= params.min_step) {
      FramedField step = cur - grad * tau;
      step.provenance = cur.provenance;
      const auto plain = detail::flagged(disc, step);
      if (plain && (try_accept(detail::renormalized(disc, *plain), it) || try_accept(plain, it))) {
        tau = std::min(params.step, params.regrowth * tau);
        accepted = true;
        break;
      }
      ++trace.rejected_trials;
      tau *= 0.5;
    }
    if (!accepted) {
      trace.status = FlowStatus::step_collapse;
      break;
    }
  }
  trace.final_field = cur;
  return trace;
}

// ---- classification ----

enum class HopfSide { left, right, none };

inline std::string to_string(HopfSide s) {
  switch (s) {
    case HopfSide::left: return "left";
    case HopfSide::right: return "right";
    case HopfSide::none: return "none";
  }
  return "none";
}

struct HopfClassification {
  bool is_hopf = false;
  HopfSide side = HopfSide::none;
  Eigen::Vector3d axis = Eigen::Vector3d::Zero();
  double l2_distance = std::numeric_limits<double>::infinity();
  double left_distance = std::numeric_limits<double>::infinity();
  double right_distance = std::numeric_limits<double>::infinity();
  double killing_residual = 0.0;
  double geodesity_residual = 0.0;
  double shear_residual = 0.0;
  double tolerance = 0.0;
};

inline constexpr double kClassificationTol = 1e-4;
inline constexpr double kAxisMinAverage = 1e-8;

/// Compares F with the left field of axis normalize(int mu F) and the right field
/// of axis normalize(int eta F); L^2 distances are divided by sqrt(vol S^3).
inline HopfClassification classify_hopf(const Discretization& disc, const FramedField& f, double tol = kClassificationTol) {
  const auto jets = unit_jets(disc, f);
  const int n = disc.node_count();
  Eigen::MatrixX3d mu(n, 3), eta(n, 3);
  HopfClassification c;
  c.tolerance = tol;
  for (int i = 0; i < n; ++i) {
    const PointJet& p = jets[static_cast<std::size_t>(i)];
    mu.row(i) = p.f.transpose();
    eta.row(i) = to_eigen(adjoint(disc.node(i), to_algebra(p.f))).transpose();
    const ShearPoint s = shear_point(p);
    c.killing_residual = std::max(c.killing_residual, lie_tensor(p).norm());
    c.geodesity_residual = std::max(c.geodesity_residual, s.geodesity);
    c.shear_residual = std::max(c.shear_residual, s.shear);
  }
  const Eigen::RowVector3d avg_l = disc.weights().transpose() * mu, avg_r = disc.weights().transpose() * eta;
  Eigen::Vector3d axis_l = Eigen::Vector3d::Zero(), axis_r = Eigen::Vector3d::Zero();
  if (avg_l.norm() > kAxisMinAverage * kSphereVolume) {
    axis_l = avg_l.transpose().normalized();
    Eigen::VectorXd d2(n);
    for (int i = 0; i < n; ++i) d2(i) = (mu.row(i).transpose() - axis_l).squaredNorm();
    c.left_distance = std::sqrt(std::max(0.0, disc.integrate(d2)) / kSphereVolume);
  }
  if (avg_r.norm() > kAxisMinAverage * kSphereVolume) {
    axis_r = avg_r.transpose().normalized();
    Eigen::VectorXd d2(n);
    for (int i = 0; i < n; ++i) d2(i) = (eta.row(i).transpose() - axis_r).squaredNorm();  // |Ad(x)| is an isometry
    c.right_distance = std::sqrt(std::max(0.0, disc.integrate(d2)) / kSphereVolume);
  }
  if (c.left_distance <= c.right_distance && std::isfinite(c.left_distance)) {
    c.side = HopfSide::left;
    c.axis = axis_l;
    c.l2_distance = c.left_distance;
  } else if (std::isfinite(c.right_distance)) {
    c.side = HopfSide::right;
    c.axis = axis_r;
    c.l2_distance = c.right_distance;
  }
  c.is_hopf = c.side != HopfSide::none && c.l2_distance < tol && c.killing_residual < tol && c.geodesity_residual < tol &&
              c.shear_residual < tol;
  return c;
}

// ---- rigidity ----

/// Residuals of the structure equations of a geodesic unit field, with Phi the
/// shear parameter (nabla_Z F = Phi Z):
///   F.Phi + 1 + Phi^2 = 0,   conj(Z).Phi = 0,   Delta Phi = 0.
/// Phi is projected onto the basis to differentiate it; the projection error is
/// reported as truncation.
struct RigidityReport {
  bool applicable = false;  // geodesity below tolerance
  double geodesity = 0.0;
  double riccati_residual = 0.0;
  double holomorphy_residual = 0.0;
  double laplacian_residual = 0.0;
  double truncation = 0.0;
  std::complex<double> phi_mean;
  double phi_min_abs = 0.0;
  double phi_max_abs = 0.0;
  double distance_to_plus_i = 0.0;   // max |Phi - i|
  double distance_to_minus_i = 0.0;  // max |Phi + i|
  int fallback_nodes = 0;
};

inline constexpr double kRigidityGeodesicTol = 1e-8;

inline RigidityReport rigidity_diagnostics(const Discretization& disc, const FramedField& f, double geodesic_tol = kRigidityGeodesicTol) {
  const ShearReport s = shear_parameters(disc, f);
  const auto jets = unit_jets(disc, f);
  RigidityReport r;
  r.geodesity = s.geodesity.maxCoeff();
  r.applicable = r.geodesity < geodesic_tol;
  r.fallback_nodes = s.fallback_nodes;
  const Eigen::VectorXd pre = s.phi.real(), pim = s.phi.imag();
  const Eigen::VectorXd cre = disc.project(pre), cim = disc.project(pim);
  r.truncation = std::max((disc.evaluate(cre) - pre).cwiseAbs().maxCoeff(), (disc.evaluate(cim) - pim).cwiseAbs().maxCoeff());
  std::array<Eigen::VectorXcd, 3> dphi;
  for (int j = 0; j < 3; ++j) {
    dphi[static_cast<std::size_t>(j)] = disc.evaluate(disc.apply_derivative(j, cre)).cast<std::complex<double>>() +
                                        std::complex<double>(0, 1) * disc.evaluate(disc.apply_derivative(j, cim));
  }
  const Eigen::VectorXcd lap = disc.evaluate(disc.apply_laplacian(cre)).cast<std::complex<double>>() +
                               std::complex<double>(0, 1) * disc.evaluate(disc.apply_laplacian(cim));
  r.phi_min_abs = std::numeric_limits<double>::infinity();
  const std::complex<double> i1(0, 1);
  for (int k = 0; k < disc.node_count(); ++k) {
    const auto& p = jets[static_cast<std::size_t>(k)];
    const auto& fr = s.frames[static_cast<std::size_t>(k)];
    const std::complex<double> phi = s.phi(k);
    std::complex<double> along(0), zbar(0);
    for (int j = 0; j < 3; ++j) {
      along += p.f(j) * dphi[static_cast<std::size_t>(j)](k);
      zbar += std::complex<double>(fr.alpha(j), -fr.beta(j)) * dphi[static_cast<std::size_t>(j)](k);
    }
    r.riccati_residual = std::max(r.riccati_residual, std::abs(along + 1.0 + phi * phi));
    r.holomorphy_residual = std::max(r.holomorphy_residual, std::abs(zbar));
    r.laplacian_residual = std::max(r.laplacian_residual, std::abs(lap(k)));
    r.phi_min_abs = std::min(r.phi_min_abs, std::abs(phi));
    r.phi_max_abs = std::max(r.phi_max_abs, std::abs(phi));
    r.distance_to_plus_i = std::max(r.distance_to_plus_i, std::abs(phi - i1));
    r.distance_to_minus_i = std::max(r.distance_to_minus_i, std::abs(phi + i1));
  }
  r.phi_mean = std::complex<double>(disc.integrate(pre), disc.integrate(pim)) / kSphereVolume;
  return r;
}

}  // namespace s3hopf
