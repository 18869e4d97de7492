#pragma once

// Seeded verification suites shared by the command line tool and the
// acceptance binary. Each suite returns a table of checks; the first failing
// check that involves a field keeps that field for replay.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "s3hopf/field_calculus.hpp"
#include "s3hopf/io.hpp"
#include "s3hopf/test_fields.hpp"
#include "s3hopf/variational.hpp"

namespace s3hopf {

struct Tolerances {
  double spectrum = 1e-8;
  double identity_relative = 1e-6;
  double identity_hopf = 1e-10;
  double pointwise = 1e-8;
  double gap = 1e-10;
  double hessian = 1e-8;
  double eigen_membership = 1e-8;
  double second_difference = 1e-2;
  double rigidity = 1e-10;
  double energy = 1e-6;
  double classification = 1e-3;
};

enum class Relation { below, at_least };  // value < tolerance, value >= -tolerance

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  Relation relation = Relation::below;
  bool pass = false;
};

struct Offender {
  std::string check;
  std::uint64_t seed = 0;
  Json field;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  long long samples = 0;
  std::vector<Check> checks;
  std::optional<Offender> offender;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
  }

  const Check& below(std::string name, double value, double tol) { return add(std::move(name), value, tol, Relation::below); }
  const Check& at_least(std::string name, double value, double tol) { return add(std::move(name), value, tol, Relation::at_least); }

  // records the field when this is the first failure that carries one
  template <class Field>
  void blame(const Check& c, const Field& f, int degree) {
    if (!c.pass && !offender) offender = Offender{c.name, f.provenance.seed, field_to_json(f, degree)};
  }

 private:
  const Check& add(std::string name, double value, double tol, Relation r) {
    const bool ok = r == Relation::below ? value < tol : value >= -tol;
    checks.push_back({std::move(name), value, tol, r, ok && std::isfinite(value)});
    return checks.back();
  }
};

inline std::string to_string(Relation r) { return r == Relation::below ? "<" : ">=-"; }

inline std::string suite_csv(const SuiteReport& r) {
  std::ostringstream os;
  os << "check,value,relation,tolerance,pass\n";
  for (const auto& c : r.checks)
    os << c.name << "," << format_double(c.value) << "," << to_string(c.relation) << "," << format_double(c.tolerance) << ","
       << (c.pass ? "true" : "false") << "\n";
  return os.str();
}

inline Json suite_json(const SuiteReport& r) {
  Json rows = Json::array();
  for (const auto& c : r.checks)
    rows.push_back(Json{{"check", c.name}, {"value", detail::optional_number(c.value)}, {"relation", to_string(c.relation)},
                        {"tolerance", c.tolerance}, {"pass", c.pass}});
  Json j{{"suite", r.suite}, {"seed", r.seed}, {"samples", r.samples}, {"passed", r.passed()}, {"checks", rows}};
  if (r.offender) j["offender"] = Json{{"check", r.offender->check}, {"seed", r.offender->seed}};
  return j;
}

namespace detail {
inline std::string seeded(const std::string& what, std::uint64_t seed) { return what + "[seed=" + std::to_string(seed) + "]"; }

inline int random_degree(const Discretization& disc, int wanted) { return std::min(wanted, disc.max_degree()); }
}  // namespace detail

/// Energy identity and its pointwise form on Hopf fields and `fields` seeded
/// random unit fields of degree <= 3.
inline SuiteReport verify_identities(const Discretization& disc, std::uint64_t seed, int fields = 20, const Tolerances& tol = {}) {
  SuiteReport rep{"identities", seed, fields, {}, {}};
  const int N = disc.max_degree();
  for (const FramedField& h : {hopf_left(disc, {1, 0, 0}), hopf_right(disc, {0, 0, 1})}) {
    const EnergyReport e = energy_identity_report(disc, h);
    const std::string tag = h.provenance.generator;
    rep.below(tag + ".energy_minus_2pi2", std::abs(e.e_vertical - kHopfEnergy) / kHopfEnergy, tol.identity_hopf);
    rep.below(tag + ".identity_residual", std::abs(e.identity_residual), tol.identity_hopf);
    rep.below(tag + ".pointwise_residual", e.pointwise_residual, tol.pointwise);
  }
  const int deg = detail::random_degree(disc, 3);
  for (int i = 0; i < fields; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    const FramedField f = random_unit(disc, deg, s);
    const EnergyReport e = energy_identity_report(disc, f);
    rep.blame(rep.below(detail::seeded("random_unit.identity_relative", s), std::abs(e.identity_residual) / (1.0 + e.e_eta),
                        tol.identity_relative),
              f, N);
    rep.blame(rep.below(detail::seeded("random_unit.pointwise_residual", s), e.pointwise_residual, tol.pointwise), f, N);
    rep.blame(rep.at_least(detail::seeded("random_unit.energy_above_2pi2", s), e.e_vertical - kHopfEnergy, tol.energy), f, N);
  }
  return rep;
}

/// Nonlinear gap on Hopf fields and `fields` random unit fields; linear gap at
/// sigma_1 for as many random variations on the same nodes. samples counts the
/// nodes of one scan.
inline SuiteReport verify_inequalities(const Discretization& disc, std::uint64_t seed, int fields = 20, const Tolerances& tol = {}) {
  SuiteReport rep{"inequalities", seed, 0, {}, {}};
  const int N = disc.max_degree();
  for (const FramedField& h : {hopf_left(disc, {0, 1, 0}), hopf_right(disc, {1, 0, 0})}) {
    const GapReport g = inequality_gap(GapKind::nonlinear, disc, h);
    rep.below(h.provenance.generator + ".gap_abs_max", g.gap.cwiseAbs().maxCoeff(), tol.gap);
  }
  double nonlinear_min = std::numeric_limits<double>::infinity(), linear_min = nonlinear_min;
  double expansion = 0.0;
  long long violations = 0;
  const int deg = detail::random_degree(disc, 3);
  const FramedField sigma = hopf_left(disc, {1, 0, 0});
  for (int i = 0; i < fields; ++i) {
    const std::uint64_t s = seed + static_cast<std::uint64_t>(i);
    const FramedField f = random_unit(disc, deg, s);
    const GapReport g = inequality_gap(GapKind::nonlinear, disc, f);
    rep.samples += g.gap.size();
    nonlinear_min = std::min(nonlinear_min, g.min_gap());
    expansion = std::max(expansion, g.max_expansion_error());
    rep.blame(rep.at_least(detail::seeded("nonlinear.min_gap", s), g.min_gap(), tol.gap), f, N);

    const VariationField a = random_variation(disc, N, s);
    const FramedField af = a.as_framed();
    const GapReport l = inequality_gap(GapKind::linear, disc, sigma, &af);
    linear_min = std::min(linear_min, l.min_gap());
    expansion = std::max(expansion, l.max_expansion_error());
    violations += static_cast<long long>(l.violating_nodes.size());
    rep.blame(rep.at_least(detail::seeded("linear.min_gap", s), l.min_gap(), tol.gap), a, N);
  }
  rep.at_least("nonlinear.min_gap_overall", nonlinear_min, tol.gap);
  rep.at_least("linear.min_gap_overall", linear_min, tol.gap);
  rep.below("linear.precondition_violations", static_cast<double>(violations), 0.5);
  rep.below("frame_expansion_error", expansion, 1e-9);
  return rep;
}

/// Jacobi vs Bochner forms of the Hessian at sigma_1 on `pairs` seeded
/// variation pairs, eigen-membership rows and the second difference of E.
inline SuiteReport verify_hessians(const Discretization& disc, std::uint64_t seed, int pairs = 50, const Tolerances& tol = {}) {
  SuiteReport rep{"hessians", seed, pairs, {}, {}};
  const int N = disc.max_degree();
  double worst = 0.0;
  for (int i = 0; i < pairs; ++i) {
    const std::uint64_t s = seed + 2 * static_cast<std::uint64_t>(i);
    const VariationField a = random_variation(disc, N, s), b = random_variation(disc, N, s + 1);
    const HessianValue h = hessian(disc, a, b, tol.hessian);
    worst = std::max(worst, h.relative_difference());
    rep.blame(rep.below(detail::seeded("pair.relative_difference", s), h.relative_difference(), tol.hessian), a, N);
  }
  rep.below("pair.relative_difference_max", worst, tol.hessian);

  VariationField c;
  c.f = Eigen::VectorXcd::Zero(disc.dimension());
  c.f(0) = 1.0;
  c.provenance = {"constant", 0, ""};
  const VariationField g = conformal_gradient_horizontal(disc, {0.1, 0.7, -0.3, 0.5});
  const VariationField l = conformal_lift(disc, {0.2, 0.9, -0.4});
  const std::pair<const VariationField*, double> rows[] = {{&c, 0.0}, {&g, 1.0}, {&l, 4.0}};
  for (const auto& [v, lambda] : rows) {
    const HessianValue h = hessian(disc, *v, *v, tol.hessian);
    const double norm = v->f.squaredNorm();
    const std::string tag = "membership." + v->provenance.generator;
    rep.below(tag + ".jacobi", std::abs(h.value_jacobi / norm - lambda), tol.eigen_membership);
    rep.below(tag + ".bochner", std::abs(h.value_bochner / norm - lambda), tol.eigen_membership);
  }

  const FramedField sigma = hopf_left(disc, {1, 0, 0});
  const double e0 = vertical_energy(disc, sigma), step = 1e-3;
  for (const auto& [v, lambda] : {rows[1], rows[2]}) {
    auto energy_at = [&](double t) { return vertical_energy(disc, mark_normalized(disc, sigma + v->as_framed() * t)); };
    const double second = (energy_at(step) - 2 * e0 + energy_at(-step)) / (step * step);
    rep.below("second_difference." + v->provenance.generator, std::abs(second / (lambda * v->f.squaredNorm()) - 1.0),
              tol.second_difference);
  }
  return rep;
}

/// Rigidity residuals and Phi on both Hopf families; classification of the
/// canonical families and of a perturbed field.
inline SuiteReport verify_rigidity(const Discretization& disc, std::uint64_t seed, const Tolerances& tol = {}) {
  SuiteReport rep{"rigidity", seed, 0, {}, {}};
  const FramedField left = hopf_left(disc, {1, 0, 0});
  const FramedField right = hopf_right(disc, {0, 1, 0});
  for (const auto& [f, plus] : {std::pair{&left, true}, std::pair{&right, false}}) {
    const RigidityReport r = rigidity_diagnostics(disc, *f);
    const std::string tag = f->provenance.generator;
    rep.below(tag + ".geodesity", r.geodesity, tol.rigidity);
    rep.below(tag + ".riccati", r.riccati_residual, tol.rigidity);
    rep.below(tag + ".holomorphy", r.holomorphy_residual, tol.rigidity);
    rep.below(tag + ".laplacian", r.laplacian_residual, tol.rigidity);
    rep.below(tag + (plus ? ".phi_minus_i" : ".phi_plus_i"), plus ? r.distance_to_plus_i : r.distance_to_minus_i, tol.rigidity);
  }
  const HopfClassification cl = classify_hopf(disc, left, tol.classification);
  const HopfClassification cr = classify_hopf(disc, right, tol.classification);
  rep.below("classify.left_is_left", cl.is_hopf && cl.side == HopfSide::left ? 0.0 : 1.0, 0.5);
  rep.below("classify.right_is_right", cr.is_hopf && cr.side == HopfSide::right ? 0.0 : 1.0, 0.5);
  rep.below("classify.left_distance", cl.l2_distance, tol.classification);
  rep.below("classify.right_distance", cr.l2_distance, tol.classification);

  Rng rng(seed);
  const double amplitude = rng.uniform(0.05, 0.3);
  const FramedField p = perturbed_hopf(disc, amplitude);
  const HopfClassification cp = classify_hopf(disc, p, tol.classification);
  const Check& c = rep.below("classify.perturbed_rejected", cp.is_hopf ? 1.0 : 0.0, 0.5);
  rep.blame(c, p, disc.max_degree());
  rep.at_least("perturbed.geodesity_positive", rigidity_diagnostics(disc, p).geodesity - 1e-6, 0.0);
  return rep;
}

}  // namespace s3hopf
