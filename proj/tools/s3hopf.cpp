// s3hopf: spectra, verification suites and the energy flow as reproducible
// runs. Exit codes: 0 success, 1 usage/config error, 2 verification failure,
// 3 non-convergence.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <random>
#include <string>

#include "s3hopf/io.hpp"
#include "s3hopf/suites.hpp"

namespace fs = std::filesystem;
using namespace s3hopf;

namespace {

enum Exit { kOk = 0, kUsage = 1, kVerification = 2, kNonConvergence = 3 };

struct RunConfig {
  int degree = -1;
  std::vector<int> grid;
  std::uint64_t seed = 42;
  bool fresh = false;
  long long samples = -1;
  std::string output = "s3hopf_out";
  std::string format = "csv";
  std::string cache;
  double amplitude = 0.3;
  int random_degree = 2;
  Tolerances tol;
  FlowParams flow;
  double flow_energy_tol = 1e-6;
};

struct usage_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int default_degree(const std::string& command) { return command == "flow" ? 6 : 4; }

GridLevels default_levels(int n) { return {n + 2, 2 * n + 4, 2 * n + 4}; }

GridLevels resolve_levels(const RunConfig& c) {
  if (c.grid.empty()) return default_levels(c.degree);
  if (c.grid.size() != 3) throw usage_error("--grid expects three levels t,xi1,xi2");
  return {c.grid[0], c.grid[1], c.grid[2]};
}

void validate(const RunConfig& c, const GridLevels& l) {
  if (c.degree < 1 || c.degree > HarmonicBasis::kMaxSupportedDegree)
    throw usage_error("--degree must lie in 1.." + std::to_string(HarmonicBasis::kMaxSupportedDegree));
  if (l.t < 1 || l.xi1 < 1 || l.xi2 < 1) throw usage_error("grid levels must be positive");
  const int need = 2 * c.degree + 2;
  if (QuadratureGrid::exactness_for(l) < need)
    throw usage_error("grid " + std::to_string(l.t) + "," + std::to_string(l.xi1) + "," + std::to_string(l.xi2) + " integrates degree " +
                      std::to_string(QuadratureGrid::exactness_for(l)) + " exactly; degree " + std::to_string(need) + " is required");
  if (c.format != "csv" && c.format != "json") throw usage_error("--format must be csv or json");
}

Discretization make_disc(const RunConfig& c, const GridLevels& l) {
  if (!c.cache.empty()) return cached_discretization(c.cache, c.degree, l);
  return Discretization(c.degree, l);
}

fs::path out_path(const RunConfig& c, const std::string& stem, const std::string& ext) { return fs::path(c.output) / (stem + "." + ext); }

std::string fmt(double x) { return format_double(x); }

int cmd_spectrum(const std::string& kind_name, const RunConfig& c) {
  const SpectrumKind kind = parse_spectrum_kind(kind_name);
  const HarmonicBasis basis(c.degree);
  const auto d = assemble_frame_derivatives(basis);
  const SpectrumComparison cmp = compare_spectrum(kind, c.degree, numeric_spectrum(kind, d));
  const std::string stem = "spectrum_" + kind_name + "_N" + std::to_string(c.degree);
  const fs::path p = out_path(c, stem, c.format);
  write_atomic(p, c.format == "csv" ? spectrum_csv(cmp) : dump(spectrum_json(cmp, c.tol.spectrum)));

  int bad = 0;
  for (const auto& r : cmp.rows) bad += r.ok(c.tol.spectrum) ? 0 : 1;
  std::cout << "spectrum " << kind_name << " N=" << c.degree << ": " << cmp.rows.size() << " rows, " << bad << " failing (tol "
            << fmt(c.tol.spectrum) << ")\n";
  for (const auto& r : cmp.rows) {
    if (r.eigenvalue_closed_form > 0 && r.k) continue;
    std::cout << "  k=" << (r.k ? std::to_string(*r.k) : "-") << " n=" << (r.n ? std::to_string(*r.n) : "-")
              << " value=" << fmt(r.eigenvalue_numeric) << " mult=" << r.mult_real_numeric << "\n";
  }
  std::cout << "wrote " << p.string() << "\n";
  return bad == 0 ? kOk : kVerification;
}

long long inequality_samples_target(const RunConfig& c) { return c.samples > 0 ? c.samples : 100000; }

// grows the grid until fields * nodes covers the requested node samples
GridLevels inequality_levels(const RunConfig& c, int fields) {
  GridLevels l = resolve_levels(c);
  if (!c.grid.empty()) return l;
  while (1LL * fields * l.t * l.xi1 * l.xi2 < inequality_samples_target(c)) {
    l.t += 1;
    l.xi1 += 2;
    l.xi2 += 2;
  }
  return l;
}

int cmd_verify(const std::string& suite, const RunConfig& c) {
  const int fields = 20;
  const GridLevels levels = suite == "inequalities" ? inequality_levels(c, fields) : resolve_levels(c);
  validate(c, levels);
  const Discretization disc = make_disc(c, levels);
  SuiteReport rep;
  if (suite == "identities") {
    rep = verify_identities(disc, c.seed, c.samples > 0 ? static_cast<int>(c.samples) : 20, c.tol);
  } else if (suite == "inequalities") {
    rep = verify_inequalities(disc, c.seed, fields, c.tol);
  } else if (suite == "hessians") {
    rep = verify_hessians(disc, c.seed, c.samples > 0 ? static_cast<int>(c.samples) : 50, c.tol);
  } else {
    rep = verify_rigidity(disc, c.seed, c.tol);
  }
  const fs::path p = out_path(c, "verify_" + suite, c.format);
  write_atomic(p, c.format == "csv" ? suite_csv(rep) : dump(suite_json(rep)));

  int failing = 0;
  for (const auto& ch : rep.checks) failing += ch.pass ? 0 : 1;
  std::cout << "verify " << suite << " seed=" << c.seed << " grid=" << levels.t << "," << levels.xi1 << "," << levels.xi2;
  if (rep.samples) std::cout << " samples=" << rep.samples;
  std::cout << ": " << rep.checks.size() << " checks, " << failing << " failing\n";
  for (const auto& ch : rep.checks) {
    if (ch.name.find("[seed=") != std::string::npos && ch.pass) continue;
    std::cout << "  " << (ch.pass ? "ok   " : "FAIL ") << ch.name << " = " << fmt(ch.value) << " (" << to_string(ch.relation)
              << fmt(ch.tolerance) << ")\n";
  }
  if (rep.offender) {
    const fs::path fp = out_path(c, "failure_" + suite + "_seed" + std::to_string(rep.offender->seed), "json");
    Json j{{"check", rep.offender->check}, {"seed", rep.offender->seed}, {"field", rep.offender->field}};
    write_atomic(fp, dump(j));
    std::cout << "offending field (seed " << rep.offender->seed << ") written to " << fp.string() << "\n";
  }
  std::cout << "wrote " << p.string() << "\n";
  return rep.passed() ? kOk : kVerification;
}

int cmd_flow(const std::string& init, const RunConfig& c) {
  const GridLevels levels = resolve_levels(c);
  validate(c, levels);
  const Discretization disc = make_disc(c, levels);
  FramedField f0;
  if (init == "hopf") {
    f0 = hopf_left(disc, {1, 0, 0});
  } else if (init == "perturbed") {
    f0 = perturbed_hopf(disc, c.amplitude);
  } else {
    if (c.random_degree < 1 || c.random_degree > c.degree) throw usage_error("--random-degree must lie in 1..degree");
    f0 = random_unit(disc, c.random_degree, c.seed);
  }
  const FlowTrace t = gradient_flow(disc, f0, c.flow);
  const FramedField& f = t.final_field;
  const EnergyReport energies = energy_identity_report(disc, f);
  const HopfClassification cls = classify_hopf(disc, f, c.tol.classification);
  const double energy_error = std::abs(t.steps.back().energy - kHopfEnergy);
  const bool converged = t.status == FlowStatus::converged;
  const bool hopf_ok = cls.is_hopf && energy_error < c.flow_energy_tol;

  const fs::path trace = out_path(c, "flow_" + init + "_trace", c.format);
  write_atomic(trace, c.format == "csv" ? flow_trace_csv(t) : dump(flow_trace_json(t)));
  const fs::path field = out_path(c, "flow_" + init + "_field", "json");
  write_atomic(field, dump(field_to_json(f, c.degree)));
  Json summary = flow_trace_json(t);
  summary.erase("steps");
  Json report{{"init", init},
              {"seed", c.seed},
              {"initial", field_to_json(f0, c.degree)["provenance"]},
              {"flow", summary},
              {"energy_target", kHopfEnergy},
              {"energy_error", energy_error},
              {"energy_tolerance", c.flow_energy_tol},
              {"energies", energy_report_json(energies)},
              {"classification", classification_json(cls)}};
  const fs::path rp = out_path(c, "flow_" + init + "_report", "json");
  write_atomic(rp, dump(report));

  std::cout << "flow " << init << " (" << f0.provenance.parameters << ") seed=" << c.seed << ": " << to_string(t.status) << " after "
            << t.steps.back().iter << " iterations\n"
            << "  energy " << fmt(t.steps.back().energy) << ", 2 pi^2 = " << fmt(kHopfEnergy) << ", |diff| = " << fmt(energy_error) << "\n"
            << "  residual " << fmt(t.steps.back().residual) << "\n"
            << "  classified " << (cls.is_hopf ? "hopf " : "not hopf ") << to_string(cls.side) << ", distance " << fmt(cls.l2_distance)
            << "\n"
            << "wrote " << trace.string() << ", " << field.string() << ", " << rp.string() << "\n";
  if (!converged) return kNonConvergence;
  return hopf_ok ? kOk : kVerification;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hopf vector fields on S^3: spectra, identity checks and energy flow"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file; command-line flags override it");
  RunConfig c;
  app.add_option("--degree,-N", c.degree, "basis degree N (default 4; 6 for flow)");
  app.add_option("--grid", c.grid, "grid levels t xi1 xi2 (default N+2, 2N+4, 2N+4)")->delimiter(',')->expected(3);
  app.add_option("--seed", c.seed, "seed for randomized inputs");
  app.add_flag("--fresh", c.fresh, "draw a fresh seed and print it");
  app.add_option("--samples", c.samples, "identities: fields; inequalities: node samples; hessians: pairs");
  app.add_option("--output,-o", c.output, "output directory");
  app.add_option("--format", c.format, "report format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--cache", c.cache, "basis/grid cache file");
  app.add_option("--amplitude", c.amplitude, "perturbation amplitude for flow perturbed");
  app.add_option("--random-degree", c.random_degree, "degree of the random initial field for flow random");
  app.add_option("--spectrum-tol", c.tol.spectrum);
  app.add_option("--identity-tol", c.tol.identity_relative);
  app.add_option("--pointwise-tol", c.tol.pointwise);
  app.add_option("--gap-tol", c.tol.gap);
  app.add_option("--hessian-tol", c.tol.hessian);
  app.add_option("--rigidity-tol", c.tol.rigidity);
  app.add_option("--classify-tol", c.tol.classification);
  app.add_option("--energy-tol", c.flow_energy_tol, "flow: allowed |E - 2 pi^2|");
  app.add_option("--flow-tol", c.flow.tol, "flow: residual for convergence");
  app.add_option("--max-iters", c.flow.max_iters);
  app.add_option("--step", c.flow.step, "flow: initial step");

  std::string kind;
  auto* spectrum = app.add_subcommand("spectrum", "closed-form vs numeric spectrum table")->fallthrough();
  spectrum->add_option("kind", kind)->required()->check(CLI::IsMember({"vertical", "hopf-map", "identity"}));
  auto* verify = app.add_subcommand("verify", "seeded verification suite")->fallthrough();
  verify->add_option("suite", kind)->required()->check(CLI::IsMember({"identities", "inequalities", "hessians", "rigidity"}));
  auto* flow = app.add_subcommand("flow", "gradient flow of the vertical energy")->fallthrough();
  flow->add_option("init", kind)->required()->check(CLI::IsMember({"hopf", "perturbed", "random"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  if (c.degree < 0) c.degree = default_degree(command);
  if (c.fresh) {
    c.seed = (static_cast<std::uint64_t>(std::random_device{}()) << 32) ^ std::random_device{}();
    std::cout << "seed: " << c.seed << "\n";
  }
  try {
    if (command == "spectrum") {
      validate(c, resolve_levels(c));
      return cmd_spectrum(kind, c);
    }
    if (command == "verify") return cmd_verify(kind, c);
    return cmd_flow(kind, c);
  } catch (const usage_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const precondition_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const io_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "verification error: " << e.what() << "\n";
    return kVerification;
  }
}
