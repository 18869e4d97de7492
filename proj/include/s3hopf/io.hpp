#pragma once

// Serialization: fields, spectrum tables, flow traces, energy and
// classification reports, and the basis/grid cache. JSON via nlohmann
// (shortest round-trip doubles); CSV with 17 significant digits.

#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "s3hopf/discretization.hpp"
#include "s3hopf/field.hpp"
#include "s3hopf/field_calculus.hpp"
#include "s3hopf/spectrum.hpp"
#include "s3hopf/variational.hpp"

namespace s3hopf {

using Json = nlohmann::ordered_json;

inline constexpr int kFieldFormatVersion = 1;
inline constexpr int kCacheFormatVersion = 1;

struct io_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Writes to a sibling temp file and renames it over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw io_error("cannot open " + tmp.string() + " for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw io_error("write failed: " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw io_error("rename to " + path.string() + " failed: " + ec.message());
  }
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw io_error("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

namespace detail {
inline Json to_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

inline Eigen::VectorXd vector_from_json(const Json& a, Eigen::Index expected, const char* what) {
  if (!a.is_array() || static_cast<Eigen::Index>(a.size()) != expected)
    throw io_error(std::string(what) + ": expected an array of " + std::to_string(expected) + " numbers");
  Eigen::VectorXd v(expected);
  for (Eigen::Index i = 0; i < expected; ++i) v(i) = a[static_cast<std::size_t>(i)].get<double>();
  return v;
}

inline Json optional_number(double x) { return std::isfinite(x) ? Json(x) : Json(nullptr); }

inline Json provenance_json(const Provenance& p) {
  return Json{{"generator", p.generator}, {"seed", p.seed}, {"parameters", p.parameters}};
}

inline Provenance provenance_from_json(const Json& j) {
  Provenance p;
  if (j.is_object()) {
    p.generator = j.value("generator", "");
    p.seed = j.value("seed", std::uint64_t{0});
    p.parameters = j.value("parameters", "");
  }
  return p;
}

inline Json complex_json(std::complex<double> z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }
}  // namespace detail

// ---- fields

inline Json field_to_json(const FramedField& x, int basis_degree) {
  if (x.dimension() != basis_dimension(basis_degree)) throw precondition_error("field_to_json: dimension does not match degree");
  Json j;
  j["format_version"] = kFieldFormatVersion;
  j["kind"] = "framed";
  j["basis_degree"] = basis_degree;
  j["unit"] = to_string(x.unit);
  j["unit_deviation"] = detail::optional_number(x.unit_deviation);
  j["f1"] = detail::to_json(x[0]);
  j["f2"] = detail::to_json(x[1]);
  j["f3"] = detail::to_json(x[2]);
  j["provenance"] = detail::provenance_json(x.provenance);
  return j;
}

inline Json field_to_json(const VariationField& v, int basis_degree) {
  if (v.dimension() != basis_dimension(basis_degree)) throw precondition_error("field_to_json: dimension does not match degree");
  Json j;
  j["format_version"] = kFieldFormatVersion;
  j["kind"] = "variation";
  j["basis_degree"] = basis_degree;
  j["f2"] = detail::to_json(v.f.real());
  j["f3"] = detail::to_json(v.f.imag());
  j["provenance"] = detail::provenance_json(v.provenance);
  return j;
}

namespace detail {
inline int checked_degree(const Json& j, const char* kind) {
  if (!j.is_object()) throw io_error("field json: not an object");
  if (j.value("format_version", -1) != kFieldFormatVersion) throw io_error("field json: unsupported format_version");
  if (j.value("kind", "") != kind) throw io_error(std::string("field json: expected kind '") + kind + "'");
  const int n = j.value("basis_degree", -1);
  if (n < 0 || n > HarmonicBasis::kMaxSupportedDegree) throw io_error("field json: bad basis_degree");
  return n;
}
}  // namespace detail

/// Reads a framed field; basis_degree_out receives the stored degree. The unit
/// flag is restored as stored and not re-measured.
inline FramedField framed_field_from_json(const Json& j, int* basis_degree_out = nullptr) {
  const int n = detail::checked_degree(j, "framed");
  const Eigen::Index dim = basis_dimension(n);
  FramedField x;
  x[0] = detail::vector_from_json(j.at("f1"), dim, "f1");
  x[1] = detail::vector_from_json(j.at("f2"), dim, "f2");
  x[2] = detail::vector_from_json(j.at("f3"), dim, "f3");
  x.unit = parse_unit_mode(j.value("unit", "none"));
  const Json& dev = j.contains("unit_deviation") ? j["unit_deviation"] : Json(nullptr);
  x.unit_deviation = dev.is_number() ? dev.get<double>() : std::numeric_limits<double>::quiet_NaN();
  x.provenance = detail::provenance_from_json(j.value("provenance", Json::object()));
  if (basis_degree_out) *basis_degree_out = n;
  return x;
}

inline VariationField variation_field_from_json(const Json& j, int* basis_degree_out = nullptr) {
  const int n = detail::checked_degree(j, "variation");
  const Eigen::Index dim = basis_dimension(n);
  VariationField v;
  v.f.resize(dim);
  v.f.real() = detail::vector_from_json(j.at("f2"), dim, "f2");
  v.f.imag() = detail::vector_from_json(j.at("f3"), dim, "f3");
  v.provenance = detail::provenance_from_json(j.value("provenance", Json::object()));
  if (basis_degree_out) *basis_degree_out = n;
  return v;
}

/// Loads a field for use on disc: the stored degree must match and a unit flag
/// is re-checked at the nodes.
inline FramedField load_field(const std::filesystem::path& path, const Discretization& disc) {
  int n = -1;
  FramedField x = framed_field_from_json(Json::parse(read_file(path)), &n);
  if (n != disc.max_degree()) throw io_error("field degree " + std::to_string(n) + " does not match basis degree " + std::to_string(disc.max_degree()));
  if (x.unit == UnitMode::exact) return mark_unit(disc, x);
  if (x.unit == UnitMode::normalized) return mark_normalized(disc, x);
  return x;
}

// ---- spectrum

inline const char* kSpectrumCsvHeader = "kind,n,k,eigenvalue_closed_form,eigenvalue_numeric,mult_real_closed,mult_real_numeric,abs_error";

inline std::string spectrum_csv(const SpectrumComparison& c) {
  std::ostringstream os;
  os << kSpectrumCsvHeader << "\n";
  for (const auto& r : c.rows) {
    os << to_string(r.kind) << "," << (r.n ? std::to_string(*r.n) : "") << "," << (r.k ? std::to_string(*r.k) : "") << ","
       << format_double(r.eigenvalue_closed_form) << "," << format_double(r.eigenvalue_numeric) << "," << r.mult_real_closed
       << "," << r.mult_real_numeric << "," << format_double(r.abs_error) << "\n";
  }
  return os.str();
}

inline Json spectrum_json(const SpectrumComparison& c, double tol) {
  Json rows = Json::array();
  for (const auto& r : c.rows) {
    Json row;
    row["kind"] = to_string(r.kind);
    row["n"] = r.n ? Json(*r.n) : Json(nullptr);
    row["k"] = r.k ? Json(*r.k) : Json(nullptr);
    row["eigenvalue_closed_form"] = detail::optional_number(r.eigenvalue_closed_form);
    row["eigenvalue_numeric"] = detail::optional_number(r.eigenvalue_numeric);
    row["mult_real_closed"] = r.mult_real_closed;
    row["mult_real_numeric"] = r.mult_real_numeric;
    row["abs_error"] = detail::optional_number(r.abs_error);
    if (r.kind == SpectrumKind::identity) row["complete"] = r.complete;
    rows.push_back(row);
  }
  return Json{{"kind", to_string(c.kind)}, {"max_degree", c.max_degree}, {"tolerance", tol}, {"passes", c.passes(tol)}, {"rows", rows}};
}

// ---- flow, energies, classification

inline std::string flow_trace_csv(const FlowTrace& t) {
  std::ostringstream os;
  os << "iter,energy,residual,step,unit_violation\n";
  for (const auto& s : t.steps)
    os << s.iter << "," << format_double(s.energy) << "," << format_double(s.residual) << "," << format_double(s.step) << ","
       << format_double(s.unit_violation) << "\n";
  return os.str();
}

inline Json flow_trace_json(const FlowTrace& t) {
  Json steps = Json::array();
  for (const auto& s : t.steps)
    steps.push_back(Json{{"iter", s.iter}, {"energy", s.energy}, {"residual", s.residual}, {"step", s.step}, {"unit_violation", s.unit_violation}});
  Json j;
  j["status"] = to_string(t.status);
  j["iterations"] = t.steps.empty() ? 0 : t.steps.back().iter;
  j["rejected_trials"] = t.rejected_trials;
  j["final_energy"] = t.steps.empty() ? Json(nullptr) : Json(t.steps.back().energy);
  j["final_residual"] = t.steps.empty() ? Json(nullptr) : Json(t.steps.back().residual);
  j["steps"] = steps;
  return j;
}

inline Json energy_report_json(const EnergyReport& r) {
  return Json{{"convention", "E = 1/2 integral of squared differential"},
              {"e_vertical", r.e_vertical},
              {"e_eta", r.e_eta},
              {"e_mu", r.e_mu},
              {"hopf_energy", kHopfEnergy},
              {"identity_residual", r.identity_residual},
              {"pointwise_residual", r.pointwise_residual}};
}

inline Json classification_json(const HopfClassification& c) {
  return Json{{"is_hopf", c.is_hopf},
              {"side", to_string(c.side)},
              {"axis", Json::array({c.axis(0), c.axis(1), c.axis(2)})},
              {"l2_distance", detail::optional_number(c.l2_distance)},
              {"left_distance", detail::optional_number(c.left_distance)},
              {"right_distance", detail::optional_number(c.right_distance)},
              {"killing_residual", c.killing_residual},
              {"geodesity_residual", c.geodesity_residual},
              {"shear_residual", c.shear_residual},
              {"tolerance", c.tolerance}};
}

inline Json rigidity_json(const RigidityReport& r) {
  return Json{{"applicable", r.applicable},
              {"geodesity", r.geodesity},
              {"riccati_residual", r.riccati_residual},
              {"holomorphy_residual", r.holomorphy_residual},
              {"laplacian_residual", r.laplacian_residual},
              {"truncation", r.truncation},
              {"phi_mean", detail::complex_json(r.phi_mean)},
              {"phi_min_abs", r.phi_min_abs},
              {"phi_max_abs", r.phi_max_abs},
              {"distance_to_plus_i", r.distance_to_plus_i},
              {"distance_to_minus_i", r.distance_to_minus_i},
              {"fallback_nodes", r.fallback_nodes}};
}

// ---- basis/grid cache

inline Json cache_json(const Discretization& disc) {
  const HarmonicBasis& b = disc.basis();
  Json tables = Json::array();
  for (int n = 0; n <= b.max_degree(); ++n) {
    const Eigen::MatrixXd& t = b.coefficients(n);
    Json rows = Json::array();
    for (Eigen::Index r = 0; r < t.rows(); ++r) rows.push_back(detail::to_json(t.row(r).transpose()));
    tables.push_back(Json{{"degree", n}, {"rows", t.rows()}, {"cols", t.cols()}, {"table", rows}});
  }
  const GridLevels& l = disc.grid().levels();
  Json w = Json::array();
  for (double x : disc.grid().weights()) w.push_back(x);
  return Json{{"format_version", kCacheFormatVersion},
              {"max_degree", b.max_degree()},
              {"grid_levels", Json::array({l.t, l.xi1, l.xi2})},
              {"tables", tables},
              {"weights", w}};
}

inline void save_cache(const std::filesystem::path& path, const Discretization& disc) { write_atomic(path, cache_json(disc).dump() + "\n"); }

/// Rebuilds a discretization from a cache; nullopt when the file is missing,
/// unreadable, of another version, or built for other parameters.
inline std::optional<Discretization> load_cache(const std::filesystem::path& path, int max_degree, GridLevels levels) {
  std::error_code ec;
  if (!std::filesystem::exists(path, ec)) return std::nullopt;
  try {
    const Json j = Json::parse(read_file(path));
    if (j.value("format_version", -1) != kCacheFormatVersion) return std::nullopt;
    if (j.value("max_degree", -1) != max_degree) return std::nullopt;
    const Json& gl = j.at("grid_levels");
    if (!(GridLevels{gl.at(0).get<int>(), gl.at(1).get<int>(), gl.at(2).get<int>()} == levels)) return std::nullopt;
    QuadratureGrid grid = hopf_grid(levels);
    const Json& w = j.at("weights");
    if (w.size() != grid.weights().size()) return std::nullopt;
    for (std::size_t i = 0; i < w.size(); ++i)
      if (w[i].get<double>() != grid.weights()[i]) return std::nullopt;
    std::vector<Eigen::MatrixXd> tables;
    for (const Json& t : j.at("tables")) {
      const auto rows = t.at("rows").get<Eigen::Index>(), cols = t.at("cols").get<Eigen::Index>();
      Eigen::MatrixXd m(rows, cols);
      const Json& data = t.at("table");
      if (static_cast<Eigen::Index>(data.size()) != rows) return std::nullopt;
      for (Eigen::Index r = 0; r < rows; ++r) m.row(r) = detail::vector_from_json(data[static_cast<std::size_t>(r)], cols, "table row").transpose();
      tables.push_back(std::move(m));
    }
    return Discretization(HarmonicBasis::from_tables(max_degree, std::move(tables)), std::move(grid));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

/// Cached discretization: loads when valid, otherwise builds and rewrites the cache.
inline Discretization cached_discretization(const std::filesystem::path& path, int max_degree, GridLevels levels) {
  if (auto d = load_cache(path, max_degree, levels)) return std::move(*d);
  Discretization d(max_degree, levels);
  save_cache(path, d);
  return d;
}

}  // namespace s3hopf
