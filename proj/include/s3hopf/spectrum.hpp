#pragma once

// Closed-form and numerical spectra of the three Jacobi-type operators:
//   vertical   Delta - 2i D1 on complex functions      n(n+2) + 2k
//   hopf_map   Delta - 4i D1 on complex functions      n(n+2) + 4k
//   identity   rough Laplacian - 2 on frame triples    k^2+4k-1, k^2+4k
//
// Multiplicities are real dimensions unless a field says otherwise. For the
// complex operators a complex eigenvalue of multiplicity m has real
// multiplicity 2m (f and i f are independent).
//
// Identity operator, degree block n of the frame coefficients:
//   k = n-1, value k^2+4k-1, multiplicity (n+1)^2            (n >= 1)
//   k = n,   value k^2+4k,   multiplicity (n+1)(n+3)
//   k = n-2, value k^2+4k,   multiplicity (n-1)(n+1)          (n >= 2)
// so the second family splits over blocks k and k+2 and is complete only
// when the basis reaches degree k+2.

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "s3hopf/harmonic_basis.hpp"
#include "s3hopf/jacobi_eigen.hpp"
#include "s3hopf/operators.hpp"
#include "s3hopf/parallel.hpp"

namespace s3hopf {

enum class SpectrumKind { vertical, hopf_map, identity };

inline std::string to_string(SpectrumKind k) {
  switch (k) {
    case SpectrumKind::vertical: return "vertical";
    case SpectrumKind::hopf_map: return "hopf-map";
    case SpectrumKind::identity: return "identity";
  }
  return "unknown";
}

inline SpectrumKind parse_spectrum_kind(const std::string& s) {
  if (s == "vertical") return SpectrumKind::vertical;
  if (s == "hopf-map" || s == "hopf_map") return SpectrumKind::hopf_map;
  if (s == "identity") return SpectrumKind::identity;
  throw precondition_error("unknown spectrum kind '" + s + "' (expected vertical, hopf-map or identity)");
}

/// (n, k) label. For the identity operator `family` is 0 for k^2+4k-1 and 1
/// for k^2+4k; the other kinds use family 0 only.
struct SpectrumLabel {
  int n = 0;
  int k = 0;
  int family = 0;
  friend bool operator==(const SpectrumLabel&, const SpectrumLabel&) = default;
  friend auto operator<=>(const SpectrumLabel&, const SpectrumLabel&) = default;
};

struct SpectrumEntry {
  double eigenvalue = 0.0;
  int multiplicity = 0;          // real dimension
  int multiplicity_complex = 0;  // complex dimension (same as real for the identity operator)
  std::optional<SpectrumLabel> label;
  double spread = 0.0;  // numeric only: max distance of a clustered eigenvalue from the cluster mean
};

inline constexpr double kMultiplicityMergeTol = 1e-7;

inline double closed_form_value(SpectrumKind kind, const SpectrumLabel& l) {
  switch (kind) {
    case SpectrumKind::vertical: return l.n * (l.n + 2.0) + 2.0 * l.k;
    case SpectrumKind::hopf_map: return l.n * (l.n + 2.0) + 4.0 * l.k;
    case SpectrumKind::identity: return l.k * (l.k + 4.0) - (l.family == 0 ? 1.0 : 0.0);
  }
  return 0.0;
}

/// Closed-form entries of degree block n.
inline std::vector<SpectrumEntry> closed_form_block(SpectrumKind kind, int n) {
  std::vector<SpectrumEntry> out;
  auto add = [&](SpectrumLabel l, int mult_real, int mult_complex) {
    out.push_back({closed_form_value(kind, l), mult_real, mult_complex, l});
  };
  if (kind == SpectrumKind::identity) {
    if (n >= 1) add({n, n - 1, 0}, (n + 1) * (n + 1), (n + 1) * (n + 1));
    add({n, n, 1}, (n + 1) * (n + 3), (n + 1) * (n + 3));
    if (n >= 2) add({n, n - 2, 1}, (n - 1) * (n + 1), (n - 1) * (n + 1));
  } else {
    for (int k = -n; k <= n; k += 2) add({n, k, 0}, 2 * (n + 1), n + 1);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) { return a.eigenvalue < b.eigenvalue; });
  return out;
}

/// All closed-form entries for degree blocks n <= N, labeled (n, k).
inline std::vector<SpectrumEntry> closed_form_spectrum(SpectrumKind kind, int max_degree) {
  if (max_degree < 0) throw precondition_error("closed_form_spectrum: negative degree");
  std::vector<SpectrumEntry> out;
  for (int n = 0; n <= max_degree; ++n) {
    auto b = closed_form_block(kind, n);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

/// The identity-map spectrum in its k-indexed form, k = 0..K:
/// k^2+4k-1 with multiplicity (k+2)^2 and k^2+4k with multiplicity 2(k+1)(k+3).
inline std::vector<SpectrumEntry> identity_spectrum_by_k(int max_k) {
  std::vector<SpectrumEntry> out;
  for (int k = 0; k <= max_k; ++k) {
    const int m0 = (k + 2) * (k + 2), m1 = 2 * (k + 1) * (k + 3);
    out.push_back({k * (k + 4.0) - 1.0, m0, m0, SpectrumLabel{-1, k, 0}});
    out.push_back({k * (k + 4.0), m1, m1, SpectrumLabel{-1, k, 1}});
  }
  return out;
}

/// Merges entries whose eigenvalues agree within tol, summing multiplicities.
/// Labels are dropped. Result sorted ascending.
inline std::vector<SpectrumEntry> aggregate_by_value(std::vector<SpectrumEntry> entries, double tol = kMultiplicityMergeTol) {
  std::sort(entries.begin(), entries.end(), [](const auto& a, const auto& b) { return a.eigenvalue < b.eigenvalue; });
  std::vector<SpectrumEntry> out;
  for (const auto& e : entries) {
    if (!out.empty() && std::abs(e.eigenvalue - out.back().eigenvalue) <= tol) {
      auto& o = out.back();
      o.eigenvalue = (o.eigenvalue * o.multiplicity + e.eigenvalue * e.multiplicity) / (o.multiplicity + e.multiplicity);
      o.multiplicity += e.multiplicity;
      o.multiplicity_complex += e.multiplicity_complex;
    } else {
      out.push_back({e.eigenvalue, e.multiplicity, e.multiplicity_complex, std::nullopt, 0.0});
    }
  }
  return out;
}

/// Sorted distinct eigenvalues.
inline std::vector<double> distinct_values(const std::vector<SpectrumEntry>& entries, double tol = kMultiplicityMergeTol) {
  std::vector<double> v;
  for (const auto& e : aggregate_by_value(entries, tol)) v.push_back(e.eigenvalue);
  return v;
}

/// Eigenvalues of one degree block, ascending. Complex operators contribute
/// each complex eigenvalue once.
inline std::vector<double> block_eigenvalues(SpectrumKind kind, const std::array<RealBlockOperator, 3>& d, int n) {
  Eigen::VectorXd vals;
  if (kind == SpectrumKind::identity) {
    vals = symmetric_eigen(rough_laplacian_field_block(d, n, 2.0)).values;
  } else {
    const double c = kind == SpectrumKind::vertical ? 2.0 : 4.0;
    const int m = block_dimension(n);
    Eigen::MatrixXcd h = static_cast<double>(n * (n + 2)) * Eigen::MatrixXcd::Identity(m, m);
    h -= std::complex<double>(0.0, c) * d[0].block(n).cast<std::complex<double>>();
    vals = hermitian_eigen(h).values;
  }
  return {vals.data(), vals.data() + vals.size()};
}

/// Numerical spectrum, clustered within each degree block and labeled by the
/// nearest closed-form value of that block. Clusters farther than match_tol
/// from every closed form keep an empty label.
inline std::vector<SpectrumEntry> numeric_spectrum(SpectrumKind kind, const std::array<RealBlockOperator, 3>& d,
                                                   double match_tol = 1e-6) {
  const int N = d[0].max_degree();
  std::vector<std::vector<SpectrumEntry>> per_block(static_cast<std::size_t>(N + 1));
  parallel_for(N + 1, [&](int n) {
    const std::vector<double> vals = block_eigenvalues(kind, d, n);
    const auto closed = closed_form_block(kind, n);
    auto& out = per_block[static_cast<std::size_t>(n)];
    std::size_t i = 0;
    while (i < vals.size()) {
      std::size_t j = i + 1;
      while (j < vals.size() && vals[j] - vals[j - 1] <= kMultiplicityMergeTol) ++j;
      double mean = 0.0;
      for (std::size_t a = i; a < j; ++a) mean += vals[a];
      mean /= static_cast<double>(j - i);
      const int count = static_cast<int>(j - i);
      SpectrumEntry e;
      e.eigenvalue = mean;
      for (std::size_t a = i; a < j; ++a) e.spread = std::max(e.spread, std::abs(vals[a] - mean));
      e.multiplicity = kind == SpectrumKind::identity ? count : 2 * count;
      e.multiplicity_complex = count;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& c : closed) {
        const double dist = std::abs(c.eigenvalue - mean);
        if (dist < best) {
          best = dist;
          if (dist <= match_tol) e.label = c.label;
        }
      }
      out.push_back(e);
      i = j;
    }
  });
  std::vector<SpectrumEntry> out;
  for (const auto& b : per_block) out.insert(out.end(), b.begin(), b.end());
  return out;
}

inline std::vector<SpectrumEntry> checked_spectrum(SpectrumKind kind, const std::array<RealBlockOperator, 3>& d,
                                                   double match_tol) {
  auto s = numeric_spectrum(kind, d, match_tol);
  for (const auto& e : s) {
    if (!e.label) {
      throw std::runtime_error(to_string(kind) + " spectrum: eigenvalue " + std::to_string(e.eigenvalue) +
                               " matches no closed-form value");
    }
  }
  return s;
}

/// Spectrum of Delta - 2i D1. Throws if an eigenvalue has no closed-form partner.
inline std::vector<SpectrumEntry> vertical_jacobi_spectrum(const std::array<RealBlockOperator, 3>& d, double match_tol = 1e-6) {
  return checked_spectrum(SpectrumKind::vertical, d, match_tol);
}

/// Spectrum of Delta - 4i D1.
inline std::vector<SpectrumEntry> hopf_map_jacobi_spectrum(const std::array<RealBlockOperator, 3>& d, double match_tol = 1e-6) {
  return checked_spectrum(SpectrumKind::hopf_map, d, match_tol);
}

/// Spectrum of the rough Laplacian on frame triples minus 2.
inline std::vector<SpectrumEntry> identity_jacobi_spectrum(const std::array<RealBlockOperator, 3>& d, double match_tol = 1e-6) {
  return checked_spectrum(SpectrumKind::identity, d, match_tol);
}

/// One line of the closed-form vs numeric comparison table.
struct SpectrumRow {
  SpectrumKind kind{};
  std::optional<int> n;  // empty for identity rows, which are indexed by k alone
  std::optional<int> k;  // empty for an unmatched numeric cluster
  int family = 0;
  double eigenvalue_closed_form = std::numeric_limits<double>::quiet_NaN();
  double eigenvalue_numeric = std::numeric_limits<double>::quiet_NaN();
  int mult_real_closed = 0;
  int mult_real_numeric = 0;
  double abs_error = std::numeric_limits<double>::infinity();
  bool complete = true;  // identity only: all blocks holding this value lie within the basis

  bool ok(double tol) const { return k.has_value() && abs_error < tol && mult_real_closed == mult_real_numeric; }
};

struct SpectrumComparison {
  SpectrumKind kind{};
  int max_degree = 0;
  std::vector<SpectrumRow> rows;
  bool passes(double tol) const {
    return std::all_of(rows.begin(), rows.end(), [&](const SpectrumRow& r) { return r.ok(tol); });
  }
};

/// Matches numeric entries to closed-form entries. Rows are per (n, k) for the
/// complex operators and per (family, k) for the identity operator, where
/// multiplicities are summed over blocks <= N (mult_real_closed is the count
/// predicted inside the basis, equal to the full multiplicity when complete).
inline SpectrumComparison compare_spectrum(SpectrumKind kind, int max_degree, const std::vector<SpectrumEntry>& numeric) {
  SpectrumComparison cmp{kind, max_degree, {}};
  const auto closed = closed_form_spectrum(kind, max_degree);
  auto key_of = [&](const SpectrumLabel& l) {
    return kind == SpectrumKind::identity ? SpectrumLabel{-1, l.k, l.family} : l;
  };
  std::map<SpectrumLabel, SpectrumRow> rows;
  for (const auto& c : closed) {
    const SpectrumLabel key = key_of(*c.label);
    auto [it, fresh] = rows.try_emplace(key);
    SpectrumRow& r = it->second;
    if (fresh) {
      r.kind = kind;
      if (kind != SpectrumKind::identity) r.n = key.n;
      r.k = key.k;
      r.family = key.family;
      r.eigenvalue_closed_form = c.eigenvalue;
      r.abs_error = 0.0;
    }
    r.mult_real_closed += c.multiplicity;
  }
  std::map<SpectrumLabel, double> weighted;
  for (const auto& e : numeric) {
    if (!e.label) {
      SpectrumRow r;
      r.kind = kind;
      r.eigenvalue_numeric = e.eigenvalue;
      r.mult_real_numeric = e.multiplicity;
      cmp.rows.push_back(r);
      continue;
    }
    const SpectrumLabel key = key_of(*e.label);
    auto it = rows.find(key);
    if (it == rows.end()) throw std::logic_error("compare_spectrum: label outside closed-form table");
    SpectrumRow& r = it->second;
    r.mult_real_numeric += e.multiplicity;
    weighted[key] += e.eigenvalue * e.multiplicity;
    r.abs_error = std::max(r.abs_error, std::abs(e.eigenvalue - r.eigenvalue_closed_form) + e.spread);
  }
  for (auto& [key, r] : rows) {
    if (r.mult_real_numeric > 0) {
      r.eigenvalue_numeric = weighted[key] / r.mult_real_numeric;
    } else {
      r.abs_error = std::numeric_limits<double>::infinity();
    }
    if (kind == SpectrumKind::identity) r.complete = key.k + (key.family == 0 ? 1 : 2) <= max_degree;
    cmp.rows.push_back(r);
  }
  std::stable_sort(cmp.rows.begin(), cmp.rows.end(), [](const SpectrumRow& a, const SpectrumRow& b) {
    const double va = a.k ? a.eigenvalue_closed_form : a.eigenvalue_numeric;
    const double vb = b.k ? b.eigenvalue_closed_form : b.eigenvalue_numeric;
    if (va != vb) return va < vb;
    return a.n.value_or(-1) < b.n.value_or(-1);
  });
  return cmp;
}

}  // namespace s3hopf
