#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "lumpedtet/nodal_basis.hpp"
#include "lumpedtet/reference_element.hpp"
#include "lumpedtet/simplex_integrals.hpp"

namespace lumpedtet {

enum class ExactnessMode {
  kProduct,    // relaxed condition: exact on U x P_{p-2}
  kClassical,  // old condition: exact on P_{p+p'-2}
};

struct ExactnessEntry {
  Exponents monomial{};
  double quadrature = 0;
  double exact = 0;
  double rel_error = 0;
};

struct ExactnessReport {
  ExactnessMode mode = ExactnessMode::kProduct;
  std::vector<ExactnessEntry> entries;
  double max_rel_error = 0;

  bool passed(double tol) const { return max_rel_error <= tol; }
};

namespace detail {

inline std::vector<Exponents> monomials_of_degree(int d) {
  std::vector<Exponents> out;
  for (int e0 = d; e0 >= 0; --e0)
    for (int e1 = d - e0; e1 >= 0; --e1)
      for (int e2 = d - e0 - e1; e2 >= 0; --e2) out.push_back({e0, e1, e2, d - e0 - e1 - e2});
  return out;
}

}  // namespace detail

// Monomial spanning set of the test space for each mode. For the product
// condition, products of the expanded space monomials with the degree-(p-2)
// monomials span U x P_{p-2} (the degree-(p-2) monomials span P_{p-2} on the
// simplex). For p = 1 the test space degenerates to U itself.
inline std::vector<Exponents> exactness_test_monomials(const ElementTable& table,
                                                       ExactnessMode mode) {
  std::vector<Exponents> out;
  auto push_unique = [&out](const Exponents& e) {
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  };
  if (mode == ExactnessMode::kClassical) {
    for (const auto& e : detail::monomials_of_degree(table.degree + table.max_degree - 2))
      push_unique(e);
    return out;
  }
  int q = std::max(table.degree - 2, 0);
  std::vector<Exponents> space = expanded_space_monomials(table);
  for (const auto& e : space)
    for (const auto& t : detail::monomials_of_degree(q))
      push_unique({e[0] + t[0], e[1] + t[1], e[2] + t[2], e[3] + t[3]});
  return out;
}

// Compares the reference quadrature rule against the factorial-formula
// integral on every monomial of a spanning set of the test space.
inline ExactnessReport verify_exactness(const ElementTable& table, ExactnessMode mode) {
  ExactnessReport report;
  report.mode = mode;
  for (const auto& m : exactness_test_monomials(table, mode)) {
    ExactnessEntry entry;
    entry.monomial = m;
    double quad = 0;
    for (std::size_t i = 0; i < table.node_count(); ++i)
      quad += table.node_weights[i] * detail::monomial_value(m, table.nodes[i].b);
    entry.quadrature = quad;
    entry.exact = monomial_integral(m);
    entry.rel_error = std::abs(quad - entry.exact) / std::abs(entry.exact);
    report.max_rel_error = std::max(report.max_rel_error, entry.rel_error);
    report.entries.push_back(entry);
  }
  return report;
}

}  // namespace lumpedtet
