#pragma once

#include <cmath>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "lumpedtet/exactness.hpp"
#include "lumpedtet/nodal_basis.hpp"

namespace lumpedtet {

// Full invariant suite of one reference element, as exposed by the CLI.
struct VerifyReport {
  std::string element;
  bool passed = true;
  std::vector<std::string> lines;

  void check(bool ok, const std::string& what) {
    lines.push_back(std::string(ok ? "  [ok]   " : "  [FAIL] ") + what);
    passed = passed && ok;
  }
  void info(const std::string& what) { lines.push_back("  [info] " + what); }
};

inline VerifyReport verify_element(const ElementTable& table, bool report_old_condition = false) {
  VerifyReport rep;
  rep.element = table.id;
  char buf[256];

  bool weights_positive = true;
  double weight_sum = 0;
  for (std::size_t i = 0; i < table.node_count(); ++i) {
    weights_positive = weights_positive && table.node_weights[i] > 0;
    weight_sum += table.node_weights[i];
  }
  rep.check(weights_positive, "all quadrature weights positive");
  std::snprintf(buf, sizeof buf, "weight sum = 1/6 (deviation %.3g)",
                std::abs(weight_sum - 1.0 / 6.0));
  rep.check(std::abs(weight_sum - 1.0 / 6.0) <= 1e-14, buf);

  std::snprintf(buf, sizeof buf, "%zu nodes in %zu orbits", table.node_count(),
                table.node_orbits.size());
  rep.info(buf);

  ExactnessReport product = verify_exactness(table, ExactnessMode::kProduct);
  std::snprintf(buf, sizeof buf,
                "product exactness on %zu monomials (max rel error %.3g)",
                product.entries.size(), product.max_rel_error);
  rep.check(product.passed(1e-12), buf);

  NodalBasis basis;
  try {
    basis = build_nodal_basis(table);
  } catch (const std::exception& ex) {
    rep.check(false, std::string("nodal basis construction: ") + ex.what());
    return rep;
  }
  std::snprintf(buf, sizeof buf, "span dimension %zu equals node count", basis.size());
  rep.check(basis.size() == table.node_count(), buf);
  std::snprintf(buf, sizeof buf, "Vandermonde condition number %.3g < 1e12",
                basis.vandermonde_condition);
  rep.check(basis.vandermonde_condition < 1e12, buf);

  double kron = 0;
  for (std::size_t j = 0; j < basis.size(); ++j)
    for (std::size_t i = 0; i < table.node_count(); ++i)
      kron = std::max(kron,
                      std::abs(basis.evaluate(j, table.nodes[i]) - (i == j ? 1.0 : 0.0)));
  std::snprintf(buf, sizeof buf, "Kronecker property (max deviation %.3g)", kron);
  rep.check(kron <= 1e-10, buf);

  // face traces: basis functions of off-face nodes vanish on each face
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(1e-3, 1.0);
  double face_worst = 0;
  for (int face = 0; face < 4; ++face)
    for (std::size_t j = 0; j < basis.size(); ++j) {
      if (std::abs(table.nodes[j].b[face]) < 1e-14) continue;
      for (int rep_i = 0; rep_i < 20; ++rep_i) {
        std::array<double, 4> b{};
        double sum = 0;
        for (int k = 0; k < 4; ++k) {
          if (k == face) continue;
          b[k] = -std::log(u(rng));
          sum += b[k];
        }
        for (int k = 0; k < 4; ++k)
          if (k != face) b[k] /= sum;
        face_worst = std::max(face_worst, std::abs(basis.evaluate(j, BarycentricPoint(b))));
      }
    }
  std::snprintf(buf, sizeof buf, "face-trace property (max off-face value %.3g)", face_worst);
  rep.check(face_worst <= 1e-10, buf);

  if (report_old_condition) {
    ExactnessReport classical = verify_exactness(table, ExactnessMode::kClassical);
    std::snprintf(buf, sizeof buf,
                  "classical condition (degree %d): max rel error %.3g (informational)",
                  table.degree + table.max_degree - 2, classical.max_rel_error);
    rep.info(buf);
    int shown = 0;
    for (const auto& e : classical.entries)
      if (e.rel_error > 1e-9 && shown < 8) {
        std::snprintf(buf, sizeof buf,
                      "  monomial l1^%d l2^%d l3^%d l4^%d: quadrature %.12g vs exact %.12g "
                      "(rel %.3g)",
                      e.monomial[0], e.monomial[1], e.monomial[2], e.monomial[3], e.quadrature,
                      e.exact, e.rel_error);
        rep.info(buf);
        ++shown;
      }
  }
  return rep;
}

}  // namespace lumpedtet
