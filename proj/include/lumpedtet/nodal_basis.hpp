#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "lumpedtet/linalg.hpp"
#include "lumpedtet/polynomial.hpp"
#include "lumpedtet/reference_element.hpp"

namespace lumpedtet {

// Nodal basis of a mass-lumped reference element. Basis functions are kept
// as coefficient vectors over the monomial set selected from the expanded
// space orbits, together with the nine reference stiffness tensors
//
//   K^{ab}_ij = integral over the reference tet of d_a w_i * d_b w_j
//
// which are integrated exactly from the barycentric representation.
struct NodalBasis {
  const ElementTable* table = nullptr;

  std::vector<Exponents> span_monomials;  // selected independent monomials
  DenseMatrix monomial_coeffs;            // column j: w_j over span_monomials
  std::vector<BaryPoly> basis;            // w_j, homogeneous degree p'
  double vandermonde_condition = 0;

  // ref_stiffness[a*3+b] is K^{ab}
  std::array<DenseMatrix, 9> ref_stiffness;

  std::size_t size() const { return basis.size(); }

  double evaluate(std::size_t j, const BarycentricPoint& x) const {
    return basis[j].evaluate(x.b);
  }
};

namespace detail {

inline double monomial_value(const Exponents& e, const std::array<double, 4>& b) {
  double v = 1.0;
  for (int k = 0; k < 4; ++k)
    for (int r = 0; r < e[k]; ++r) v *= b[k];
  return v;
}

}  // namespace detail

// All distinct monomials obtained by permuting the space-orbit generators.
inline std::vector<Exponents> expanded_space_monomials(const ElementTable& table) {
  std::vector<Exponents> all;
  for (const auto& orbit : table.space_orbits)
    for (const auto& e : expand_function_orbit(orbit.generator))
      if (std::find(all.begin(), all.end(), e) == all.end()) all.push_back(e);
  return all;
}

inline NodalBasis build_nodal_basis(const ElementTable& table) {
  table.validate();
  NodalBasis nb;
  nb.table = &table;
  const int target = table.max_degree;
  const std::size_t n = table.node_count();

  // Span extraction: homogenize every candidate monomial to degree p' and
  // pick a maximal independent subset by rank-revealing QR. Orbit expansions
  // of different generators may overlap as functions on the simplex, so the
  // dimension is trusted to the rank computation.
  std::vector<Exponents> candidates = expanded_space_monomials(table);
  const auto& hb = homogeneous_basis(target);
  DenseMatrix coeffs(hb.size(), candidates.size());
  for (std::size_t j = 0; j < candidates.size(); ++j) {
    BaryPoly p = homogenized_monomial(candidates[j], target);
    for (std::size_t i = 0; i < hb.size(); ++i) coeffs(i, j) = p.coeff[i];
  }
  CpqrResult qr = cpqr_rank(coeffs, 1e-10);
  if (qr.rank != n)
    throw std::runtime_error("build_nodal_basis(" + table.id + "): span dimension " +
                             std::to_string(qr.rank) + " does not match node count " +
                             std::to_string(n));
  nb.span_monomials.resize(n);
  for (std::size_t k = 0; k < n; ++k) nb.span_monomials[k] = candidates[qr.pivots[k]];

  // Generalized Vandermonde V_ij = phi_j(x_i); nodal coefficients satisfy
  // V * C = I. Values of the homogenized monomials on the simplex coincide
  // with the raw monomial values.
  DenseMatrix v(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      v(i, j) = detail::monomial_value(nb.span_monomials[j], table.nodes[i].b);
  nb.vandermonde_condition = condition_number(v);
  if (!(nb.vandermonde_condition < 1e12))
    throw std::runtime_error("build_nodal_basis(" + table.id +
                             "): Vandermonde condition number above 1e12");
  nb.monomial_coeffs = invert(v);

  nb.basis.resize(n);
  std::vector<BaryPoly> phi(n);
  for (std::size_t j = 0; j < n; ++j) phi[j] = homogenized_monomial(nb.span_monomials[j], target);
  for (std::size_t j = 0; j < n; ++j) {
    BaryPoly w(target);
    for (std::size_t k = 0; k < n; ++k) {
      double c = nb.monomial_coeffs(k, j);
      if (c == 0.0) continue;
      for (std::size_t m = 0; m < w.coeff.size(); ++m) w.coeff[m] += c * phi[k].coeff[m];
    }
    nb.basis[j] = std::move(w);
  }

  // Reference stiffness tensors by exact integration of gradient products:
  // K^{ab} = G_a^T T G_b with G_a the derivative coefficients and T the
  // pairing matrix of degree-(p'-1) monomial integrals.
  const auto& gb = homogeneous_basis(target - 1);
  std::array<DenseMatrix, 3> grad;
  for (int a = 0; a < 3; ++a) {
    grad[a] = DenseMatrix(gb.size(), n);
    for (std::size_t j = 0; j < n; ++j) {
      BaryPoly d = cartesian_derivative(nb.basis[j], a);
      for (std::size_t m = 0; m < gb.size(); ++m) grad[a](m, j) = d.coeff[m];
    }
  }
  DenseMatrix pairing = integral_pairing_matrix(target - 1);
  for (int a = 0; a < 3; ++a) {
    DenseMatrix ta = grad[a].transposed() * pairing;
    for (int b = 0; b < 3; ++b) nb.ref_stiffness[a * 3 + b] = ta * grad[b];
  }
  return nb;
}

}  // namespace lumpedtet
