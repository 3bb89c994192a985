#pragma once

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "lumpedtet/linalg.hpp"
#include "lumpedtet/simplex_integrals.hpp"

namespace lumpedtet {

// Polynomials on the reference tetrahedron are stored over the homogeneous
// barycentric monomials of a fixed total degree. Restricted to the simplex
// (where l1+l2+l3+l4 = 1) these monomials are linearly independent and span
// all polynomials up to that degree, so the representation is canonical:
// symmetries act by permuting exponents and integrals reduce to the
// factorial formula.

struct MonomialBasis {
  int degree = 0;
  std::vector<Exponents> tuples;
  std::map<int, int> index_of;

  static int pack(const Exponents& e) {
    return ((e[0] * 100 + e[1]) * 100 + e[2]) * 100 + e[3];
  }
  int index(const Exponents& e) const {
    auto it = index_of.find(pack(e));
    if (it == index_of.end()) throw std::logic_error("MonomialBasis: tuple not in basis");
    return it->second;
  }
  std::size_t size() const { return tuples.size(); }
};

inline const MonomialBasis& homogeneous_basis(int degree) {
  static std::vector<MonomialBasis> cache;
  if (degree < 0) throw std::invalid_argument("homogeneous_basis: negative degree");
  if (degree >= static_cast<int>(cache.size())) {
    for (int d = static_cast<int>(cache.size()); d <= degree; ++d) {
      MonomialBasis b;
      b.degree = d;
      for (int e0 = d; e0 >= 0; --e0)
        for (int e1 = d - e0; e1 >= 0; --e1)
          for (int e2 = d - e0 - e1; e2 >= 0; --e2) {
            Exponents e{e0, e1, e2, d - e0 - e1 - e2};
            b.index_of[MonomialBasis::pack(e)] = static_cast<int>(b.tuples.size());
            b.tuples.push_back(e);
          }
      cache.push_back(std::move(b));
    }
  }
  return cache[degree];
}

struct BaryPoly {
  int degree = 0;
  std::vector<double> coeff;

  BaryPoly() = default;
  explicit BaryPoly(int d) : degree(d), coeff(homogeneous_basis(d).size(), 0.0) {}

  double evaluate(const std::array<double, 4>& bary) const {
    const auto& basis = homogeneous_basis(degree);
    double sum = 0;
    for (std::size_t m = 0; m < coeff.size(); ++m) {
      if (coeff[m] == 0.0) continue;
      const Exponents& e = basis.tuples[m];
      double v = coeff[m];
      for (int k = 0; k < 4; ++k)
        for (int r = 0; r < e[k]; ++r) v *= bary[k];
      sum += v;
    }
    return sum;
  }

  double integral() const {
    const auto& basis = homogeneous_basis(degree);
    double sum = 0;
    for (std::size_t m = 0; m < coeff.size(); ++m)
      if (coeff[m] != 0.0) sum += coeff[m] * monomial_integral(basis.tuples[m]);
    return sum;
  }

  double max_abs() const {
    double r = 0;
    for (double c : coeff) r = std::max(r, std::abs(c));
    return r;
  }
};

namespace detail {

inline double multinomial(const Exponents& parts) {
  double v = 1.0;
  int used = 0;
  for (int k = 0; k < 4; ++k) {
    for (int r = 1; r <= parts[k]; ++r) {
      ++used;
      v *= static_cast<double>(used) / static_cast<double>(r);
    }
  }
  return v;
}

}  // namespace detail

// l^e * (l1+l2+l3+l4)^(target-|e|) as a homogeneous polynomial of the target
// degree; on the simplex this equals the raw monomial l^e.
inline BaryPoly homogenized_monomial(const Exponents& e, int target_degree) {
  int d = e[0] + e[1] + e[2] + e[3];
  int k = target_degree - d;
  if (k < 0) throw std::invalid_argument("homogenized_monomial: degree above target");
  BaryPoly p(target_degree);
  const auto& basis = homogeneous_basis(target_degree);
  for (int t0 = k; t0 >= 0; --t0)
    for (int t1 = k - t0; t1 >= 0; --t1)
      for (int t2 = k - t0 - t1; t2 >= 0; --t2) {
        Exponents t{t0, t1, t2, k - t0 - t1 - t2};
        Exponents full{e[0] + t[0], e[1] + t[1], e[2] + t[2], e[3] + t[3]};
        p.coeff[basis.index(full)] += detail::multinomial(t);
      }
  return p;
}

// Partial derivative with respect to the Cartesian coordinate x_{axis+1},
// using dl_i/dx_a = delta_ia for i<4 and dl4/dx_a = -1. The result is
// homogeneous of one degree less.
inline BaryPoly cartesian_derivative(const BaryPoly& p, int axis) {
  if (axis < 0 || axis > 2) throw std::invalid_argument("cartesian_derivative: axis");
  if (p.degree == 0) return BaryPoly(0);
  BaryPoly out(p.degree - 1);
  const auto& basis = homogeneous_basis(p.degree);
  const auto& obasis = homogeneous_basis(p.degree - 1);
  for (std::size_t m = 0; m < p.coeff.size(); ++m) {
    double c = p.coeff[m];
    if (c == 0.0) continue;
    const Exponents& e = basis.tuples[m];
    if (e[axis] > 0) {
      Exponents r = e;
      r[axis] -= 1;
      out.coeff[obasis.index(r)] += c * e[axis];
    }
    if (e[3] > 0) {
      Exponents r = e;
      r[3] -= 1;
      out.coeff[obasis.index(r)] -= c * e[3];
    }
  }
  return out;
}

// Matrix of integrals of products of all degree-d monomial pairs.
inline DenseMatrix integral_pairing_matrix(int degree) {
  const auto& basis = homogeneous_basis(degree);
  std::size_t n = basis.size();
  DenseMatrix t(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      const Exponents& a = basis.tuples[i];
      const Exponents& b = basis.tuples[j];
      double v = monomial_integral(Exponents{a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]});
      t(i, j) = v;
      t(j, i) = v;
    }
  return t;
}

}  // namespace lumpedtet
