#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "lumpedtet/linalg.hpp"
#include "lumpedtet/mesh.hpp"
#include "lumpedtet/nodal_basis.hpp"
#include "lumpedtet/numbering.hpp"

namespace lumpedtet {

// Exact element stiffness for an affine element with constant c:
//   A_e = c * det(J) * sum_ab G_ab K^{ab},  G = J^-1 J^-T.
inline DenseMatrix element_stiffness(const NodalBasis& basis, const AffineMap& map, double c) {
  Mat3 gi = map.jacobian_inverse;
  Mat3 g = gi * gi.transposed();
  std::size_t n = basis.size();
  DenseMatrix a(n, n);
  double scale = c * map.volume_ratio;
  for (int al = 0; al < 3; ++al)
    for (int be = 0; be < 3; ++be) {
      double w = scale * g.m[al][be];
      if (w == 0.0) continue;
      const DenseMatrix& k = basis.ref_stiffness[al * 3 + be];
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) a(i, j) += w * k(i, j);
    }
  return a;
}

// Lumped mass: mass[x] = sum over elements containing x of det(J) w_ref rho_e.
inline std::vector<double> assemble_mass(const TetMesh& mesh, const NodalBasis& basis,
                                         const GlobalNumbering& num) {
  const ElementTable& table = *basis.table;
  std::vector<double> mass(num.size(), 0.0);
  for (std::size_t e = 0; e < mesh.tet_count(); ++e) {
    AffineMap map = affine_map(mesh, e);
    double rho = mesh.tets[e].rho;
    for (std::size_t r = 0; r < table.node_count(); ++r)
      mass[num.elem_to_global[e][r]] += map.volume_ratio * table.node_weights[r] * rho;
  }
  return mass;
}

inline SparseMatrix assemble_stiffness(const TetMesh& mesh, const NodalBasis& basis,
                                       const GlobalNumbering& num) {
  const std::size_t n = basis.size();
  std::vector<std::tuple<int, int, double>> trip;
  trip.reserve(mesh.tet_count() * n * n);
  for (std::size_t e = 0; e < mesh.tet_count(); ++e) {
    AffineMap map = affine_map(mesh, e);
    DenseMatrix ae = element_stiffness(basis, map, mesh.tets[e].c);
    const auto& gid = num.elem_to_global[e];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) trip.emplace_back(gid[i], gid[j], ae(i, j));
  }
  return SparseMatrix::from_triplets(num.size(), std::move(trip));
}

// Diagonal lumped mass, sparse stiffness and the Dirichlet mask of one mesh.
struct AssembledSystem {
  std::vector<double> mass_diag;
  SparseMatrix stiffness;
  std::vector<bool> interior_mask;  // false: constrained to zero
  int threads = 1;

  std::size_t size() const { return mass_diag.size(); }

  // y = A x with constrained rows forced to zero.
  void apply_stiffness(const std::vector<double>& x, std::vector<double>& y) const {
    stiffness.multiply(x, y, threads);
    for (std::size_t i = 0; i < y.size(); ++i)
      if (!interior_mask[i]) y[i] = 0.0;
  }

  void mask(std::vector<double>& x) const {
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!interior_mask[i]) x[i] = 0.0;
  }
};

inline AssembledSystem assemble_system(const TetMesh& mesh, const NodalBasis& basis,
                                       const GlobalNumbering& num) {
  AssembledSystem sys;
  sys.mass_diag = assemble_mass(mesh, basis, num);
  sys.stiffness = assemble_stiffness(mesh, basis, num);
  sys.interior_mask = num.interior_mask;
  for (std::size_t i = 0; i < sys.size(); ++i)
    if (sys.interior_mask[i] && !(sys.mass_diag[i] > 0))
      throw std::runtime_error("assemble_system: non-positive lumped mass entry");
  return sys;
}

// Quadrature source vector for a pointwise-evaluable field f(x, t):
//   entry[x] = sum over elements containing x of det(J) w_ref f(x, t).
inline std::vector<double> assemble_source(const TetMesh& mesh, const NodalBasis& basis,
                                           const GlobalNumbering& num,
                                           const std::function<double(const Vec3&, double)>& f,
                                           double t) {
  const ElementTable& table = *basis.table;
  std::vector<double> load(num.size(), 0.0);
  for (std::size_t e = 0; e < mesh.tet_count(); ++e) {
    AffineMap map = affine_map(mesh, e);
    for (std::size_t r = 0; r < table.node_count(); ++r) {
      Vec3 pos = num.node_coords[num.elem_to_global[e][r]];
      load[num.elem_to_global[e][r]] += map.volume_ratio * table.node_weights[r] * f(pos, t);
    }
  }
  return load;
}

inline int nearest_node(const GlobalNumbering& num, const Vec3& p) {
  int best = -1;
  double bestd = std::numeric_limits<double>::max();
  for (std::size_t i = 0; i < num.size(); ++i) {
    double d = norm(num.node_coords[i] - p);
    if (d < bestd) {
      bestd = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

inline void dump_mass(std::ostream& out, const std::vector<double>& mass) {
  char buf[64];
  for (double v : mass) {
    std::snprintf(buf, sizeof buf, "%.17g\n", v);
    out << buf;
  }
}

inline void dump_stiffness(std::ostream& out, const SparseMatrix& a) {
  char buf[96];
  a.for_each([&](int i, int j, double v) {
    std::snprintf(buf, sizeof buf, "%d %d %.17g\n", i, j, v);
    out << buf;
  });
}

}  // namespace lumpedtet
