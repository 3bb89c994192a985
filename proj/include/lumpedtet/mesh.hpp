#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "lumpedtet/linalg.hpp"
#include "lumpedtet/reference_element.hpp"

namespace lumpedtet {

// Local vertex convention: vertex 0 is the image of the reference origin,
// vertices 1..3 the images of the unit points. Barycentric coordinate k
// (k = 0..2 for l1..l3, k = 3 for l4) belongs to local vertex
// vertex_of_bary[k], and local face f is the face opposite local vertex f.
inline constexpr std::array<int, 4> vertex_of_bary{1, 2, 3, 0};
inline constexpr std::array<int, 4> bary_of_vertex{3, 0, 1, 2};

struct TetMesh {
  struct Cell {
    std::array<int, 4> v{};
    double rho = 1.0;
    double c = 1.0;
  };
  struct BoundaryFace {
    int elem = 0;
    int local_face = 0;  // face opposite this local vertex
  };

  std::vector<Vec3> vertices;
  std::vector<Cell> tets;
  std::vector<BoundaryFace> dirichlet_faces;  // untagged faces are Neumann

  std::size_t vertex_count() const { return vertices.size(); }
  std::size_t tet_count() const { return tets.size(); }

  double tet_volume(std::size_t e) const {
    const Cell& t = tets[e];
    Vec3 a = vertices[t.v[1]] - vertices[t.v[0]];
    Vec3 b = vertices[t.v[2]] - vertices[t.v[0]];
    Vec3 c = vertices[t.v[3]] - vertices[t.v[0]];
    return dot(a, cross(b, c)) / 6.0;
  }

  double total_volume() const {
    double v = 0;
    for (std::size_t e = 0; e < tets.size(); ++e) v += tet_volume(e);
    return v;
  }

  double min_edge_length(std::size_t e) const {
    const Cell& t = tets[e];
    double best = std::numeric_limits<double>::max();
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        best = std::min(best, norm(vertices[t.v[i]] - vertices[t.v[j]]));
    return best;
  }

  void validate() const {
    for (const auto& t : tets) {
      for (int k = 0; k < 4; ++k)
        if (t.v[k] < 0 || t.v[k] >= static_cast<int>(vertices.size()))
          throw std::runtime_error("TetMesh: vertex index out of range");
      if (!(t.rho > 0) || !(t.c > 0))
        throw std::runtime_error("TetMesh: material values must be positive");
    }
    for (std::size_t e = 0; e < tets.size(); ++e)
      if (!(tet_volume(e) > 0))
        throw std::runtime_error("TetMesh: non-positive tetrahedron volume");
    for (const auto& f : dirichlet_faces)
      if (f.elem < 0 || f.elem >= static_cast<int>(tets.size()) || f.local_face < 0 ||
          f.local_face > 3)
        throw std::runtime_error("TetMesh: invalid boundary face tag");
  }
};

// Affine reference-to-physical map x = origin + J * xref.
struct AffineMap {
  Vec3 origin;
  Mat3 jacobian;
  Mat3 jacobian_inverse;
  double volume_ratio = 0;  // |e| / |eref| = det J

  Vec3 apply(const std::array<double, 3>& xref) const {
    return origin + jacobian * Vec3{xref[0], xref[1], xref[2]};
  }
  Vec3 apply(const BarycentricPoint& b) const { return apply(b.cartesian()); }
};

inline AffineMap affine_map(const TetMesh& mesh, std::size_t e) {
  const auto& t = mesh.tets[e];
  AffineMap map;
  map.origin = mesh.vertices[t.v[0]];
  map.jacobian = Mat3::from_columns(mesh.vertices[t.v[1]] - map.origin,
                                    mesh.vertices[t.v[2]] - map.origin,
                                    mesh.vertices[t.v[3]] - map.origin);
  map.volume_ratio = map.jacobian.det();
  if (!(map.volume_ratio > 0))
    throw std::runtime_error("affine_map: non-positive element volume (check orientation)");
  map.jacobian_inverse = map.jacobian.inverse();
  return map;
}

// ---------------------------------------------------------------------------
// Structured box meshes from the six-tetrahedra cube split
// ---------------------------------------------------------------------------

// The unit cube is cut by the planes x1=x2, x1=x3, x2=x3 into six
// tetrahedra, one per ordering of the coordinates. Every tet contains the
// main diagonal, and the split is translation invariant, so stacked cubes
// conform.
inline const std::array<std::array<std::array<int, 3>, 4>, 6>& six_tet_cube_split() {
  static const auto tets = [] {
    std::array<std::array<std::array<int, 3>, 4>, 6> out{};
    int n = 0;
    std::array<std::array<int, 3>, 6> perms = {
        {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    for (const auto& p : perms) {
      std::array<std::array<int, 3>, 4> corners{};
      corners[0] = {0, 0, 0};
      corners[1] = corners[0];
      corners[1][p[0]] = 1;
      corners[2] = corners[1];
      corners[2][p[1]] = 1;
      corners[3] = {1, 1, 1};
      // enforce positive orientation
      std::array<double, 3> a{}, b{}, c{};
      for (int k = 0; k < 3; ++k) {
        a[k] = corners[1][k] - corners[0][k];
        b[k] = corners[2][k] - corners[0][k];
        c[k] = corners[3][k] - corners[0][k];
      }
      double det = a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0]) +
                   a[2] * (b[0] * c[1] - b[1] * c[0]);
      if (det < 0) std::swap(corners[2], corners[3]);
      out[n++] = corners;
    }
    return out;
  }();
  return tets;
}

struct Box {
  Vec3 lo, hi;
};

inline TetMesh build_box_mesh(const Box& box, std::array<int, 3> resolution, double rho = 1.0,
                              double c = 1.0) {
  for (int k = 0; k < 3; ++k)
    if (resolution[k] < 1) throw std::invalid_argument("build_box_mesh: resolution must be >= 1");
  Vec3 ext = box.hi - box.lo;
  if (!(ext.x > 0 && ext.y > 0 && ext.z > 0))
    throw std::invalid_argument("build_box_mesh: degenerate box");
  TetMesh mesh;
  auto [nx, ny, nz] = resolution;
  auto vid = [&](int i, int j, int k) { return (i * (ny + 1) + j) * (nz + 1) + k; };
  for (int i = 0; i <= nx; ++i)
    for (int j = 0; j <= ny; ++j)
      for (int k = 0; k <= nz; ++k)
        mesh.vertices.push_back({box.lo.x + ext.x * i / nx, box.lo.y + ext.y * j / ny,
                                 box.lo.z + ext.z * k / nz});
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      for (int k = 0; k < nz; ++k)
        for (const auto& tet : six_tet_cube_split()) {
          TetMesh::Cell cell;
          cell.rho = rho;
          cell.c = c;
          for (int q = 0; q < 4; ++q)
            cell.v[q] = vid(i + tet[q][0], j + tet[q][1], k + tet[q][2]);
          mesh.tets.push_back(cell);
        }
  mesh.validate();
  return mesh;
}

// Tags every boundary face of a box mesh as Dirichlet (a face is on the
// boundary when it has no neighbouring element).
inline void tag_all_boundary_dirichlet(TetMesh& mesh) {
  std::map<std::array<int, 3>, std::pair<int, int>> faces;
  std::map<std::array<int, 3>, int> count;
  for (std::size_t e = 0; e < mesh.tet_count(); ++e)
    for (int f = 0; f < 4; ++f) {
      std::array<int, 3> key{};
      int n = 0;
      for (int q = 0; q < 4; ++q)
        if (q != f) key[n++] = mesh.tets[e].v[q];
      std::sort(key.begin(), key.end());
      count[key]++;
      faces[key] = {static_cast<int>(e), f};
    }
  for (const auto& [key, cnt] : count)
    if (cnt == 1) mesh.dirichlet_faces.push_back({faces[key].first, faces[key].second});
}

// Displaces interior vertices by a deterministic random offset bounded by
// `fraction` of the local minimum edge length; used as an unstructured-mesh
// proxy. Points listed in `keep_fixed` (typically sources and receivers)
// are left alone, and offsets are halved until all volumes stay positive.
inline void perturb_interior_vertices(TetMesh& mesh, double fraction, std::uint64_t seed,
                                      const std::vector<Vec3>& keep_fixed = {}) {
  if (fraction <= 0) return;
  std::vector<double> local_edge(mesh.vertex_count(), std::numeric_limits<double>::max());
  std::vector<bool> boundary(mesh.vertex_count(), false);
  std::map<std::array<int, 3>, int> facecount;
  for (std::size_t e = 0; e < mesh.tet_count(); ++e) {
    double len = mesh.min_edge_length(e);
    for (int q = 0; q < 4; ++q) {
      int v = mesh.tets[e].v[q];
      local_edge[v] = std::min(local_edge[v], len);
    }
    for (int f = 0; f < 4; ++f) {
      std::array<int, 3> key{};
      int n = 0;
      for (int q = 0; q < 4; ++q)
        if (q != f) key[n++] = mesh.tets[e].v[q];
      std::sort(key.begin(), key.end());
      facecount[key]++;
    }
  }
  for (const auto& [key, cnt] : facecount)
    if (cnt == 1)
      for (int v : key) boundary[v] = true;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> offset(mesh.vertex_count());
  for (std::size_t v = 0; v < mesh.vertex_count(); ++v) {
    Vec3 d{u(rng), u(rng), u(rng)};  // drawn for every vertex to keep the stream stable
    if (boundary[v]) continue;
    bool fixed = false;
    for (const auto& p : keep_fixed)
      if (norm(mesh.vertices[v] - p) < 1e-12 * (1.0 + norm(p))) fixed = true;
    if (fixed) continue;
    double dn = norm(d);
    if (dn > 1.0 && dn > 0) d = d * (1.0 / dn);
    offset[v] = d * (fraction * local_edge[v]);
  }
  std::vector<Vec3> original = mesh.vertices;
  for (int attempt = 0; attempt < 30; ++attempt) {
    for (std::size_t v = 0; v < mesh.vertex_count(); ++v)
      mesh.vertices[v] = original[v] + offset[v];
    bool ok = true;
    for (std::size_t e = 0; e < mesh.tet_count() && ok; ++e)
      if (!(mesh.tet_volume(e) > 0)) ok = false;
    if (ok) return;
    for (auto& d : offset) d = d * 0.5;
  }
  throw std::runtime_error("perturb_interior_vertices: could not keep volumes positive");
}

// ---------------------------------------------------------------------------
// Periodic honeycomb cell
// ---------------------------------------------------------------------------

// Lattice tensor of the tetragonal disphenoid honeycomb: the sheared image
// of the six-tet cube split whose tetrahedra are congruent and nearly
// regular.
inline Mat3 honeycomb_tensor() {
  Mat3 t;
  t.m = {{{1.0, -1.0 / 3.0, -1.0 / 3.0},
          {0.0, std::sqrt(8.0 / 9.0), -std::sqrt(2.0 / 9.0)},
          {0.0, 0.0, std::sqrt(2.0 / 3.0)}}};
  return t;
}

struct PeriodicCell {
  Mat3 lattice;          // columns are the cell edge vectors
  TetMesh mesh;          // six tetrahedra tiling the parallelepiped
  double cell_volume = 0;
  double average_element_volume = 0;
};

inline PeriodicCell build_periodic_cell(const Mat3& lattice, std::array<int, 3> repeat = {1, 1, 1}) {
  PeriodicCell cell;
  cell.lattice = lattice;
  TetMesh cube = build_box_mesh({{0, 0, 0}, {double(repeat[0]), double(repeat[1]), double(repeat[2])}},
                                repeat, 1.0, 1.0);
  cell.mesh = cube;
  for (auto& v : cell.mesh.vertices) v = lattice * v;
  cell.mesh.validate();
  cell.cell_volume = lattice.det();
  cell.average_element_volume = cell.cell_volume / 6.0;
  return cell;
}

inline PeriodicCell build_honeycomb_cell() { return build_periodic_cell(honeycomb_tensor()); }

// ---------------------------------------------------------------------------
// Mesh file format
// ---------------------------------------------------------------------------
//
//   tetmesh 1
//   <nv> <nt>
//   x y z                      (nv lines)
//   i0 i1 i2 i3 rho c          (nt lines, 0-based)
//   dirichlet_faces <m>        (optional)
//   elem local_face            (m lines)

inline TetMesh read_mesh(std::istream& in) {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "tetmesh" || version != 1)
    throw std::runtime_error("mesh file: bad header, expected 'tetmesh 1'");
  std::size_t nv = 0, nt = 0;
  if (!(in >> nv >> nt)) throw std::runtime_error("mesh file: missing counts");
  TetMesh mesh;
  mesh.vertices.resize(nv);
  for (auto& v : mesh.vertices)
    if (!(in >> v.x >> v.y >> v.z)) throw std::runtime_error("mesh file: malformed vertex line");
  mesh.tets.resize(nt);
  for (auto& t : mesh.tets) {
    if (!(in >> t.v[0] >> t.v[1] >> t.v[2] >> t.v[3] >> t.rho >> t.c))
      throw std::runtime_error("mesh file: malformed element line");
  }
  std::string key;
  if (in >> key) {
    if (key != "dirichlet_faces") throw std::runtime_error("mesh file: unknown record '" + key + "'");
    std::size_t m = 0;
    if (!(in >> m)) throw std::runtime_error("mesh file: malformed dirichlet_faces count");
    mesh.dirichlet_faces.resize(m);
    for (auto& f : mesh.dirichlet_faces)
      if (!(in >> f.elem >> f.local_face))
        throw std::runtime_error("mesh file: malformed dirichlet face line");
  }
  mesh.validate();
  return mesh;
}

inline void write_mesh(std::ostream& out, const TetMesh& mesh) {
  out << "tetmesh 1\n" << mesh.vertex_count() << " " << mesh.tet_count() << "\n";
  char buf[160];
  for (const auto& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x, v.y, v.z);
    out << buf;
  }
  for (const auto& t : mesh.tets) {
    std::snprintf(buf, sizeof buf, "%d %d %d %d %.17g %.17g\n", t.v[0], t.v[1], t.v[2], t.v[3],
                  t.rho, t.c);
    out << buf;
  }
  if (!mesh.dirichlet_faces.empty()) {
    out << "dirichlet_faces " << mesh.dirichlet_faces.size() << "\n";
    for (const auto& f : mesh.dirichlet_faces) out << f.elem << " " << f.local_face << "\n";
  }
}

}  // namespace lumpedtet
