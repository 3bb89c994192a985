#include "doctest.h"

#include <cmath>
#include <sstream>

#include "lumpedtet/mesh.hpp"

using namespace lumpedtet;

namespace {

TetMesh reference_tet_mesh() {
  TetMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  m.tets.push_back({{0, 1, 2, 3}, 1.0, 1.0});
  m.validate();
  return m;
}

}  // namespace

TEST_CASE("box meshes: counts and volume partition") {
  TetMesh unit = build_box_mesh({{0, 0, 0}, {1, 1, 1}}, {1, 1, 1});
  CHECK(unit.tet_count() == 6);
  CHECK(unit.vertex_count() == 8);
  CHECK(unit.total_volume() == doctest::Approx(1.0).epsilon(1e-13));

  TetMesh two = build_box_mesh({{0, 0, 0}, {1, 1, 1}}, {2, 2, 2});
  CHECK(two.tet_count() == 48);
  CHECK(two.total_volume() == doctest::Approx(1.0).epsilon(1e-13));

  TetMesh slab = build_box_mesh({{0, 0, 0}, {2, 1, 1}}, {2, 1, 1});
  CHECK(slab.tet_count() == 12);
  CHECK(slab.total_volume() == doctest::Approx(2.0).epsilon(1e-13));

  for (std::size_t e = 0; e < two.tet_count(); ++e) CHECK(two.tet_volume(e) > 0);
  CHECK_THROWS(build_box_mesh({{0, 0, 0}, {0, 1, 1}}, {1, 1, 1}));
  CHECK_THROWS(build_box_mesh({{0, 0, 0}, {1, 1, 1}}, {0, 1, 1}));
}

TEST_CASE("affine map of the reference element is the identity") {
  TetMesh m = reference_tet_mesh();
  AffineMap map = affine_map(m, 0);
  CHECK(map.volume_ratio == doctest::Approx(1.0));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(map.jacobian.m[i][j] == doctest::Approx(i == j ? 1.0 : 0.0));
  Vec3 img = map.apply({0.25, 0.25, 0.25});
  CHECK(img.x == doctest::Approx(0.25));
}

TEST_CASE("affine map scales with the element") {
  TetMesh m = reference_tet_mesh();
  for (auto& v : m.vertices) v = v * 2.0;
  AffineMap map = affine_map(m, 0);
  CHECK(map.volume_ratio == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("reflected vertex order is rejected") {
  TetMesh m = reference_tet_mesh();
  std::swap(m.tets[0].v[0], m.tets[0].v[1]);
  CHECK_THROWS(affine_map(m, 0));
  CHECK_THROWS(m.validate());
}

TEST_CASE("mesh file round trip is exact") {
  TetMesh m = build_box_mesh({{-1, 0, 2}, {1, 1, 3}}, {2, 1, 1}, 1.5, 4.25);
  m.dirichlet_faces.push_back({0, 2});
  std::stringstream ss;
  write_mesh(ss, m);
  TetMesh r = read_mesh(ss);
  REQUIRE(r.vertex_count() == m.vertex_count());
  REQUIRE(r.tet_count() == m.tet_count());
  for (std::size_t i = 0; i < m.vertex_count(); ++i) {
    CHECK(r.vertices[i].x == m.vertices[i].x);
    CHECK(r.vertices[i].y == m.vertices[i].y);
    CHECK(r.vertices[i].z == m.vertices[i].z);
  }
  for (std::size_t e = 0; e < m.tet_count(); ++e) {
    CHECK(r.tets[e].v == m.tets[e].v);
    CHECK(r.tets[e].rho == m.tets[e].rho);
    CHECK(r.tets[e].c == m.tets[e].c);
  }
  REQUIRE(r.dirichlet_faces.size() == 1);
  CHECK(r.dirichlet_faces[0].elem == 0);
  CHECK(r.dirichlet_faces[0].local_face == 2);
}

TEST_CASE("mesh files with invalid data are rejected") {
  {
    std::stringstream ss("tetmesh 1\n4 1\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n0 1 2 3 -1.0 1.0\n");
    CHECK_THROWS(read_mesh(ss));  // negative rho
  }
  {
    std::stringstream ss("tetmesh 1\n4 1\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n0 1 2 4 1.0 1.0\n");
    CHECK_THROWS(read_mesh(ss));  // index out of range
  }
  {
    std::stringstream ss("tetmesh 1\n4 1\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n1 0 2 3 1.0 1.0\n");
    CHECK_THROWS(read_mesh(ss));  // negative volume
  }
  {
    std::stringstream ss("mesh 2\n");
    CHECK_THROWS(read_mesh(ss));
  }
}

TEST_CASE("honeycomb cell geometry") {
  PeriodicCell cell = build_honeycomb_cell();
  CHECK(cell.cell_volume == doctest::Approx(4.0 * std::sqrt(3.0) / 9.0).epsilon(1e-14));
  CHECK(cell.average_element_volume == doctest::Approx(2.0 * std::sqrt(3.0) / 27.0).epsilon(1e-14));
  REQUIRE(cell.mesh.tet_count() == 6);
  double v0 = cell.mesh.tet_volume(0);
  for (std::size_t e = 0; e < 6; ++e)
    CHECK(cell.mesh.tet_volume(e) == doctest::Approx(v0).epsilon(1e-14));

  // congruent elements: identical sorted edge-length lists
  auto edge_lengths = [&](std::size_t e) {
    std::vector<double> len;
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        len.push_back(norm(cell.mesh.vertices[cell.mesh.tets[e].v[i]] -
                           cell.mesh.vertices[cell.mesh.tets[e].v[j]]));
    std::sort(len.begin(), len.end());
    return len;
  };
  auto ref = edge_lengths(0);
  for (std::size_t e = 1; e < 6; ++e) {
    auto len = edge_lengths(e);
    for (int k = 0; k < 6; ++k) CHECK(len[k] == doctest::Approx(ref[k]).epsilon(1e-12));
  }
}

TEST_CASE("honeycomb vertices map onto vertices under lattice translations") {
  PeriodicCell cell = build_honeycomb_cell();
  Mat3 t = cell.lattice;
  Mat3 tinv = t.inverse();
  for (const auto& v : cell.mesh.vertices) {
    for (int kx = -1; kx <= 1; ++kx)
      for (int ky = -1; ky <= 1; ++ky)
        for (int kz = -1; kz <= 1; ++kz) {
          Vec3 shifted = v + t * Vec3{double(kx), double(ky), double(kz)};
          Vec3 cube = tinv * shifted;
          if (cube.x < -1e-12 || cube.x > 1 + 1e-12 || cube.y < -1e-12 || cube.y > 1 + 1e-12 ||
              cube.z < -1e-12 || cube.z > 1 + 1e-12)
            continue;
          bool found = false;
          for (const auto& w : cell.mesh.vertices)
            if (norm(w - shifted) < 1e-12) found = true;
          CHECK(found);
        }
  }
}

TEST_CASE("interior perturbation preserves boundary, volumes and determinism") {
  TetMesh a = build_box_mesh({{0, 0, 0}, {1, 1, 1}}, {3, 3, 3});
  TetMesh b = a;
  Vec3 keep{1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  perturb_interior_vertices(a, 0.2, 42, {keep});
  perturb_interior_vertices(b, 0.2, 42, {keep});
  for (std::size_t e = 0; e < a.tet_count(); ++e) CHECK(a.tet_volume(e) > 0);
  bool moved = false;
  for (std::size_t v = 0; v < a.vertex_count(); ++v) {
    const Vec3& p = a.vertices[v];
    const Vec3& q = build_box_mesh({{0, 0, 0}, {1, 1, 1}}, {3, 3, 3}).vertices[v];
    bool on_boundary = false;
    for (int c = 0; c < 3; ++c)
      if (std::abs(q[c]) < 1e-14 || std::abs(q[c] - 1.0) < 1e-14) on_boundary = true;
    if (on_boundary || norm(q - keep) < 1e-12) {
      CHECK(norm(p - q) == 0.0);
    } else if (norm(p - q) > 0) {
      moved = true;
    }
    CHECK(norm(a.vertices[v] - b.vertices[v]) == 0.0);
  }
  CHECK(moved);
}
