#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "lumpedtet/numbering.hpp"

using namespace lumpedtet;

namespace {

TetMesh single_tet_mesh() {
  TetMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
  m.tets.push_back({{0, 1, 2, 3}, 1.0, 1.0});
  m.validate();
  return m;
}

TetMesh two_tet_mesh() {
  // two tetrahedra sharing the face {1,2,3}
  TetMesh m;
  m.vertices = {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}, {2.0 / 3, 2.0 / 3, 2.0 / 3}};
  m.tets.push_back({{0, 1, 2, 3}, 1.0, 1.0});
  m.tets.push_back({{4, 2, 1, 3}, 1.0, 1.0});
  m.validate();
  return m;
}

// all element-face global index sets grouped by geometric face must agree
void check_conformity(const TetMesh& mesh, const NodalBasis& basis, const GlobalNumbering& num) {
  const ElementTable& table = *basis.table;
  std::map<std::array<int, 3>, std::set<int>> per_face;
  std::map<std::array<int, 3>, int> seen;
  for (std::size_t e = 0; e < mesh.tet_count(); ++e) {
    for (int f = 0; f < 4; ++f) {
      std::array<int, 3> key{};
      int n = 0;
      for (int q = 0; q < 4; ++q)
        if (q != f) key[n++] = mesh.tets[e].v[q];
      std::sort(key.begin(), key.end());
      std::set<int> ids;
      int z = bary_of_vertex[f];
      for (std::size_t r = 0; r < table.node_count(); ++r)
        if (std::abs(table.nodes[r].b[z]) < 1e-12) ids.insert(num.elem_to_global[e][r]);
      auto it = per_face.find(key);
      if (it == per_face.end()) {
        per_face[key] = ids;
        seen[key] = 1;
      } else {
        CHECK(it->second == ids);
        seen[key]++;
      }
    }
  }
  for (const auto& [key, n] : seen) CHECK(n <= 2);
}

}  // namespace

TEST_CASE("node counts on small meshes") {
  ElementTable t1 = build_element_table("ml1");
  NodalBasis b1 = build_nodal_basis(t1);
  CHECK(number_nodes(single_tet_mesh(), b1).size() == 4);

  TetMesh box = build_box_mesh({{0, 0, 0}, {1, 1, 1}}, {1, 1, 1});
  CHECK(number_nodes(box, b1).size() == 8);

  TetMesh box3 = build_box_mesh({{0, 0, 0}, {1, 1, 1}}, {3, 3, 3});
  CHECK(number_nodes(box3, b1).size() == 4 * 4 * 4);

  ElementTable t2 = build_element_table("ml2n15");
  NodalBasis b2 = build_nodal_basis(t2);
  CHECK(number_nodes(two_tet_mesh(), b2).size() == 2 * 15 - 7);
}

TEST_CASE("conformity of shared-face numbering") {
  TetMesh box = build_box_mesh({{0, 0, 0}, {1, 1, 1}}, {2, 2, 2});
  for (const auto& id : {"ml1", "ml2n15", "ml3n32", "ml4n65"}) {
    ElementTable t = build_element_table(id);
    NodalBasis nb = build_nodal_basis(t);
    GlobalNumbering num = number_nodes(box, nb);
    check_conformity(box, nb, num);
  }
  // perturbed interior keeps the mesh conforming
  TetMesh pert = box;
  perturb_interior_vertices(pert, 0.2, 7);
  ElementTable t = build_element_table("ml3n32");
  NodalBasis nb = build_nodal_basis(t);
  check_conformity(pert, nb, number_nodes(pert, nb));
}

TEST_CASE("numbering is invariant under element vertex reordering") {
  ElementTable t = build_element_table("ml2n15");
  NodalBasis nb = build_nodal_basis(t);
  TetMesh a = two_tet_mesh();
  GlobalNumbering na = number_nodes(a, nb);

  TetMesh b = a;
  // even permutation of the vertices keeps the orientation
  b.tets[1].v = {2, 1, 4, 3};
  b.validate();
  GlobalNumbering nbm = number_nodes(b, nb);
  REQUIRE(na.size() == nbm.size());
  for (const auto& p : na.node_coords) {
    bool found = false;
    for (const auto& q : nbm.node_coords)
      if (norm(p - q) < 1e-12) found = true;
    CHECK(found);
  }
}

TEST_CASE("Dirichlet masking marks exactly the tagged-face nodes") {
  ElementTable t = build_element_table("ml1");
  NodalBasis nb = build_nodal_basis(t);

  // all-Neumann box: nothing masked
  TetMesh box = build_box_mesh({{0, 0, 0}, {1, 1, 1}}, {1, 1, 1});
  GlobalNumbering num = number_nodes(box, nb);
  CHECK(num.constrained_count() == 0);

  // tag the two triangles of the x = 0 side: its 4 cube corners are masked
  TetMesh side = box;
  for (std::size_t e = 0; e < side.tet_count(); ++e)
    for (int f = 0; f < 4; ++f) {
      Vec3 centroid{0, 0, 0};
      int n = 0;
      bool boundary = true;
      for (int q = 0; q < 4; ++q)
        if (q != f) centroid += side.vertices[side.tets[e].v[q]], ++n;
      centroid = centroid * (1.0 / n);
      (void)boundary;
      bool on_x0 = true;
      for (int q = 0; q < 4; ++q)
        if (q != f && std::abs(side.vertices[side.tets[e].v[q]].x) > 1e-14) on_x0 = false;
      if (on_x0) side.dirichlet_faces.push_back({static_cast<int>(e), f});
    }
  CHECK(!side.dirichlet_faces.empty());
  GlobalNumbering ns = number_nodes(side, nb);
  CHECK(ns.constrained_count() == 4);
  for (std::size_t i = 0; i < ns.size(); ++i)
    CHECK(ns.interior_mask[i] == (std::abs(ns.node_coords[i].x) > 1e-14));

  // all-Dirichlet single tet: empty interior system
  TetMesh solo = single_tet_mesh();
  tag_all_boundary_dirichlet(solo);
  GlobalNumbering nd = number_nodes(solo, nb);
  CHECK(nd.constrained_count() == 4);
}

TEST_CASE("periodic identification counts owned nodes per honeycomb cell") {
  PeriodicCell cell = build_honeycomb_cell();
  std::map<std::string, std::size_t> expected = {{"ml1", 1},     {"ml2n15", 26}, {"ml3n32", 75},
                                                 {"ml4n60", 178}, {"ml4n61", 184}, {"ml4n65", 196}};
  for (const auto& [id, count] : expected) {
    ElementTable t = build_element_table(id);
    NodalBasis nb = build_nodal_basis(t);
    GlobalNumbering num = number_nodes(cell.mesh, nb);
    PeriodicNumbering p = periodic_identify(num, cell.lattice);
    CHECK(p.owned_count == count);
    for (std::size_t i = 0; i < num.size(); ++i) {
      CHECK(p.owner[i] >= 0);
      CHECK(p.owner[i] < static_cast<int>(p.owned_count));
      for (int c = 0; c < 3; ++c) {
        CHECK(p.offset[i][c] >= 0);
        CHECK(p.offset[i][c] <= 1);
      }
    }
  }
}

TEST_CASE("periodic remap produces a wrap-around numbering") {
  PeriodicCell cell = build_periodic_cell(honeycomb_tensor(), {2, 2, 2});
  ElementTable t = build_element_table("ml1");
  NodalBasis nb = build_nodal_basis(t);
  GlobalNumbering num = number_nodes(cell.mesh, nb);
  PeriodicNumbering p = periodic_identify(num, cell.lattice, {2, 2, 2});
  CHECK(p.owned_count == 8);  // one vertex per cube cell
  GlobalNumbering wrapped = periodic_numbering(num, p);
  CHECK(wrapped.size() == 8);
  CHECK(wrapped.elem_to_global.size() == cell.mesh.tet_count());
}
