#pragma once

#include <array>
#include <cmath>
#include <map>
#include <stdexcept>
#include <vector>

#include "lumpedtet/mesh.hpp"
#include "lumpedtet/nodal_basis.hpp"

namespace lumpedtet {

// Global node numbering. Nodes are classified by the zero pattern of their
// reference barycentric coordinates (vertex / edge / face / interior) and
// deduplicated geometrically only against nodes living on the same mesh
// entity; interior nodes are always private to their element.
struct GlobalNumbering {
  std::vector<Vec3> node_coords;
  std::vector<std::vector<int>> elem_to_global;  // aligned with reference node order
  std::vector<bool> interior_mask;               // false on Dirichlet-constrained nodes

  std::size_t size() const { return node_coords.size(); }
  std::size_t constrained_count() const {
    std::size_t n = 0;
    for (bool m : interior_mask)
      if (!m) ++n;
    return n;
  }
};

namespace detail {

enum class NodeKind { kVertex, kEdge, kFace, kInterior };

struct NodeClass {
  NodeKind kind = NodeKind::kInterior;
  std::array<int, 3> bary{};  // nonzero bary indices (vertex: [0], edge: [0..1], face: [0..2])
  int zero_bary = -1;         // for face nodes: the vanishing coordinate
};

inline NodeClass classify_reference_node(const BarycentricPoint& p) {
  NodeClass c;
  std::array<int, 4> zero{};
  int nzero = 0, nnz = 0;
  for (int k = 0; k < 4; ++k) {
    if (std::abs(p.b[k]) < 1e-12) {
      zero[nzero++] = k;
    } else {
      if (nnz < 3) c.bary[nnz] = k;
      ++nnz;
    }
  }
  switch (nzero) {
    case 3:
      c.kind = NodeKind::kVertex;
      break;
    case 2:
      c.kind = NodeKind::kEdge;
      break;
    case 1:
      c.kind = NodeKind::kFace;
      c.zero_bary = zero[0];
      break;
    default:
      c.kind = NodeKind::kInterior;
      break;
  }
  return c;
}

struct EntityBucket {
  std::vector<Vec3> pos;
  std::vector<int> global;
  std::vector<int> creator_elem;
};

}  // namespace detail

inline GlobalNumbering number_nodes(const TetMesh& mesh, const NodalBasis& basis) {
  const ElementTable& table = *basis.table;
  std::vector<detail::NodeClass> cls(table.node_count());
  for (std::size_t r = 0; r < table.node_count(); ++r)
    cls[r] = detail::classify_reference_node(table.nodes[r]);

  GlobalNumbering num;
  num.elem_to_global.assign(mesh.tet_count(), std::vector<int>(table.node_count(), -1));
  std::map<int, int> vertex_nodes;
  std::map<std::array<int, 2>, detail::EntityBucket> edge_nodes;
  std::map<std::array<int, 3>, detail::EntityBucket> face_nodes;

  auto add_node = [&num](const Vec3& p) {
    num.node_coords.push_back(p);
    return static_cast<int>(num.node_coords.size()) - 1;
  };
  auto match_in_bucket = [](detail::EntityBucket& bucket, const Vec3& p, double snap, int elem) {
    for (std::size_t i = 0; i < bucket.pos.size(); ++i)
      if (norm(bucket.pos[i] - p) <= snap) {
        if (bucket.creator_elem[i] == elem)
          throw std::runtime_error(
              "number_nodes: two distinct nodes of one element collide (mesh too distorted)");
        return static_cast<int>(i);
      }
    return -1;
  };

  for (std::size_t e = 0; e < mesh.tet_count(); ++e) {
    const auto& cell = mesh.tets[e];
    double snap = 1e-8 * mesh.min_edge_length(e);
    std::array<Vec3, 4> v;
    for (int k = 0; k < 4; ++k) v[k] = mesh.vertices[cell.v[k]];
    for (std::size_t r = 0; r < table.node_count(); ++r) {
      const auto& b = table.nodes[r].b;
      Vec3 p = v[vertex_of_bary[0]] * b[0] + v[vertex_of_bary[1]] * b[1] +
               v[vertex_of_bary[2]] * b[2] + v[vertex_of_bary[3]] * b[3];
      int gid = -1;
      switch (cls[r].kind) {
        case detail::NodeKind::kVertex: {
          int mv = cell.v[vertex_of_bary[cls[r].bary[0]]];
          auto it = vertex_nodes.find(mv);
          if (it == vertex_nodes.end()) {
            gid = add_node(p);
            vertex_nodes.emplace(mv, gid);
          } else {
            gid = it->second;
          }
          break;
        }
        case detail::NodeKind::kEdge: {
          std::array<int, 2> key{cell.v[vertex_of_bary[cls[r].bary[0]]],
                                 cell.v[vertex_of_bary[cls[r].bary[1]]]};
          if (key[0] > key[1]) std::swap(key[0], key[1]);
          auto& bucket = edge_nodes[key];
          int hit = match_in_bucket(bucket, p, snap, static_cast<int>(e));
          if (hit < 0) {
            gid = add_node(p);
            bucket.pos.push_back(p);
            bucket.global.push_back(gid);
            bucket.creator_elem.push_back(static_cast<int>(e));
          } else {
            gid = bucket.global[hit];
          }
          break;
        }
        case detail::NodeKind::kFace: {
          std::array<int, 3> key{cell.v[vertex_of_bary[cls[r].bary[0]]],
                                 cell.v[vertex_of_bary[cls[r].bary[1]]],
                                 cell.v[vertex_of_bary[cls[r].bary[2]]]};
          std::sort(key.begin(), key.end());
          auto& bucket = face_nodes[key];
          int hit = match_in_bucket(bucket, p, snap, static_cast<int>(e));
          if (hit < 0) {
            gid = add_node(p);
            bucket.pos.push_back(p);
            bucket.global.push_back(gid);
            bucket.creator_elem.push_back(static_cast<int>(e));
          } else {
            gid = bucket.global[hit];
          }
          break;
        }
        case detail::NodeKind::kInterior:
          gid = add_node(p);
          break;
      }
      num.elem_to_global[e][r] = gid;
    }
  }

  num.interior_mask.assign(num.size(), true);
  for (const auto& f : mesh.dirichlet_faces) {
    int z = bary_of_vertex[f.local_face];
    for (std::size_t r = 0; r < table.node_count(); ++r)
      if (std::abs(table.nodes[r].b[z]) < 1e-12)
        num.interior_mask[num.elem_to_global[f.elem][r]] = false;
  }
  return num;
}

// ---------------------------------------------------------------------------
// Periodic node identification on lattice cells
// ---------------------------------------------------------------------------

// Identifies the nodes of a mesh spanning `repeat` lattice cells modulo the
// lattice translations. `owner` maps every node to its representative and
// `offset` records the integer cell shift (in units of single cells) that
// moves the representative onto the node.
struct PeriodicNumbering {
  std::vector<int> owner;
  std::vector<std::array<int, 3>> offset;
  std::vector<Vec3> owned_coords;
  std::size_t owned_count = 0;
};

inline PeriodicNumbering periodic_identify(const GlobalNumbering& num, const Mat3& lattice,
                                           std::array<int, 3> repeat = {1, 1, 1}) {
  Mat3 inv = lattice.inverse();
  PeriodicNumbering p;
  p.owner.assign(num.size(), -1);
  p.offset.assign(num.size(), {0, 0, 0});
  std::vector<std::array<double, 3>> owned_wrapped;
  const double tol = 1e-9;
  for (std::size_t i = 0; i < num.size(); ++i) {
    Vec3 z = inv * num.node_coords[i];
    std::array<double, 3> w{};
    std::array<int, 3> k{};
    for (int c = 0; c < 3; ++c) {
      double zc = z[c];
      double span = repeat[c];
      double wrapped = zc - span * std::floor(zc / span);
      if (wrapped > span - tol) wrapped -= span;
      if (std::abs(wrapped) < tol) wrapped = 0.0;
      w[c] = wrapped;
      k[c] = static_cast<int>(std::llround(zc - wrapped));
    }
    int own = -1;
    for (std::size_t j = 0; j < owned_wrapped.size(); ++j) {
      double d = std::abs(owned_wrapped[j][0] - w[0]) + std::abs(owned_wrapped[j][1] - w[1]) +
                 std::abs(owned_wrapped[j][2] - w[2]);
      if (d < 3 * tol) {
        own = static_cast<int>(j);
        break;
      }
    }
    if (own < 0) {
      own = static_cast<int>(owned_wrapped.size());
      owned_wrapped.push_back(w);
      p.owned_coords.push_back(lattice * Vec3{w[0], w[1], w[2]});
    }
    p.owner[i] = own;
    p.offset[i] = k;
  }
  p.owned_count = owned_wrapped.size();
  return p;
}

// Numbering of a periodic mesh: every node is replaced by its periodic
// representative, which turns plain assembly into periodic assembly.
inline GlobalNumbering periodic_numbering(const GlobalNumbering& num, const PeriodicNumbering& p) {
  GlobalNumbering out;
  out.node_coords = p.owned_coords;
  out.interior_mask.assign(p.owned_count, true);
  out.elem_to_global.resize(num.elem_to_global.size());
  for (std::size_t e = 0; e < num.elem_to_global.size(); ++e) {
    out.elem_to_global[e].resize(num.elem_to_global[e].size());
    for (std::size_t r = 0; r < num.elem_to_global[e].size(); ++r)
      out.elem_to_global[e][r] = p.owner[num.elem_to_global[e][r]];
  }
  return out;
}

}  // namespace lumpedtet
