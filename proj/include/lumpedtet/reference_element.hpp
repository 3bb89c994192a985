#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lumpedtet/polynomial.hpp"

namespace lumpedtet {

// A point on the reference tetrahedron in barycentric coordinates
// (l1, l2, l3, l4) with l1 = x1, l2 = x2, l3 = x3, l4 = 1 - x1 - x2 - x3.
struct BarycentricPoint {
  std::array<double, 4> b{};

  BarycentricPoint() = default;
  explicit BarycentricPoint(const std::array<double, 4>& coords) : b(coords) { check(); }
  static BarycentricPoint from_cartesian(double x1, double x2, double x3) {
    return BarycentricPoint({x1, x2, x3, 1.0 - x1 - x2 - x3});
  }

  double operator[](int i) const { return b[i]; }

  std::array<double, 3> cartesian() const { return {b[0], b[1], b[2]}; }

  void check() const {
    double sum = b[0] + b[1] + b[2] + b[3];
    if (std::abs(sum - 1.0) > 1e-14)
      throw std::invalid_argument("BarycentricPoint: coordinates must sum to 1");
    for (double c : b)
      if (c < -1e-14 || c > 1.0 + 1e-14)
        throw std::invalid_argument("BarycentricPoint: coordinate outside [0,1]");
  }
};

inline bool same_point(const BarycentricPoint& a, const BarycentricPoint& b, double tol = 1e-14) {
  for (int i = 0; i < 4; ++i)
    if (std::abs(a.b[i] - b.b[i]) > tol) return false;
  return true;
}

// All 24 permutations of 4 indices, fixed enumeration order.
inline const std::vector<std::array<int, 4>>& all_barycentric_permutations() {
  static const std::vector<std::array<int, 4>> perms = [] {
    std::array<int, 4> p{0, 1, 2, 3};
    std::vector<std::array<int, 4>> out;
    do {
      out.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
    return out;
  }();
  return perms;
}

// Distinct points produced by all 24 coordinate permutations of the
// generator. The element symmetries are exactly these permutations, so an
// orbit in a node table expands to this set.
inline std::vector<BarycentricPoint> expand_orbit(const BarycentricPoint& gen) {
  std::vector<BarycentricPoint> out;
  for (const auto& p : all_barycentric_permutations()) {
    BarycentricPoint q;
    for (int i = 0; i < 4; ++i) q.b[i] = gen.b[p[i]];
    bool seen = false;
    for (const auto& r : out)
      if (same_point(q, r)) {
        seen = true;
        break;
      }
    if (!seen) out.push_back(q);
  }
  return out;
}

inline std::vector<Exponents> expand_function_orbit(const Exponents& gen) {
  std::vector<Exponents> out;
  for (const auto& p : all_barycentric_permutations()) {
    Exponents e;
    for (int i = 0; i < 4; ++i) e[i] = gen[p[i]];
    if (std::find(out.begin(), out.end(), e) == out.end()) out.push_back(e);
  }
  return out;
}

struct NodeOrbit {
  BarycentricPoint generator;
  double weight = 0;     // reference quadrature weight shared by the orbit
  int multiplicity = 0;  // expected number of distinct permuted points
};

struct FunctionOrbit {
  Exponents generator{};  // barycentric exponent tuple
};

// A mass-lumped reference element: node orbits with weights plus the orbit
// generators of the function space.
struct ElementTable {
  std::string id;
  int degree = 0;      // p
  int max_degree = 0;  // p', maximal total degree appearing in the space
  std::vector<NodeOrbit> node_orbits;
  std::vector<FunctionOrbit> space_orbits;

  // expanded node set, orbit by orbit
  std::vector<BarycentricPoint> nodes;
  std::vector<double> node_weights;
  std::vector<int> node_orbit_index;

  std::size_t node_count() const { return nodes.size(); }

  void expand() {
    nodes.clear();
    node_weights.clear();
    node_orbit_index.clear();
    max_degree = 0;
    for (const auto& f : space_orbits)
      max_degree = std::max(max_degree, f.generator[0] + f.generator[1] + f.generator[2] +
                                            f.generator[3]);
    for (std::size_t o = 0; o < node_orbits.size(); ++o) {
      auto pts = expand_orbit(node_orbits[o].generator);
      if (node_orbits[o].multiplicity == 0)
        node_orbits[o].multiplicity = static_cast<int>(pts.size());
      for (const auto& p : pts) {
        nodes.push_back(p);
        node_weights.push_back(node_orbits[o].weight);
        node_orbit_index.push_back(static_cast<int>(o));
      }
    }
  }

  void validate() const {
    if (degree < 1) throw std::invalid_argument("ElementTable: degree must be >= 1");
    if (node_orbits.empty() || space_orbits.empty())
      throw std::invalid_argument("ElementTable: empty orbit lists");
    for (const auto& o : node_orbits) {
      o.generator.check();
      if (!(o.weight > 0.0))
        throw std::invalid_argument("ElementTable " + id + ": non-positive quadrature weight");
      int n = static_cast<int>(expand_orbit(o.generator).size());
      if (o.multiplicity != n)
        throw std::invalid_argument("ElementTable " + id + ": orbit multiplicity mismatch");
    }
    for (const auto& f : space_orbits) {
      int d = f.generator[0] + f.generator[1] + f.generator[2] + f.generator[3];
      if (d < 1 || d > 8)
        throw std::invalid_argument("ElementTable " + id + ": space generator degree out of range");
      for (int k = 0; k < 4; ++k)
        if (f.generator[k] < 0)
          throw std::invalid_argument("ElementTable " + id + ": negative exponent");
    }
    // orbits must not overlap
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t j = i + 1; j < nodes.size(); ++j)
        if (same_point(nodes[i], nodes[j]))
          throw std::invalid_argument("ElementTable " + id + ": duplicate node across orbits");
  }
};

inline const std::vector<std::string>& builtin_element_ids() {
  static const std::vector<std::string> ids = {"ml1",    "ml2n15", "ml3n32",
                                               "ml4n60", "ml4n61", "ml4n65"};
  return ids;
}

inline ElementTable build_element_table(const std::string& id) {
  ElementTable t;
  t.id = id;
  auto orbit = [](double b1, double b2, double b3, double b4, double w, int n) {
    NodeOrbit o;
    o.generator = BarycentricPoint({b1, b2, b3, b4});
    o.weight = w;
    o.multiplicity = n;
    return o;
  };
  auto cart = [&orbit](double x1, double x2, double x3, double w, int n) {
    return orbit(x1, x2, x3, 1.0 - x1 - x2 - x3, w, n);
  };
  auto space = [&t](int e1, int e2, int e3, int e4) {
    t.space_orbits.push_back({Exponents{e1, e2, e3, e4}});
  };

  if (id == "ml1") {
    t.degree = 1;
    t.node_orbits.push_back(cart(0, 0, 0, 1.0 / 24.0, 4));
    space(1, 0, 0, 0);
  } else if (id == "ml2n15") {
    t.degree = 2;
    t.node_orbits.push_back(cart(0, 0, 0, 17.0 / 5040.0, 4));
    t.node_orbits.push_back(cart(0.5, 0.5, 0, 2.0 / 315.0, 6));
    t.node_orbits.push_back(cart(1.0 / 3.0, 1.0 / 3.0, 0, 9.0 / 560.0, 4));
    t.node_orbits.push_back(cart(0.25, 0.25, 0.25, 16.0 / 315.0, 1));
    space(1, 0, 0, 0);
    space(1, 1, 0, 0);
    space(1, 1, 1, 0);
    space(1, 1, 1, 1);
  } else if (id == "ml3n32") {
    t.degree = 3;
    const double s2 = std::sqrt(2.0);
    const double a = (3.0 - std::sqrt(3.0 * (s2 - 1.0))) / 6.0;
    const double b = (4.0 - s2) / 12.0;
    const double c = 1.0 / 6.0;
    t.node_orbits.push_back(cart(0, 0, 0, (41.0 - 9.0 * s2) / 41160.0, 4));
    t.node_orbits.push_back(cart(a, 0, 0, (8.0 + 9.0 * s2) / 13720.0, 12));
    t.node_orbits.push_back(cart(b, b, 0, (10.0 - s2) / 1715.0, 12));
    t.node_orbits.push_back(cart(c, c, c, 3.0 / 140.0, 4));
    space(1, 0, 0, 0);
    space(2, 1, 0, 0);
    space(2, 1, 1, 0);
    space(2, 1, 1, 1);
  } else if (id == "ml4n60") {
    t.degree = 4;
    t.node_orbits.push_back(cart(0, 0, 0, 0.00009319146955767176, 4));
    t.node_orbits.push_back(cart(0.1614865833496676, 0, 0, 0.0004829332376473431, 12));
    t.node_orbits.push_back(cart(0.5, 0, 0, 0.0002005503792135920, 6));
    t.node_orbits.push_back(
        cart(0.1490219288469598, 0.1490219288469598, 0, 0.002003104085841525, 12));
    t.node_orbits.push_back(
        cart(0.3944591972171783, 0.3944591972171783, 0, 0.001126849366800016, 12));
    {
      const double c1 = 0.1302058846372564;
      t.node_orbits.push_back(cart(c1, c1, c1, 0.009159244489996298, 4));
    }
    {
      const double d = 0.06386116838612691;
      t.node_orbits.push_back(cart(d, d, 0.5 - d, 0.006725322654059780, 6));
    }
    {
      const double c2 = 0.3012179234079087;
      t.node_orbits.push_back(cart(c2, c2, c2, 0.01118676108633598, 4));
    }
    space(1, 0, 0, 0);
    space(2, 1, 0, 0);
    space(2, 2, 0, 0);
    space(2, 1, 1, 0);
    space(2, 2, 1, 0);
    space(2, 1, 1, 1);
    space(2, 2, 1, 1);
    space(2, 2, 2, 1);
  } else if (id == "ml4n61") {
    t.degree = 4;
    t.node_orbits.push_back(cart(0, 0, 0, 0.0001593069370906064, 4));
    t.node_orbits.push_back(cart(0.2001628104707848, 0, 0, 0.0004461325181676239, 12));
    t.node_orbits.push_back(cart(0.5, 0, 0, 0.0003715829945705960, 6));
    t.node_orbits.push_back(
        cart(0.1397350972238366, 0.1397350972238366, 0, 0.001884294964657102, 12));
    t.node_orbits.push_back(
        cart(0.4319436235177682, 0.4319436235177682, 0, 0.001545425606069384, 12));
    {
      const double c1 = 0.1282209316290979;
      t.node_orbits.push_back(cart(c1, c1, c1, 0.008841425190569096, 4));
    }
    {
      const double d = 0.08742182088664353;
      t.node_orbits.push_back(cart(d, d, 0.5 - d, 0.006891012924401557, 6));
    }
    {
      const double c2 = 0.3124061452070811;
      t.node_orbits.push_back(cart(c2, c2, c2, 0.007499563520517103, 4));
    }
    t.node_orbits.push_back(cart(0.25, 0.25, 0.25, 0.01057967149339721, 1));
    space(1, 0, 0, 0);
    space(2, 1, 0, 0);
    space(2, 2, 0, 0);
    space(2, 1, 1, 0);
    space(2, 2, 1, 0);
    space(2, 1, 1, 1);
    space(2, 2, 1, 1);
    space(2, 2, 2, 1);
    space(2, 2, 2, 2);
  } else if (id == "ml4n65") {
    t.degree = 4;
    t.node_orbits.push_back(cart(0, 0, 0, 0.0001216042545112321, 4));
    t.node_orbits.push_back(cart(0.1724919407749086, 0, 0, 0.0004704124198744411, 12));
    t.node_orbits.push_back(cart(0.5, 0, 0, 0.0001767065925083475, 6));
    t.node_orbits.push_back(
        cart(0.1474177969013686, 0.1474177969013686, 0, 0.001974748586596177, 12));
    t.node_orbits.push_back(
        cart(0.4540395272271067, 0.4540395272271067, 0, 0.001192465311769701, 12));
    t.node_orbits.push_back(cart(1.0 / 3.0, 1.0 / 3.0, 0, 0.001044697597634123, 4));
    {
      const double c1 = 0.1282209316290979;
      t.node_orbits.push_back(cart(c1, c1, c1, 0.008841425190569096, 4));
    }
    {
      const double d = 0.08742182088664353;
      t.node_orbits.push_back(cart(d, d, 0.5 - d, 0.006891012924401557, 6));
    }
    {
      const double c2 = 0.3124061452070811;
      t.node_orbits.push_back(cart(c2, c2, c2, 0.007499563520517103, 4));
    }
    t.node_orbits.push_back(cart(0.25, 0.25, 0.25, 0.01057967149339721, 1));
    space(1, 0, 0, 0);
    space(2, 1, 0, 0);
    space(2, 2, 0, 0);
    space(2, 1, 1, 0);
    space(2, 2, 1, 0);
    space(2, 2, 2, 0);
    space(2, 1, 1, 1);
    space(2, 2, 1, 1);
    space(2, 2, 2, 1);
    space(2, 2, 2, 2);
  } else {
    throw std::invalid_argument("build_element_table: unknown element id '" + id + "'");
  }
  t.expand();
  t.validate();
  return t;
}

// Element table file format:
//   mltet 1
//   degree <p>
//   orbit <w> <b1> <b2> <b3> <b4>     (one line per node orbit)
//   space <e1> <e2> <e3> <e4>         (one line per function-orbit generator)
inline ElementTable read_element_table(std::istream& in, const std::string& name = "user") {
  std::string magic;
  int version = 0;
  if (!(in >> magic >> version) || magic != "mltet" || version != 1)
    throw std::runtime_error("element table: bad header, expected 'mltet 1'");
  ElementTable t;
  t.id = name;
  std::string key;
  if (!(in >> key >> t.degree) || key != "degree")
    throw std::runtime_error("element table: expected 'degree <p>'");
  while (in >> key) {
    if (key == "orbit") {
      NodeOrbit o;
      std::array<double, 4> b{};
      if (!(in >> o.weight >> b[0] >> b[1] >> b[2] >> b[3]))
        throw std::runtime_error("element table: malformed orbit line");
      o.generator = BarycentricPoint(b);
      t.node_orbits.push_back(o);
    } else if (key == "space") {
      Exponents e{};
      if (!(in >> e[0] >> e[1] >> e[2] >> e[3]))
        throw std::runtime_error("element table: malformed space line");
      t.space_orbits.push_back({e});
    } else {
      throw std::runtime_error("element table: unknown record '" + key + "'");
    }
  }
  t.expand();
  t.validate();
  return t;
}

inline void write_element_table(std::ostream& out, const ElementTable& t) {
  out << "mltet 1\n";
  out << "degree " << t.degree << "\n";
  char buf[160];
  for (const auto& o : t.node_orbits) {
    std::snprintf(buf, sizeof buf, "orbit %.17g %.17g %.17g %.17g %.17g\n", o.weight,
                  o.generator.b[0], o.generator.b[1], o.generator.b[2], o.generator.b[3]);
    out << buf;
  }
  for (const auto& f : t.space_orbits)
    out << "space " << f.generator[0] << " " << f.generator[1] << " " << f.generator[2] << " "
        << f.generator[3] << "\n";
}

}  // namespace lumpedtet
