#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <set>
#include <stdexcept>
#include <vector>

#include "lumpedtet/assembly.hpp"
#include "lumpedtet/numbering.hpp"
#include "lumpedtet/parallel.hpp"
#include "lumpedtet/time_integration.hpp"

namespace lumpedtet {

// ---------------------------------------------------------------------------
// Periodic-cell submatrices
// ---------------------------------------------------------------------------

// Mass diagonal and the stiffness couplings of the owned nodes of one
// honeycomb cell, binned by lattice-offset stencil k in {-1,0,1}^3, for a
// homogeneous medium with rho = c = 1.
struct SymbolFactory {
  PeriodicCell cell;
  std::size_t n0 = 0;
  std::vector<double> mass_cell;
  std::array<DenseMatrix, 27> stiffness_blocks;
  std::vector<std::size_t> neighbor_counts;  // |N(q)|, connected nodes incl. q itself

  static int block_index(const std::array<int, 3>& k) {
    for (int c = 0; c < 3; ++c)
      if (k[c] < -1 || k[c] > 1)
        throw std::runtime_error("SymbolFactory: coupling beyond nearest-neighbour cells");
    return ((k[0] + 1) * 3 + (k[1] + 1)) * 3 + (k[2] + 1);
  }
  static std::array<int, 3> block_offset(int idx) {
    return {idx / 9 - 1, (idx / 3) % 3 - 1, idx % 3 - 1};
  }

  double cell_volume() const { return cell.cell_volume; }
  double average_element_volume() const { return cell.average_element_volume; }
};

inline SymbolFactory build_symbol_factory(const NodalBasis& basis) {
  SymbolFactory f;
  f.cell = build_honeycomb_cell();
  GlobalNumbering num = number_nodes(f.cell.mesh, basis);
  PeriodicNumbering per = periodic_identify(num, f.cell.lattice);
  f.n0 = per.owned_count;
  f.mass_cell.assign(f.n0, 0.0);
  for (auto& b : f.stiffness_blocks) b = DenseMatrix(f.n0, f.n0);

  const ElementTable& table = *basis.table;
  std::vector<std::set<int>> neighbors(f.n0);
  for (std::size_t e = 0; e < f.cell.mesh.tet_count(); ++e) {
    AffineMap map = affine_map(f.cell.mesh, e);
    DenseMatrix ae = element_stiffness(basis, map, 1.0);
    const auto& gid = num.elem_to_global[e];
    for (std::size_t a = 0; a < table.node_count(); ++a) {
      int ga = gid[a];
      f.mass_cell[per.owner[ga]] += map.volume_ratio * table.node_weights[a];
      for (std::size_t b = 0; b < table.node_count(); ++b) {
        int gb = gid[b];
        std::array<int, 3> m{per.offset[gb][0] - per.offset[ga][0],
                             per.offset[gb][1] - per.offset[ga][1],
                             per.offset[gb][2] - per.offset[ga][2]};
        f.stiffness_blocks[SymbolFactory::block_index(m)](per.owner[ga], per.owner[gb]) +=
            ae(a, b);
        neighbors[per.owner[ga]].insert(per.owner[gb] * 27 + SymbolFactory::block_index(m));
      }
    }
  }
  f.neighbor_counts.resize(f.n0);
  for (std::size_t q = 0; q < f.n0; ++q) f.neighbor_counts[q] = neighbors[q].size();
  return f;
}

// Eigenvalues of the Fourier symbol at wave vector kappa: the Hermitian
// matrix D^-1/2 (sum_k e^{i kappa . T k} A_k) D^-1/2 with D the mass
// diagonal. All n0 eigenvalues, ascending.
inline std::vector<double> symbol_eigenvalues(const SymbolFactory& f, const Vec3& kappa) {
  using cd = std::complex<double>;
  const std::size_t n = f.n0;
  std::vector<cd> h(n * n, cd(0, 0));
  for (int idx = 0; idx < 27; ++idx) {
    std::array<int, 3> k = SymbolFactory::block_offset(idx);
    Vec3 shift = f.cell.lattice * Vec3{double(k[0]), double(k[1]), double(k[2])};
    cd phase = std::exp(cd(0.0, dot(kappa, shift)));
    const DenseMatrix& a = f.stiffness_blocks[idx];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h[i * n + j] += phase * a(i, j);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double di = 1.0 / std::sqrt(f.mass_cell[i]);
    for (std::size_t j = 0; j < n; ++j) h[i * n + j] *= di / std::sqrt(f.mass_cell[j]);
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) {
      cd sym = 0.5 * (h[i * n + j] + std::conj(h[j * n + i]));
      h[i * n + j] = sym;
      h[j * n + i] = std::conj(sym);
    }
  return hermitian_eigenvalues(n, std::move(h));
}

// Largest deviation from Hermitian symmetry of the unsymmetrized symbol,
// relative to its magnitude.
inline double symbol_hermitian_residual(const SymbolFactory& f, const Vec3& kappa) {
  using cd = std::complex<double>;
  const std::size_t n = f.n0;
  std::vector<cd> h(n * n, cd(0, 0));
  for (int idx = 0; idx < 27; ++idx) {
    std::array<int, 3> k = SymbolFactory::block_offset(idx);
    Vec3 shift = f.cell.lattice * Vec3{double(k[0]), double(k[1]), double(k[2])};
    cd phase = std::exp(cd(0.0, dot(kappa, shift)));
    const DenseMatrix& a = f.stiffness_blocks[idx];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h[i * n + j] += phase * a(i, j);
  }
  double scale = 0, res = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      scale = std::max(scale, std::abs(h[i * n + j]));
      res = std::max(res, std::abs(h[i * n + j] - std::conj(h[j * n + i])));
    }
  return scale > 0 ? res / scale : 0.0;
}

// ---------------------------------------------------------------------------
// Numerical plane-wave speeds
// ---------------------------------------------------------------------------

// Angular frequency of the order-2K scheme for a symbol eigenvalue s:
//   omega = (1/dt) arccos( sum_{k<=K} (-dt^2 s)^k / (2k)! ).
inline double numerical_angular_frequency(double s, double dt, int K) {
  double x = dt * dt * s;
  double arg = 1.0, term = 1.0;
  for (int k = 1; k <= K; ++k) {
    term *= -x / ((2.0 * k - 1.0) * (2.0 * k));
    arg += term;
  }
  if (arg > 1.0 + 1e-9 || arg < -1.0 - 1e-9)
    throw std::runtime_error("numerical_angular_frequency: unstable mode (|cos| > 1)");
  arg = std::clamp(arg, -1.0, 1.0);
  return std::acos(arg) / dt;
}

// Propagation speeds |omega|/|kappa| of all branches.
inline std::vector<double> numerical_speeds(const std::vector<double>& s_values, double kappa_norm,
                                            double dt, int K) {
  std::vector<double> speeds(s_values.size());
  for (std::size_t i = 0; i < s_values.size(); ++i)
    speeds[i] = std::abs(numerical_angular_frequency(s_values[i], dt, K)) / kappa_norm;
  return speeds;
}

// ---------------------------------------------------------------------------
// Brillouin-zone scan for the largest symbol eigenvalue
// ---------------------------------------------------------------------------

namespace detail {

// Largest symbol eigenvalue by power iteration; used only to locate the
// grid maximum (the refined value always comes from the full eigensolver).
inline double symbol_max_power(const SymbolFactory& f, const Vec3& kappa, int iters = 48) {
  using cd = std::complex<double>;
  const std::size_t n = f.n0;
  std::vector<cd> h(n * n, cd(0, 0));
  for (int idx = 0; idx < 27; ++idx) {
    std::array<int, 3> k = SymbolFactory::block_offset(idx);
    Vec3 shift = f.cell.lattice * Vec3{double(k[0]), double(k[1]), double(k[2])};
    cd phase = std::exp(cd(0.0, dot(kappa, shift)));
    const DenseMatrix& a = f.stiffness_blocks[idx];
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) h[i * n + j] += phase * a(i, j);
  }
  for (std::size_t i = 0; i < n; ++i) {
    double di = 1.0 / std::sqrt(f.mass_cell[i]);
    for (std::size_t j = 0; j < n; ++j) h[i * n + j] *= di / std::sqrt(f.mass_cell[j]);
  }
  std::vector<cd> v(n), w(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = cd(1.0 + 0.37 * ((i * 2654435761u) % 97), 0.11 * i);
  double lambda = 0;
  for (int it = 0; it < iters; ++it) {
    double norm2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      cd s(0, 0);
      for (std::size_t j = 0; j < n; ++j) s += h[i * n + j] * v[j];
      w[i] = s;
      norm2 += std::norm(s);
    }
    double inv = 1.0 / std::sqrt(norm2);
    cd rayleigh(0, 0);
    for (std::size_t i = 0; i < n; ++i) rayleigh += std::conj(v[i]) * w[i];
    lambda = rayleigh.real();
    for (std::size_t i = 0; i < n; ++i) v[i] = w[i] * inv;
  }
  return lambda;
}

}  // namespace detail

// sup over K0 = T^-T [0, 2pi)^3 of the largest eigenvalue, from a 16^3 grid
// with one local refinement around the maximum. With fast_scan the grid pass
// locates the maximum by power iteration; the refinement and the returned
// value always use the full eigensolver.
inline double symbol_max_eigenvalue(const SymbolFactory& f, int grid = 16, int threads = 0,
                                    bool fast_scan = false) {
  Mat3 tinvT = f.cell.lattice.inverse().transposed();
  auto eval = [&](double a, double b, double c) {
    Vec3 kappa = tinvT * Vec3{a, b, c};
    return symbol_eigenvalues(f, kappa).back();
  };
  auto scan = [&](double a, double b, double c) {
    Vec3 kappa = tinvT * Vec3{a, b, c};
    return fast_scan ? detail::symbol_max_power(f, kappa) : symbol_eigenvalues(f, kappa).back();
  };
  const double step = 2.0 * std::numbers::pi / grid;
  std::vector<double> values(grid * grid * grid);
  parallel_for(
      values.size(),
      [&](std::size_t idx) {
        int i = static_cast<int>(idx) / (grid * grid);
        int j = (static_cast<int>(idx) / grid) % grid;
        int k = static_cast<int>(idx) % grid;
        values[idx] = scan(i * step, j * step, k * step);
      },
      threads);
  std::size_t best = 0;
  for (std::size_t idx = 1; idx < values.size(); ++idx)
    if (values[idx] > values[best]) best = idx;
  double bi = (best / (grid * grid)) * step;
  double bj = ((best / grid) % grid) * step;
  double bk = (best % grid) * step;
  double s_max = eval(bi, bj, bk);
  for (int di = -1; di <= 1; ++di)
    for (int dj = -1; dj <= 1; ++dj)
      for (int dk = -1; dk <= 1; ++dk) {
        if (di == 0 && dj == 0 && dk == 0) continue;
        s_max = std::max(s_max, eval(bi + 0.5 * di * step, bj + 0.5 * dj * step,
                                     bk + 0.5 * dk * step));
      }
  return s_max;
}

// ---------------------------------------------------------------------------
// Worst-direction dispersion error
// ---------------------------------------------------------------------------

struct DispersionResult {
  double lambda = 0;
  double elements_per_wavelength = 0;  // N_E = (lambda^3/|e|_av)^(1/3)
  double e_disp = 0;
  Vec3 worst_direction;
};

inline std::vector<Vec3> fibonacci_sphere(int n) {
  std::vector<Vec3> dirs(n);
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - 2.0 * (i + 0.5) / n;
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = golden * i;
    dirs[i] = {r * std::cos(phi), r * std::sin(phi), z};
  }
  return dirs;
}

namespace detail {

// golden-section maximization of fn over [lo, hi]
template <typename Fn>
double golden_max(Fn&& fn, double lo, double hi, int evals, double& best_x) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fn(c), fd = fn(d);
  for (int i = 0; i < evals; ++i) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fn(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fn(d);
    }
  }
  best_x = fc > fd ? c : d;
  return std::max(fc, fd);
}

}  // namespace detail

// Worst-direction relative speed error at wavelength lambda. Directions are
// sampled on a 1024-point Fibonacci sphere lattice and the worst one is
// refined by alternating golden-section sweeps over the spherical angles.
// The branch closest to the physical speed c_P = 1 counts; dt is the largest
// stable step sqrt(c_K / s_max).
inline DispersionResult dispersion_error(const SymbolFactory& f, double lambda, int K,
                                         double s_max, int n_directions = 1024, int threads = 0) {
  if (!(lambda > 0)) throw std::invalid_argument("dispersion_error: lambda must be positive");
  const double kappa_norm = 2.0 * std::numbers::pi / lambda;
  const double dt = std::sqrt(dablain_stability_constant(K) / s_max);
  auto error_at = [&](const Vec3& dir) {
    Vec3 kappa = dir * kappa_norm;
    std::vector<double> s = symbol_eigenvalues(f, kappa);
    double best = std::numeric_limits<double>::max();
    for (double si : s) {
      double speed = std::abs(numerical_angular_frequency(si, dt, K)) / kappa_norm;
      best = std::min(best, std::abs(speed - 1.0));
    }
    return best;
  };

  std::vector<Vec3> dirs = fibonacci_sphere(n_directions);
  std::vector<double> err(dirs.size());
  parallel_for(
      dirs.size(), [&](std::size_t i) { err[i] = error_at(dirs[i]); }, threads);
  std::size_t best = 0;
  for (std::size_t i = 1; i < err.size(); ++i)
    if (err[i] > err[best]) best = i;

  double theta = std::acos(std::clamp(dirs[best].z, -1.0, 1.0));
  double phi = std::atan2(dirs[best].y, dirs[best].x);
  double worst = err[best];
  double window = 2.0 * std::sqrt(4.0 * std::numbers::pi / n_directions);
  auto dir_of = [](double th, double ph) {
    return Vec3{std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
  };
  for (int sweep = 0; sweep < 3; ++sweep) {
    double best_theta = theta;
    worst = detail::golden_max([&](double th) { return error_at(dir_of(th, phi)); },
                               theta - window, theta + window, 10, best_theta);
    theta = best_theta;
    double best_phi = phi;
    worst = detail::golden_max([&](double ph) { return error_at(dir_of(theta, ph)); },
                               phi - window, phi + window, 10, best_phi);
    phi = best_phi;
    window *= 0.35;
  }

  DispersionResult res;
  res.lambda = lambda;
  res.elements_per_wavelength = lambda / std::cbrt(f.average_element_volume());
  res.e_disp = worst;
  res.worst_direction = dir_of(theta, phi);
  return res;
}

// ---------------------------------------------------------------------------
// Cost metrics
// ---------------------------------------------------------------------------

struct CostMetrics {
  double n_vec = 0;    // degrees of freedom per lambda^3 volume
  double n_mat = 0;    // stiffness nonzeros per lambda^3 volume
  double n_dt = 0;     // time steps per oscillation, T0 / dt
  double n_comp = 0;   // n_mat * K * N_dt
  double s_h_max = 0;  // largest symbol eigenvalue over the Brillouin zone
};

inline CostMetrics cost_metrics(const SymbolFactory& f, double lambda, int K, double s_max) {
  CostMetrics m;
  m.s_h_max = s_max;
  double vol = lambda * lambda * lambda / f.cell_volume();
  m.n_vec = static_cast<double>(f.n0) * vol;
  std::size_t stencil = 0;
  for (std::size_t q = 0; q < f.n0; ++q) stencil += f.neighbor_counts[q];
  m.n_mat = vol * static_cast<double>(stencil);
  double dt = std::sqrt(dablain_stability_constant(K) / s_max);
  m.n_dt = lambda / dt;  // T0 = lambda / c_P with c_P = 1
  m.n_comp = m.n_mat * K * m.n_dt;
  return m;
}

// Periodic supercell system (n x n x n honeycomb cells, rho = c = 1) for
// time-domain stability checks of the symbol-based dt.
inline AssembledSystem build_periodic_supercell_system(const NodalBasis& basis, int n) {
  PeriodicCell cell = build_periodic_cell(honeycomb_tensor(), {n, n, n});
  GlobalNumbering num = number_nodes(cell.mesh, basis);
  PeriodicNumbering per = periodic_identify(num, cell.lattice, {n, n, n});
  GlobalNumbering wrapped = periodic_numbering(num, per);
  return assemble_system(cell.mesh, basis, wrapped);
}

}  // namespace lumpedtet
