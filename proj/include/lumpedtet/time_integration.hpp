#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>
#include <vector>

#include "lumpedtet/assembly.hpp"

namespace lumpedtet {

// ---------------------------------------------------------------------------
// Ricker wavelet
// ---------------------------------------------------------------------------

// w(t) = (1 - 2 pi^2 f^2 t^2) exp(-pi^2 f^2 t^2). Derivatives of any order
// stay of the form P(t) exp(-a t^2) with P polynomial, so they are generated
// by the recurrence P -> P' - 2 a t P.
inline double ricker_derivative(double t, double f_peak, int order) {
  const double a = std::numbers::pi * std::numbers::pi * f_peak * f_peak;
  std::vector<double> p = {1.0, 0.0, -2.0 * a};
  for (int d = 0; d < order; ++d) {
    std::vector<double> q(p.size() + 1, 0.0);
    for (std::size_t k = 0; k < q.size(); ++k) {
      if (k + 1 < p.size()) q[k] += (k + 1) * p[k + 1];
      if (k >= 1 && k - 1 < p.size()) q[k] -= 2.0 * a * p[k - 1];
    }
    p = std::move(q);
  }
  double poly = 0;
  for (std::size_t k = p.size(); k-- > 0;) poly = poly * t + p[k];
  return poly * std::exp(-a * t * t);
}

struct RickerValue {
  double w = 0;
  double w2 = 0;  // second time derivative
};

inline RickerValue ricker(double t, double f_peak) {
  return {ricker_derivative(t, f_peak, 0), ricker_derivative(t, f_peak, 2)};
}

// Time span after which the wavelet is below machine precision; 0.6 s for a
// 3.5-Hz wavelet.
inline double ricker_support(double f_peak) { return 2.1 / f_peak; }

// ---------------------------------------------------------------------------
// Stable time step
// ---------------------------------------------------------------------------

// Stability constants of the order-2K scheme: the update polynomial
// sum_{k<=K} (-x)^k/(2k)! stays within [-1,1] exactly for x <= c_K.
inline double dablain_stability_constant(int K) {
  switch (K) {
    case 1:
      return 4.0;
    case 2:
      return 12.0;
    case 3:
      return 7.57;
    case 4:
      return 21.48;
    default:
      throw std::invalid_argument("dablain_stability_constant: K must be in 1..4");
  }
}

struct DtEstimate {
  double dt = 0;
  double s_max = 0;
  bool converged = true;
};

// Largest eigenvalue of M^-1 A by power iteration (Rayleigh quotients in the
// M inner product), then dt = safety * sqrt(c_K / s_max). If the iteration
// stalls, the 500-iteration value is used with a 0.85 safety factor.
inline DtEstimate stable_dt(const AssembledSystem& sys, int K, double safety = 0.9) {
  const std::size_t n = sys.size();
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> v(n), av;
  for (std::size_t i = 0; i < n; ++i) v[i] = sys.interior_mask[i] ? u(rng) : 0.0;
  double s = 0, s_prev = -1;
  bool converged = false;
  for (int it = 0; it < 500; ++it) {
    sys.apply_stiffness(v, av);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < n; ++i) {
      num += v[i] * av[i];
      den += v[i] * sys.mass_diag[i] * v[i];
    }
    if (den == 0.0) break;
    s = num / den;
    if (it > 0 && it < 200 && std::abs(s - s_prev) <= 1e-8 * std::abs(s)) {
      converged = true;
      break;
    }
    s_prev = s;
    double norm2 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = av[i] / sys.mass_diag[i];
      norm2 += v[i] * v[i];
    }
    if (norm2 == 0.0) break;
    double inv = 1.0 / std::sqrt(norm2);
    for (auto& x : v) x *= inv;
  }
  DtEstimate est;
  est.s_max = s;
  est.converged = converged;
  if (s <= 0) {
    est.dt = 0;
    return est;
  }
  double factor = converged ? safety : std::min(safety, 0.85);
  est.dt = factor * std::sqrt(dablain_stability_constant(K) / s);
  return est;
}

// ---------------------------------------------------------------------------
// Explicit stepping
// ---------------------------------------------------------------------------

struct WaveState {
  std::vector<double> u_prev, u_curr;
  double t = 0;

  static WaveState zero(std::size_t n, double t0) {
    WaveState s;
    s.u_prev.assign(n, 0.0);
    s.u_curr.assign(n, 0.0);
    s.t = t0;
    return s;
  }
};

// u_next = 2 u - u_prev + dt^2 M^-1 (f - A u); Dirichlet entries re-zeroed.
inline void leapfrog_step(WaveState& state, const AssembledSystem& sys, double dt,
                          const std::vector<double>& load) {
  const std::size_t n = sys.size();
  std::vector<double> au;
  sys.apply_stiffness(state.u_curr, au);
  double dt2 = dt * dt;
  for (std::size_t i = 0; i < n; ++i) {
    double next = 2.0 * state.u_curr[i] - state.u_prev[i] +
                  dt2 * (load[i] - au[i]) / sys.mass_diag[i];
    state.u_prev[i] = state.u_curr[i];
    state.u_curr[i] = sys.interior_mask[i] ? next : 0.0;
  }
  state.t += dt;
}

// Order-2K update built from even time derivatives:
//   d_2    = M^-1 (f - A u)
//   d_2k   = M^-1 (f^(2k-2) - A d_{2k-2})
//   u_next = 2 u - u_prev + sum_k 2 dt^{2k}/(2k)! d_2k.
// load_derivs[m] must hold the order-2m time derivative of the load vector,
// m = 0..K-1 (an empty list is treated as source-free).
inline void dablain_step(WaveState& state, const AssembledSystem& sys, double dt, int K,
                         const std::vector<const std::vector<double>*>& load_derivs = {}) {
  if (K < 1 || K > 4) throw std::invalid_argument("dablain_step: K must be in 1..4");
  const std::size_t n = sys.size();
  std::vector<double> d(state.u_curr);  // d_0 = u
  std::vector<double> acc(n, 0.0), ad;
  double coeff = 2.0;
  double fact = 1.0;
  for (int k = 1; k <= K; ++k) {
    sys.apply_stiffness(d, ad);
    const std::vector<double>* f =
        (k - 1) < static_cast<int>(load_derivs.size()) ? load_derivs[k - 1] : nullptr;
    for (std::size_t i = 0; i < n; ++i)
      d[i] = ((f ? (*f)[i] : 0.0) - ad[i]) / sys.mass_diag[i];
    fact *= (2.0 * k - 1.0) * (2.0 * k);  // (2k)!
    double w = coeff * std::pow(dt, 2.0 * k) / fact;
    for (std::size_t i = 0; i < n; ++i) acc[i] += w * d[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    double next = 2.0 * state.u_curr[i] - state.u_prev[i] + acc[i];
    state.u_prev[i] = state.u_curr[i];
    state.u_curr[i] = sys.interior_mask[i] ? next : 0.0;
  }
  state.t += dt;
}

// Staggered discrete energy of the leap-frog scheme,
//   E = 1/2 dt^-2 (u - u_prev)^T M (u - u_prev) + 1/2 u_prev^T A u,
// which the scheme conserves exactly for source-free runs at a stable dt.
inline double discrete_energy(const WaveState& state, const AssembledSystem& sys, double dt) {
  const std::size_t n = sys.size();
  std::vector<double> au;
  sys.apply_stiffness(state.u_curr, au);
  double kinetic = 0, potential = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double v = (state.u_curr[i] - state.u_prev[i]) / dt;
    kinetic += v * sys.mass_diag[i] * v;
    potential += state.u_prev[i] * au[i];
  }
  return 0.5 * kinetic + 0.5 * potential;
}

inline double state_norm(const WaveState& state) {
  double s = 0;
  for (double v : state.u_curr) s += v * v;
  return std::sqrt(s);
}

}  // namespace lumpedtet
