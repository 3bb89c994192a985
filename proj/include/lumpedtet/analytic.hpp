#pragma once

#include <cmath>
#include <cstdio>
#include <deque>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "lumpedtet/mesh.hpp"
#include "lumpedtet/time_integration.hpp"

namespace lumpedtet {

// ---------------------------------------------------------------------------
// Analytic point-source solution with Neumann mirror images
// ---------------------------------------------------------------------------

// u(x,t) = amplitude * sum over the source and its images of
// w(t - r/c_P) / (4 pi r). All images carry parity +1 (Neumann walls).
struct PointSourceSolution {
  Vec3 source;
  double c_p = 1;
  double f_peak = 1;
  double amplitude = 1;
  std::vector<Vec3> images;  // excluding the free-space source itself
};

inline double exact_solution(const PointSourceSolution& sol, const Vec3& x, double t) {
  auto term = [&](const Vec3& src) {
    double r = norm(x - src);
    if (r == 0.0) throw std::runtime_error("exact_solution: evaluation at a source point");
    return ricker_derivative(t - r / sol.c_p, sol.f_peak, 0) / (4.0 * std::numbers::pi * r);
  };
  double u = term(sol.source);
  for (const auto& img : sol.images) u += term(img);
  return sol.amplitude * u;
}

// Breadth-first reflection of the source across the six box planes. An image
// is kept iff its distance to the nearest receiver is at most
// c_P (T_end + support); everything farther is causally invisible in the
// recording window [0, T_end].
inline std::vector<Vec3> build_mirrors(const Box& box, const Vec3& source, double c_p,
                                       double t_end, double support,
                                       const std::vector<Vec3>& receivers) {
  for (int c = 0; c < 3; ++c)
    if (!(source[c] > box.lo[c] && source[c] < box.hi[c]))
      throw std::invalid_argument("build_mirrors: source must lie strictly inside the box");
  const double keep_radius = c_p * (t_end + support);
  const double diam = norm(box.hi - box.lo);
  const double expand_radius = keep_radius + 2.0 * diam;
  auto min_receiver_distance = [&](const Vec3& p) {
    double best = std::numeric_limits<double>::max();
    for (const auto& r : receivers) best = std::min(best, norm(p - r));
    return best;
  };

  std::vector<Vec3> all = {source};
  std::deque<Vec3> queue = {source};
  const double tol = 1e-9 * std::max(1.0, diam);
  while (!queue.empty()) {
    Vec3 p = queue.front();
    queue.pop_front();
    for (int c = 0; c < 3; ++c) {
      for (double plane : {box.lo[c], box.hi[c]}) {
        Vec3 q = p;
        q[c] = 2.0 * plane - p[c];
        if (min_receiver_distance(q) > expand_radius) continue;
        bool seen = false;
        for (const auto& r : all)
          if (norm(r - q) < tol) {
            seen = true;
            break;
          }
        if (!seen) {
          all.push_back(q);
          queue.push_back(q);
        }
      }
    }
  }
  std::vector<Vec3> kept;
  for (std::size_t i = 1; i < all.size(); ++i)
    if (min_receiver_distance(all[i]) <= keep_radius) kept.push_back(all[i]);
  return kept;
}

// ---------------------------------------------------------------------------
// Receiver traces
// ---------------------------------------------------------------------------

struct TraceSet {
  std::vector<double> times;
  std::vector<std::vector<double>> values;  // [receiver][sample]

  std::size_t receiver_count() const { return values.size(); }
};

inline void write_traces(std::ostream& out, const TraceSet& traces) {
  out << "t";
  for (std::size_t r = 0; r < traces.receiver_count(); ++r) out << ",r" << (r + 1);
  out << "\n";
  char buf[48];
  for (std::size_t s = 0; s < traces.times.size(); ++s) {
    std::snprintf(buf, sizeof buf, "%.17g", traces.times[s]);
    out << buf;
    for (std::size_t r = 0; r < traces.receiver_count(); ++r) {
      std::snprintf(buf, sizeof buf, ",%.17g", traces.values[r][s]);
      out << buf;
    }
    out << "\n";
  }
}

inline TraceSet read_traces(std::istream& in) {
  TraceSet t;
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace file: missing header");
  std::size_t nr = std::count(line.begin(), line.end(), ',');
  t.values.resize(nr);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string field;
    std::getline(ss, field, ',');
    t.times.push_back(std::stod(field));
    for (std::size_t r = 0; r < nr; ++r) {
      if (!std::getline(ss, field, ',')) throw std::runtime_error("trace file: short row");
      t.values[r].push_back(std::stod(field));
    }
  }
  return t;
}

// Catmull-Rom interpolation of a uniformly sampled trace onto new times.
inline std::vector<double> resample_cubic(const std::vector<double>& times,
                                          const std::vector<double>& values,
                                          const std::vector<double>& new_times) {
  if (times.size() < 2 || times.size() != values.size())
    throw std::invalid_argument("resample_cubic: bad input grid");
  double t0 = times.front(), dt = times[1] - times[0];
  std::vector<double> out(new_times.size());
  auto at = [&](long i) {
    i = std::clamp<long>(i, 0, static_cast<long>(values.size()) - 1);
    return values[i];
  };
  for (std::size_t s = 0; s < new_times.size(); ++s) {
    double x = (new_times[s] - t0) / dt;
    if (x < -1e-9 || x > values.size() - 1 + 1e-9)
      throw std::runtime_error("resample_cubic: requested time outside the reference grid");
    long i = static_cast<long>(std::floor(x));
    double f = x - i;
    double p0 = at(i - 1), p1 = at(i), p2 = at(i + 1), p3 = at(i + 2);
    out[s] = p1 + 0.5 * f * (p2 - p0 + f * (2 * p0 - 5 * p1 + 4 * p2 - p3 +
                                            f * (3 * (p1 - p2) + p3 - p0)));
  }
  return out;
}

// ---------------------------------------------------------------------------
// RMS error between trace sets
// ---------------------------------------------------------------------------

struct ErrorReport {
  double rms_abs = 0;
  double rms_rel = 0;
};

// RMS over all receivers and samples; the reference is resampled onto the
// solver grid by cubic interpolation when the grids differ.
inline ErrorReport rms_error(const TraceSet& traces, const TraceSet& reference) {
  if (traces.receiver_count() != reference.receiver_count())
    throw std::invalid_argument("rms_error: receiver count mismatch");
  const std::size_t nr = traces.receiver_count();
  bool same_grid = traces.times.size() == reference.times.size();
  if (same_grid)
    for (std::size_t s = 0; s < traces.times.size(); ++s)
      if (std::abs(traces.times[s] - reference.times[s]) > 1e-12) {
        same_grid = false;
        break;
      }
  double num = 0, den = 0;
  std::size_t count = 0;
  for (std::size_t r = 0; r < nr; ++r) {
    std::vector<double> ref = same_grid
                                  ? reference.values[r]
                                  : resample_cubic(reference.times, reference.values[r],
                                                   traces.times);
    if (ref.size() != traces.values[r].size())
      throw std::runtime_error("rms_error: grid mismatch after resampling");
    for (std::size_t s = 0; s < ref.size(); ++s) {
      double d = traces.values[r][s] - ref[s];
      num += d * d;
      den += ref[s] * ref[s];
      ++count;
    }
  }
  ErrorReport rep;
  if (count == 0) return rep;
  rep.rms_abs = std::sqrt(num / count);
  rep.rms_rel = den > 0 ? std::sqrt(num / den) : 0.0;
  return rep;
}

}  // namespace lumpedtet
