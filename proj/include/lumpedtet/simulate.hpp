#pragma once

#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "lumpedtet/analytic.hpp"
#include "lumpedtet/assembly.hpp"
#include "lumpedtet/dispersion.hpp"
#include "lumpedtet/numbering.hpp"
#include "lumpedtet/time_integration.hpp"

namespace lumpedtet {

// ---------------------------------------------------------------------------
// Run configuration (JSON, schema field "lumpedtet": 1)
// ---------------------------------------------------------------------------

struct RunConfig {
  std::string element = "ml2n15";
  int time_order = 2;  // K of the order-2K scheme

  bool use_box = true;
  Box box{{-1, -1, -1}, {1, 1, 1}};
  std::array<int, 3> resolution{4, 4, 4};
  std::string mesh_path;
  std::string boundary = "neumann";  // or "dirichlet"
  double perturb = 0.0;
  std::uint64_t seed = 1;

  double rho = 1.0;
  double c = 4.0;

  Vec3 source_position{0, 0, 0};
  double f_peak = 2.5;
  double amplitude = 1.0;
  double start_time = std::numeric_limits<double>::quiet_NaN();  // default: -support

  std::vector<Vec3> receivers;
  double t_end = 0.5;
  double dt_override = 0.0;  // 0: use the stable estimate
  double cfl = 0.9;
  int trace_stride = 1;
  int threads = 0;
  std::string output_dir = ".";
  bool analytic_reference = false;

  double start() const {
    return std::isnan(start_time) ? -ricker_support(f_peak) : start_time;
  }
};

inline RunConfig parse_config(const nlohmann::json& j) {
  if (!j.contains("lumpedtet") || j["lumpedtet"].get<int>() != 1)
    throw std::runtime_error("config: missing schema field \"lumpedtet\": 1");
  RunConfig cfg;
  auto vec3 = [](const nlohmann::json& a) {
    if (!a.is_array() || a.size() != 3) throw std::runtime_error("config: expected [x, y, z]");
    return Vec3{a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
  };
  cfg.element = j.value("element", cfg.element);
  cfg.time_order = j.value("time_order", cfg.time_order);
  if (cfg.time_order < 1 || cfg.time_order > 4)
    throw std::runtime_error("config: time_order must be in 1..4");
  if (j.contains("mesh")) {
    cfg.use_box = false;
    cfg.mesh_path = j["mesh"].get<std::string>();
  }
  if (j.contains("box")) {
    const auto& b = j["box"];
    cfg.box.lo = vec3(b.at("min"));
    cfg.box.hi = vec3(b.at("max"));
    const auto& r = b.at("resolution");
    for (int c = 0; c < 3; ++c) cfg.resolution[c] = r[c].get<int>();
  }
  cfg.boundary = j.value("boundary", cfg.boundary);
  if (cfg.boundary != "neumann" && cfg.boundary != "dirichlet")
    throw std::runtime_error("config: boundary must be neumann or dirichlet");
  cfg.perturb = j.value("perturb", cfg.perturb);
  cfg.seed = j.value("seed", cfg.seed);
  if (j.contains("material")) {
    cfg.rho = j["material"].value("rho", cfg.rho);
    cfg.c = j["material"].value("c", cfg.c);
  }
  if (cfg.rho <= 0 || cfg.c <= 0) throw std::runtime_error("config: material values must be positive");
  if (j.contains("source")) {
    const auto& s = j["source"];
    cfg.source_position = vec3(s.at("position"));
    cfg.f_peak = s.value("f_peak", cfg.f_peak);
    cfg.amplitude = s.value("amplitude", cfg.amplitude);
    if (s.contains("start_time")) cfg.start_time = s["start_time"].get<double>();
  }
  if (cfg.f_peak <= 0) throw std::runtime_error("config: f_peak must be positive");
  if (j.contains("receivers"))
    for (const auto& r : j["receivers"]) cfg.receivers.push_back(vec3(r));
  cfg.t_end = j.value("t_end", cfg.t_end);
  cfg.dt_override = j.value("dt", cfg.dt_override);
  cfg.cfl = j.value("cfl", cfg.cfl);
  cfg.trace_stride = j.value("trace_stride", cfg.trace_stride);
  if (cfg.trace_stride < 1) throw std::runtime_error("config: trace_stride must be >= 1");
  cfg.threads = j.value("threads", cfg.threads);
  cfg.output_dir = j.value("output_dir", cfg.output_dir);
  cfg.analytic_reference = j.value("analytic_reference", cfg.analytic_reference);
  return cfg;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  nlohmann::json j;
  in >> j;
  return parse_config(j);
}

inline ElementTable load_element(const std::string& id_or_path) {
  for (const auto& id : builtin_element_ids())
    if (id == id_or_path) return build_element_table(id);
  std::ifstream in(id_or_path);
  if (!in)
    throw std::runtime_error("element '" + id_or_path +
                             "' is neither a built-in id nor a readable table file");
  return read_element_table(in, id_or_path);
}

// ---------------------------------------------------------------------------
// Simulation driver
// ---------------------------------------------------------------------------

struct SimulationResult {
  TraceSet traces;              // all recorded steps, from the start time
  std::vector<Vec3> receiver_nodes;  // snapped receiver positions
  std::size_t nodes = 0;
  double dt = 0;
  double s_max = 0;
  int steps = 0;
  double wall_seconds = 0;
  bool dt_override_unstable = false;

  // samples of the recording window [0, t_end]
  TraceSet recorded() const {
    TraceSet out;
    out.values.resize(traces.receiver_count());
    for (std::size_t s = 0; s < traces.times.size(); ++s) {
      if (traces.times[s] < -1e-12) continue;
      out.times.push_back(traces.times[s]);
      for (std::size_t r = 0; r < traces.receiver_count(); ++r)
        out.values[r].push_back(traces.values[r][s]);
    }
    return out;
  }
};

inline TetMesh build_config_mesh(const RunConfig& cfg) {
  TetMesh mesh;
  if (cfg.use_box) {
    for (const auto& r : cfg.receivers)
      for (int c = 0; c < 3; ++c)
        if (r[c] < cfg.box.lo[c] - 1e-12 || r[c] > cfg.box.hi[c] + 1e-12)
          throw std::runtime_error("config: receiver outside the closed domain");
    for (int c = 0; c < 3; ++c)
      if (cfg.source_position[c] < cfg.box.lo[c] || cfg.source_position[c] > cfg.box.hi[c])
        throw std::runtime_error("config: point source outside the domain");
    mesh = build_box_mesh(cfg.box, cfg.resolution, cfg.rho, cfg.c);
    if (cfg.perturb > 0) {
      std::vector<Vec3> keep = cfg.receivers;
      keep.push_back(cfg.source_position);
      perturb_interior_vertices(mesh, cfg.perturb, cfg.seed, keep);
    }
  } else {
    std::ifstream in(cfg.mesh_path);
    if (!in) throw std::runtime_error("cannot open mesh file " + cfg.mesh_path);
    mesh = read_mesh(in);
  }
  if (cfg.boundary == "dirichlet") tag_all_boundary_dirichlet(mesh);
  return mesh;
}

inline SimulationResult run_simulation(const RunConfig& cfg) {
  auto t_begin = std::chrono::steady_clock::now();
  TetMesh mesh = build_config_mesh(cfg);
  ElementTable table = load_element(cfg.element);
  NodalBasis basis = build_nodal_basis(table);
  GlobalNumbering num = number_nodes(mesh, basis);
  AssembledSystem sys = assemble_system(mesh, basis, num);
  sys.threads = cfg.threads > 0 ? cfg.threads : default_thread_count();

  SimulationResult result;
  result.nodes = num.size();

  DtEstimate est = stable_dt(sys, cfg.time_order, cfg.cfl);
  result.s_max = est.s_max;
  double dt = cfg.dt_override > 0 ? cfg.dt_override : est.dt;
  if (cfg.dt_override > 0 && est.s_max > 0) {
    double limit = std::sqrt(dablain_stability_constant(cfg.time_order) / est.s_max);
    result.dt_override_unstable = cfg.dt_override > limit;
  }
  double t0 = cfg.start();
  int steps = std::max(1, static_cast<int>(std::ceil((cfg.t_end - t0) / dt - 1e-12)));
  dt = (cfg.t_end - t0) / steps;
  result.dt = dt;
  result.steps = steps;

  int src_node = nearest_node(num, cfg.source_position);
  std::vector<int> rec_nodes;
  for (const auto& r : cfg.receivers) {
    int id = nearest_node(num, r);
    rec_nodes.push_back(id);
    result.receiver_nodes.push_back(num.node_coords[id]);
  }

  WaveState state = WaveState::zero(num.size(), t0);
  result.traces.values.resize(rec_nodes.size());
  auto record = [&]() {
    result.traces.times.push_back(state.t);
    for (std::size_t r = 0; r < rec_nodes.size(); ++r)
      result.traces.values[r].push_back(state.u_curr[rec_nodes[r]]);
  };
  record();

  const int K = cfg.time_order;
  std::vector<std::vector<double>> load(K, std::vector<double>(num.size(), 0.0));
  std::vector<const std::vector<double>*> load_ptrs(K);
  for (int m = 0; m < K; ++m) load_ptrs[m] = &load[m];
  for (int n = 0; n < steps; ++n) {
    // point-source injection: amplitude * w(t) added to the source-node load
    // entry, with the analytic even derivatives for the higher-order terms
    for (int m = 0; m < K; ++m)
      load[m][src_node] = cfg.amplitude * ricker_derivative(state.t, cfg.f_peak, 2 * m);
    if (K == 1) {
      leapfrog_step(state, sys, dt, load[0]);
    } else {
      dablain_step(state, sys, dt, K, load_ptrs);
    }
    if ((n + 1) % cfg.trace_stride == 0 || n + 1 == steps) record();
  }
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin).count();
  return result;
}

// Analytic reference traces for a homogeneous Neumann box, evaluated at the
// snapped receiver nodes on the same time grid. For a load A w(t) d(x-x0)
// the solution is (A/c) w(t - r/c_P)/(4 pi r) per image, c_P = sqrt(c/rho).
inline TraceSet analytic_reference_traces(const RunConfig& cfg, const SimulationResult& sim) {
  if (!cfg.use_box || cfg.boundary != "neumann" || cfg.perturb < 0)
    throw std::runtime_error("analytic reference requires a homogeneous Neumann box");
  PointSourceSolution sol;
  sol.source = cfg.source_position;
  sol.c_p = std::sqrt(cfg.c / cfg.rho);
  sol.f_peak = cfg.f_peak;
  sol.amplitude = cfg.amplitude / cfg.c;
  sol.images = build_mirrors(cfg.box, cfg.source_position, sol.c_p, cfg.t_end,
                             ricker_support(cfg.f_peak), sim.receiver_nodes);
  TraceSet recorded = sim.recorded();
  TraceSet ref;
  ref.times = recorded.times;
  ref.values.resize(sim.receiver_nodes.size());
  for (std::size_t r = 0; r < sim.receiver_nodes.size(); ++r) {
    ref.values[r].resize(ref.times.size());
    for (std::size_t s = 0; s < ref.times.size(); ++s)
      ref.values[r][s] = exact_solution(sol, sim.receiver_nodes[r], ref.times[s]);
  }
  return ref;
}

// ---------------------------------------------------------------------------
// Convergence study: refine the box resolution, fit RMS error vs N^(1/3)
// ---------------------------------------------------------------------------

struct ConvergenceLevel {
  int level = 0;
  std::size_t nodes = 0;
  double rms_abs = 0;
  double rms_rel = 0;
  double dt = 0;
  double wall_seconds = 0;
};

struct ConvergenceStudy {
  std::vector<ConvergenceLevel> levels;
  bool fitted = false;
  PowerLawFit fit;  // rms_abs ~ C * (N^(1/3))^-order
};

// The config resolution acts as the level-1 aspect; level n uses n times
// that resolution per axis.
inline ConvergenceStudy run_convergence(const RunConfig& base, const std::vector<int>& levels) {
  ConvergenceStudy study;
  if (!base.use_box) throw std::runtime_error("convergence study requires a box mesh");
  std::vector<std::pair<double, double>> pts;
  for (int n : levels) {
    RunConfig cfg = base;
    for (int c = 0; c < 3; ++c) cfg.resolution[c] = base.resolution[c] * n;
    SimulationResult sim = run_simulation(cfg);
    TraceSet ref = analytic_reference_traces(cfg, sim);
    ErrorReport err = rms_error(sim.recorded(), ref);
    ConvergenceLevel lvl;
    lvl.level = n;
    lvl.nodes = sim.nodes;
    lvl.rms_abs = err.rms_abs;
    lvl.rms_rel = err.rms_rel;
    lvl.dt = sim.dt;
    lvl.wall_seconds = sim.wall_seconds;
    study.levels.push_back(lvl);
    pts.push_back({std::cbrt(static_cast<double>(sim.nodes)), err.rms_abs});
  }
  if (pts.size() >= 2) {
    study.fit = power_law_fit(pts);
    study.fitted = true;
  }
  return study;
}

// ---------------------------------------------------------------------------
// Dispersion sweep: e_disp over a list of resolutions N_E, with the fitted
// power law and cost metrics at a target error
// ---------------------------------------------------------------------------

struct DispersionSweep {
  std::string element;
  int K = 0;
  double s_max = 0;
  std::vector<DispersionResult> points;
  bool fitted = false;
  PowerLawFit fit;  // e_disp ~ C * N_E^-q
};

inline DispersionSweep run_dispersion_sweep(const NodalBasis& basis, int K,
                                            const std::vector<double>& elements_per_wavelength,
                                            int threads = 0, int n_directions = 1024) {
  if (elements_per_wavelength.empty())
    throw std::invalid_argument("dispersion sweep: empty wavelength list");
  DispersionSweep sweep;
  sweep.element = basis.table->id;
  sweep.K = K;
  SymbolFactory factory = build_symbol_factory(basis);
  sweep.s_max = symbol_max_eigenvalue(factory, 16, threads, /*fast_scan=*/true);
  double le = std::cbrt(factory.average_element_volume());
  std::vector<std::pair<double, double>> pts;
  for (double ne : elements_per_wavelength) {
    DispersionResult r = dispersion_error(factory, ne * le, K, sweep.s_max, n_directions, threads);
    sweep.points.push_back(r);
    pts.push_back({r.elements_per_wavelength, r.e_disp});
  }
  if (pts.size() >= 2) {
    sweep.fit = power_law_fit(pts);
    sweep.fitted = true;
  }
  return sweep;
}

// Cost metrics at the resolution where the fitted error law reaches the
// target dispersion error.
inline CostMetrics cost_at_target(const DispersionSweep& sweep, const SymbolFactory& factory,
                                  double target_err) {
  if (!sweep.fitted) throw std::runtime_error("cost_at_target: sweep has no fit");
  double ne = std::pow(sweep.fit.constant / target_err, 1.0 / sweep.fit.exponent);
  double lambda = ne * std::cbrt(factory.average_element_volume());
  return cost_metrics(factory, lambda, sweep.K, sweep.s_max);
}

// ---------------------------------------------------------------------------
// Asymptotic estimates from finite sweeps
// ---------------------------------------------------------------------------
//
// At moderate resolutions the dispersion error carries an O(N_E^-2) relative
// correction, so plain log-log fits understate the decay. Both estimators
// extrapolate that correction away from the two finest resolutions.

// Asymptotic decay exponent: Richardson extrapolation of the pairwise
// log-log slopes in the inverse square of the geometric-mean resolution.
inline double extrapolated_exponent(const std::vector<DispersionResult>& points) {
  if (points.size() < 3)
    throw std::invalid_argument("extrapolated_exponent: need at least 3 points");
  auto pts = points;
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.elements_per_wavelength < b.elements_per_wavelength;
  });
  std::vector<double> slope, x;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    double n0 = pts[k].elements_per_wavelength, n1 = pts[k + 1].elements_per_wavelength;
    slope.push_back(std::log(pts[k].e_disp / pts[k + 1].e_disp) / std::log(n1 / n0));
    x.push_back(1.0 / (n0 * n1));  // 1 / (geometric mean)^2
  }
  std::size_t m = slope.size();
  double q1 = slope[m - 1], q0 = slope[m - 2];
  return q1 + (q1 - q0) * x[m - 1] / (x[m - 2] - x[m - 1]);
}

// Asymptotic constant of e ~ C N_E^-q for a pinned exponent q, extrapolating
// e N_E^q from the two finest resolutions.
inline double extrapolated_constant(const std::vector<DispersionResult>& points, double q) {
  if (points.size() < 2)
    throw std::invalid_argument("extrapolated_constant: need at least 2 points");
  auto pts = points;
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.elements_per_wavelength < b.elements_per_wavelength;
  });
  std::size_t m = pts.size();
  double n0 = pts[m - 2].elements_per_wavelength, n1 = pts[m - 1].elements_per_wavelength;
  double c0 = pts[m - 2].e_disp * std::pow(n0, q);
  double c1 = pts[m - 1].e_disp * std::pow(n1, q);
  double x0 = 1.0 / (n0 * n0), x1 = 1.0 / (n1 * n1);
  return c1 + (c1 - c0) * x1 / (x0 - x1);
}

}  // namespace lumpedtet
