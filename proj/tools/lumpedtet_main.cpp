// Batch front-end: element verification, mesh generation, wave simulation,
// dispersion analysis and convergence studies for the mass-lumped
// tetrahedral elements.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "lumpedtet/simulate.hpp"
#include "lumpedtet/verify.hpp"

using namespace lumpedtet;
namespace fs = std::filesystem;

namespace {

int run_verify(const std::vector<std::string>& elements, bool all, bool old_condition) {
  std::vector<std::string> ids = elements;
  if (all)
    for (const auto& id : builtin_element_ids()) ids.push_back(id);
  if (ids.empty()) {
    std::cerr << "verify: no elements given (use --all or element ids / table files)\n";
    return 2;
  }
  bool ok = true;
  for (const auto& id : ids) {
    try {
      ElementTable table = load_element(id);
      VerifyReport rep = verify_element(table, old_condition);
      std::cout << (rep.passed ? "[PASS] " : "[FAIL] ") << rep.element << "\n";
      for (const auto& line : rep.lines) std::cout << line << "\n";
      ok = ok && rep.passed;
    } catch (const std::exception& ex) {
      std::cout << "[FAIL] " << id << "\n  " << ex.what() << "\n";
      ok = false;
    }
  }
  return ok ? 0 : 1;
}

int run_meshgen(const std::vector<double>& box, const std::vector<int>& res, double rho, double c,
                double perturb, std::uint64_t seed, bool dirichlet, const std::string& out) {
  Box b{{box[0], box[2], box[4]}, {box[1], box[3], box[5]}};
  TetMesh mesh = build_box_mesh(b, {res[0], res[1], res[2]}, rho, c);
  if (perturb > 0) perturb_interior_vertices(mesh, perturb, seed);
  if (dirichlet) tag_all_boundary_dirichlet(mesh);
  std::ofstream f(out);
  if (!f) throw std::runtime_error("meshgen: cannot write " + out);
  write_mesh(f, mesh);
  std::cout << "wrote " << out << ": " << mesh.vertex_count() << " vertices, " << mesh.tet_count()
            << " tets\n";
  return 0;
}

int run_simulate(const std::string& config_path, int threads, int trace_stride, bool dump) {
  RunConfig cfg = load_config(config_path);
  if (threads > 0) cfg.threads = threads;
  if (trace_stride > 0) cfg.trace_stride = trace_stride;
  fs::create_directories(cfg.output_dir);

  SimulationResult sim = run_simulation(cfg);
  if (sim.dt_override_unstable)
    std::cerr << "warning: dt override exceeds the stable step estimate; expect blow-up\n";

  {
    std::ofstream f(cfg.output_dir + "/traces.csv");
    write_traces(f, sim.traces);
  }
  nlohmann::json meta = {
      {"element", cfg.element},        {"time_order", cfg.time_order},
      {"nodes", sim.nodes},            {"dt", sim.dt},
      {"s_max_estimate", sim.s_max},   {"steps", sim.steps},
      {"wall_seconds", sim.wall_seconds}};
  if (cfg.analytic_reference) {
    TraceSet ref = analytic_reference_traces(cfg, sim);
    std::ofstream f(cfg.output_dir + "/reference.csv");
    write_traces(f, ref);
    ErrorReport err = rms_error(sim.recorded(), ref);
    meta["rms_abs"] = err.rms_abs;
    meta["rms_rel"] = err.rms_rel;
    std::printf("rms_abs %.6g  rms_rel %.6g\n", err.rms_abs, err.rms_rel);
  }
  if (dump) {
    TetMesh mesh = build_config_mesh(cfg);
    ElementTable table = load_element(cfg.element);
    NodalBasis basis = build_nodal_basis(table);
    GlobalNumbering num = number_nodes(mesh, basis);
    AssembledSystem sys = assemble_system(mesh, basis, num);
    std::ofstream fm(cfg.output_dir + "/mass.txt");
    dump_mass(fm, sys.mass_diag);
    std::ofstream fa(cfg.output_dir + "/stiffness.txt");
    dump_stiffness(fa, sys.stiffness);
  }
  std::ofstream f(cfg.output_dir + "/metadata.json");
  f << meta.dump(2) << "\n";
  std::printf("%zu nodes, %d steps, dt %.6g, wall %.2f s -> %s\n", sim.nodes, sim.steps, sim.dt,
              sim.wall_seconds, cfg.output_dir.c_str());
  return 0;
}

int run_dispersion(const std::string& element, int K, std::vector<double> ne_list,
                   double target_err, int dirs, int threads, const std::string& out_dir) {
  if (ne_list.empty()) {
    std::cerr << "dispersion: empty resolution list (--NE)\n";
    return 2;
  }
  ElementTable table = load_element(element);
  NodalBasis basis = build_nodal_basis(table);
  DispersionSweep sweep = run_dispersion_sweep(basis, K, ne_list, threads, dirs);

  fs::create_directories(out_dir);
  {
    std::ofstream f(out_dir + "/dispersion.csv");
    f << "element,K,lambda,NE,e_disp\n";
    char buf[160];
    for (const auto& p : sweep.points) {
      std::snprintf(buf, sizeof buf, "%s,%d,%.17g,%.17g,%.17g\n", table.id.c_str(), K, p.lambda,
                    p.elements_per_wavelength, p.e_disp);
      f << buf;
    }
  }
  SymbolFactory factory = build_symbol_factory(basis);
  {
    std::ofstream f(out_dir + "/cost.csv");
    f << "element,target_err,NE,n_vec,n_mat,N_dt,n_comp\n";
    if (sweep.fitted) {
      double ne = std::pow(sweep.fit.constant / target_err, 1.0 / sweep.fit.exponent);
      CostMetrics m = cost_at_target(sweep, factory, target_err);
      char buf[200];
      std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", table.id.c_str(),
                    target_err, ne, m.n_vec, m.n_mat, m.n_dt, m.n_comp);
      f << buf;
    }
  }
  if (sweep.fitted) {
    std::printf("%s K=%d: e_disp ~ %.4g * NE^-%.3f  (s_max %.6g)\n", table.id.c_str(), K,
                sweep.fit.constant, sweep.fit.exponent, sweep.s_max);
    if (sweep.points.size() >= 3) {
      double q = extrapolated_exponent(sweep.points);
      double c = extrapolated_constant(sweep.points, 2.0 * table.degree);
      std::printf("asymptotic estimate: exponent %.3f, constant %.4g at NE^-%d\n", q, c,
                  2 * table.degree);
    }
  }
  return 0;
}

int run_convergence(const std::string& config_path, const std::vector<int>& levels,
                    const std::string& out_dir, int threads) {
  if (levels.empty()) {
    std::cerr << "convergence: empty level list\n";
    return 2;
  }
  RunConfig cfg = load_config(config_path);
  if (threads > 0) cfg.threads = threads;
  ConvergenceStudy study = run_convergence(cfg, levels);
  fs::create_directories(out_dir);
  {
    std::ofstream f(out_dir + "/errors.csv");
    f << "level,nodes,rms_abs,rms_rel,dt,wall_seconds\n";
    char buf[200];
    for (const auto& l : study.levels) {
      std::snprintf(buf, sizeof buf, "%d,%zu,%.17g,%.17g,%.17g,%.6g\n", l.level, l.nodes,
                    l.rms_abs, l.rms_rel, l.dt, l.wall_seconds);
      f << buf;
    }
  }
  for (const auto& l : study.levels)
    std::printf("level %d: %zu nodes, rms_abs %.6g, rms_rel %.6g\n", l.level, l.nodes, l.rms_abs,
                l.rms_rel);
  if (study.fitted)
    std::printf("fit: rms ~ %.4g * N^(-1/3 * %.3f)\n", study.fit.constant, study.fit.exponent);
  else
    std::printf("fit skipped (single level)\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"mass-lumped tetrahedral finite elements for the 3-D scalar wave equation"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "worker thread count (default: hardware)");

  auto* verify = app.add_subcommand("verify", "run the reference-element invariant suite");
  std::vector<std::string> verify_elements;
  bool verify_all = false, verify_old = false;
  verify->add_option("elements", verify_elements, "element ids or table files");
  verify->add_flag("--all", verify_all, "verify all built-in elements");
  verify->add_flag("--old-condition", verify_old, "also report the classical condition");

  auto* meshgen = app.add_subcommand("meshgen", "write a structured box mesh");
  std::vector<double> mg_box{0, 1, 0, 1, 0, 1};
  std::vector<int> mg_res{1, 1, 1};
  double mg_rho = 1.0, mg_c = 1.0, mg_perturb = 0.0;
  std::uint64_t mg_seed = 1;
  bool mg_dirichlet = false;
  std::string mg_out = "box.mesh";
  meshgen->add_option("--box", mg_box, "x0 x1 y0 y1 z0 z1")->expected(6);
  meshgen->add_option("--res", mg_res, "cells per axis")->expected(3);
  meshgen->add_option("--rho", mg_rho, "mass density");
  meshgen->add_option("--c", mg_c, "stiffness coefficient");
  meshgen->add_option("--perturb", mg_perturb, "interior vertex perturbation fraction");
  meshgen->add_option("--seed", mg_seed, "perturbation seed");
  meshgen->add_flag("--dirichlet", mg_dirichlet, "tag all boundary faces Dirichlet");
  meshgen->add_option("-o,--output", mg_out, "output mesh file");

  auto* simulate = app.add_subcommand("simulate", "run a wave simulation from a JSON config");
  std::string sim_config;
  int sim_stride = 0;
  bool sim_dump = false;
  simulate->add_option("--config", sim_config, "JSON run configuration")->required();
  simulate->add_option("--trace-stride", sim_stride, "record every n-th step");
  simulate->add_flag("--dump-system", sim_dump, "write mass.txt and stiffness.txt");

  auto* dispersion = app.add_subcommand("dispersion", "dispersion error sweep and cost metrics");
  std::string disp_element;
  int disp_k = 1, disp_dirs = 1024;
  std::vector<double> disp_ne;
  double disp_target = 0.001;
  std::string disp_out = "dispersion_out";
  dispersion->add_option("element", disp_element, "element id or table file")->required();
  dispersion->add_option("--K", disp_k, "time-stepping half order (order 2K)")->required();
  dispersion->add_option("--NE", disp_ne, "elements-per-wavelength values")->delimiter(',');
  dispersion->add_option("--target-err", disp_target, "cost table target dispersion error");
  dispersion->add_option("--dirs", disp_dirs, "direction samples on the sphere");
  dispersion->add_option("-o,--output", disp_out, "output directory");

  auto* convergence =
      app.add_subcommand("convergence", "mesh refinement study vs the analytic solution");
  std::string conv_config;
  std::vector<int> conv_levels;
  std::string conv_out = "convergence_out";
  convergence->add_option("--config", conv_config, "JSON run configuration")->required();
  convergence->add_option("--levels", conv_levels, "resolution multipliers")->delimiter(',');
  convergence->add_option("-o,--output", conv_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) return run_verify(verify_elements, verify_all, verify_old);
    if (*meshgen)
      return run_meshgen(mg_box, mg_res, mg_rho, mg_c, mg_perturb, mg_seed, mg_dirichlet, mg_out);
    if (*simulate) return run_simulate(sim_config, threads, sim_stride, sim_dump);
    if (*dispersion)
      return run_dispersion(disp_element, disp_k, disp_ne, disp_target, disp_dirs, threads,
                            disp_out);
    if (*convergence) return run_convergence(conv_config, conv_levels, conv_out, threads);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << "\n";
    return 2;
  }
  return 2;
}
