#include "doctest.h"

#include <cmath>

#include "lumpedtet/simulate.hpp"

using namespace lumpedtet;

namespace {

RunConfig tiny_config() {
  RunConfig cfg;
  cfg.element = "ml1";
  cfg.time_order = 1;
  cfg.box = {{-1, -1, -1}, {1, 1, 1}};
  cfg.resolution = {2, 2, 2};
  cfg.rho = 1.0;
  cfg.c = 4.0;
  cfg.source_position = {0, 0, 0};
  cfg.f_peak = 2.0;
  cfg.amplitude = 4.0;
  cfg.receivers = {{1, 0, 0}, {0, 0, -1}};
  cfg.t_end = 0.4;
  return cfg;
}

}  // namespace

TEST_CASE("config parsing: schema and validation") {
  nlohmann::json j = {
      {"lumpedtet", 1},
      {"element", "ml2n15"},
      {"time_order", 2},
      {"box", {{"min", {0, 0, 0}}, {"max", {1, 1, 1}}, {"resolution", {2, 2, 2}}}},
      {"material", {{"rho", 1.5}, {"c", 2.0}}},
      {"source", {{"position", {0.5, 0.5, 0.5}}, {"f_peak", 3.0}, {"amplitude", 2.0}}},
      {"receivers", {{0.25, 0.25, 0.25}}},
      {"t_end", 0.25}};
  RunConfig cfg = parse_config(j);
  CHECK(cfg.element == "ml2n15");
  CHECK(cfg.rho == 1.5);
  CHECK(cfg.receivers.size() == 1);
  CHECK(cfg.start() == doctest::Approx(-2.1 / 3.0));

  nlohmann::json bad = j;
  bad.erase("lumpedtet");
  CHECK_THROWS(parse_config(bad));
  bad = j;
  bad["time_order"] = 5;
  CHECK_THROWS(parse_config(bad));
  bad = j;
  bad["material"]["rho"] = -1.0;
  CHECK_THROWS(parse_config(bad));
  bad = j;
  bad["boundary"] = "absorbing";
  CHECK_THROWS(parse_config(bad));
}

TEST_CASE("zero-amplitude source produces all-zero traces") {
  RunConfig cfg = tiny_config();
  cfg.amplitude = 0.0;
  SimulationResult sim = run_simulation(cfg);
  for (const auto& rec : sim.traces.values)
    for (double v : rec) CHECK(v == 0.0);
}

TEST_CASE("simulation is deterministic across repeated runs and thread counts") {
  RunConfig cfg = tiny_config();
  cfg.threads = 1;
  SimulationResult a = run_simulation(cfg);
  cfg.threads = 2;
  SimulationResult b = run_simulation(cfg);
  REQUIRE(a.traces.times.size() == b.traces.times.size());
  for (std::size_t r = 0; r < a.traces.receiver_count(); ++r)
    for (std::size_t s = 0; s < a.traces.times.size(); ++s)
      CHECK(a.traces.values[r][s] == b.traces.values[r][s]);
}

TEST_CASE("dt override beyond the stability estimate is flagged") {
  RunConfig cfg = tiny_config();
  SimulationResult ok = run_simulation(cfg);
  CHECK(!ok.dt_override_unstable);
  cfg.dt_override = 10.0 * ok.dt;
  cfg.t_end = cfg.start() + 20.1 * cfg.dt_override;  // keep the run short
  SimulationResult bad = run_simulation(cfg);
  CHECK(bad.dt_override_unstable);
}

TEST_CASE("trace stride decimates the recording") {
  RunConfig cfg = tiny_config();
  SimulationResult full = run_simulation(cfg);
  cfg.trace_stride = 4;
  SimulationResult strided = run_simulation(cfg);
  CHECK(strided.traces.times.size() < full.traces.times.size());
  CHECK(strided.traces.times.back() == doctest::Approx(full.traces.times.back()));
}

TEST_CASE("recorded window keeps only non-negative times") {
  RunConfig cfg = tiny_config();
  SimulationResult sim = run_simulation(cfg);
  CHECK(sim.traces.times.front() < 0.0);
  TraceSet rec = sim.recorded();
  CHECK(!rec.times.empty());
  for (double t : rec.times) CHECK(t >= -1e-12);
}

TEST_CASE("analytic reference converges to the simulated traces") {
  // refinement must clearly shrink the misfit (the order itself is checked
  // by the acceptance suite at asymptotic resolutions)
  RunConfig cfg = tiny_config();
  cfg.resolution = {6, 6, 6};
  SimulationResult coarse = run_simulation(cfg);
  ErrorReport e1 = rms_error(coarse.recorded(), analytic_reference_traces(cfg, coarse));
  cfg.resolution = {12, 12, 12};
  SimulationResult fine = run_simulation(cfg);
  ErrorReport e2 = rms_error(fine.recorded(), analytic_reference_traces(cfg, fine));
  CHECK(e2.rms_abs < e1.rms_abs / 2.2);
}

TEST_CASE("element loading accepts built-ins and files, rejects garbage") {
  CHECK_NOTHROW(load_element("ml4n61"));
  CHECK_THROWS(load_element("nonexistent"));
}
