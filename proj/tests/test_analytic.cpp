#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "lumpedtet/analytic.hpp"

using namespace lumpedtet;

TEST_CASE("free-space solution: causality and peak value") {
  PointSourceSolution sol;
  sol.source = {0, 0, 0};
  sol.c_p = 2.0;
  sol.f_peak = 3.5;
  Vec3 x{0, 0, 2.0};  // r = 2, travel time 1 s
  // before the wavelet can arrive
  CHECK(std::abs(exact_solution(sol, x, 0.3)) < 1e-15);
  // peak passes at t = r / c_P
  CHECK(exact_solution(sol, x, 1.0) ==
        doctest::Approx(1.0 / (4.0 * std::numbers::pi * 2.0)).epsilon(1e-14));
  CHECK_THROWS(exact_solution(sol, sol.source, 0.0));
}

TEST_CASE("a Neumann wall doubles the field on the wall") {
  PointSourceSolution sol;
  sol.source = {0.2, -0.3, 1.0};
  sol.c_p = 2.0;
  sol.f_peak = 3.0;
  sol.images = {{0.2, -0.3, -1.0}};  // mirror across z = 0
  Vec3 on_wall{1.0, 0.5, 0.0};
  double r = norm(on_wall - sol.source);
  for (double t : {0.4, 0.7, 1.0}) {
    double free_term = ricker_derivative(t - r / sol.c_p, sol.f_peak, 0) /
                       (4.0 * std::numbers::pi * r);
    CHECK(exact_solution(sol, on_wall, t) == doctest::Approx(2.0 * free_term).epsilon(1e-13));
  }
}

TEST_CASE("mirror construction: causality prunes everything for T_end -> 0") {
  Box box{{-2, -1, 0}, {2, 1, 2}};
  Vec3 source{0, 0, 1};
  std::vector<Vec3> receivers;
  for (int i = 0; i < 56; ++i) receivers.push_back({-1.375 + 0.05 * i, 0.0, 0.8});
  auto images = build_mirrors(box, source, 2.0, 0.0, 0.6, receivers);
  CHECK(images.empty());
  CHECK_THROWS(build_mirrors(box, {5, 0, 1}, 2.0, 0.1, 0.6, receivers));
}

TEST_CASE("mirror construction on the recording geometry") {
  Box box{{-2, -1, 0}, {2, 1, 2}};
  Vec3 source{0, 0, 1};
  std::vector<Vec3> receivers;
  for (int i = 0; i < 56; ++i) receivers.push_back({-1.375 + 0.05 * i, 0.0, 0.8});
  double c_p = 2.0, t_end = 0.6, support = 0.6;
  auto images = build_mirrors(box, source, c_p, t_end, support, receivers);
  CHECK(!images.empty());
  double radius = c_p * (t_end + support);
  for (const auto& img : images) {
    double best = 1e300;
    for (const auto& r : receivers) best = std::min(best, norm(img - r));
    CHECK(best <= radius);
    CHECK(norm(img - source) > 1e-9);
  }

  // doubling the distance criterion only adds causally invisible images
  auto more = build_mirrors(box, source, c_p, 2 * t_end + support / c_p, support, receivers);
  CHECK(more.size() >= images.size());
  PointSourceSolution a{source, c_p, 3.5, 1.0, images};
  PointSourceSolution b{source, c_p, 3.5, 1.0, more};
  double max_diff = 0, max_val = 0;
  for (const auto& r : receivers)
    for (double t = 0.0; t <= t_end; t += 0.05) {
      double ua = exact_solution(a, r, t), ub = exact_solution(b, r, t);
      max_diff = std::max(max_diff, std::abs(ua - ub));
      max_val = std::max(max_val, std::abs(ua));
    }
  CHECK(max_diff <= 1e-12 * max_val);
}

TEST_CASE("centered source in a cube has a reflection-symmetric image set") {
  Box box{{-1, -1, -1}, {1, 1, 1}};
  Vec3 source{0, 0, 0};
  std::vector<Vec3> receivers = {{0.5, 0.25, 0.0}};
  auto images = build_mirrors(box, source, 1.0, 2.0, 1.0, receivers);
  CHECK(!images.empty());
  // mirroring a receiver-independent criterion would be exactly symmetric;
  // the nearest-receiver test keeps at least the sign symmetry in z
  for (const auto& img : images) {
    Vec3 flipped{img.x, img.y, -img.z};
    double bestf = 1e300, besti = 1e300;
    for (const auto& r : receivers) {
      bestf = std::min(bestf, norm(flipped - r));
      besti = std::min(besti, norm(img - r));
    }
    if (std::abs(bestf - besti) < 1e-12) {
      bool found = false;
      for (const auto& other : images)
        if (norm(other - flipped) < 1e-9) found = true;
      CHECK(found);
    }
  }
}

TEST_CASE("translation invariance of the analytic traces") {
  Vec3 shift{3.0, -2.0, 5.0};
  PointSourceSolution a;
  a.source = {0.1, 0.2, 0.3};
  a.c_p = 2.0;
  a.f_peak = 3.0;
  a.images = {{1.0, 0.2, 0.3}, {0.1, -2.0, 0.3}};
  PointSourceSolution b = a;
  b.source += shift;
  for (auto& img : b.images) img += shift;
  Vec3 x{1.5, 1.5, 1.5};
  for (double t : {0.2, 0.5, 0.9}) {
    double ua = exact_solution(a, x, t);
    double ub = exact_solution(b, x + shift, t);
    CHECK(std::abs(ua - ub) <= 1e-13 * std::max(1.0, std::abs(ua)));
  }
}

TEST_CASE("RMS error definitions") {
  TraceSet a, b;
  a.times = {0, 0.1, 0.2, 0.3};
  a.values = {{1, 2, 3, 4}, {0, -1, 1, 0}};
  b = a;
  ErrorReport same = rms_error(a, b);
  CHECK(same.rms_abs == 0.0);
  CHECK(same.rms_rel == 0.0);

  for (auto& row : b.values)
    for (auto& v : row) v += 0.25;
  ErrorReport shifted = rms_error(b, a);
  CHECK(shifted.rms_abs == doctest::Approx(0.25).epsilon(1e-13));

  TraceSet c;
  c.times = {0, 0.3};
  c.values = {{1, 4}};
  CHECK_THROWS(rms_error(a, c));  // receiver count mismatch
}

TEST_CASE("cubic resampling reproduces smooth traces") {
  TraceSet ref;
  for (int i = 0; i <= 200; ++i) {
    ref.times.push_back(i * 0.005);
    }
  ref.values.resize(1);
  for (double t : ref.times) ref.values[0].push_back(std::sin(2 * std::numbers::pi * t));
  std::vector<double> new_times;
  for (int i = 0; i <= 137; ++i) new_times.push_back(i * 0.00715);
  auto out = resample_cubic(ref.times, ref.values[0], new_times);
  for (std::size_t s = 0; s < new_times.size(); ++s)
    CHECK(std::abs(out[s] - std::sin(2 * std::numbers::pi * new_times[s])) < 2e-6);
  CHECK_THROWS(resample_cubic(ref.times, ref.values[0], {1.5}));
}

TEST_CASE("trace file round trip") {
  TraceSet t;
  t.times = {0, 0.5};
  t.values = {{1.25, -0.75}, {3.5, 0.125}};
  std::stringstream ss;
  write_traces(ss, t);
  TraceSet r = read_traces(ss);
  REQUIRE(r.receiver_count() == 2);
  CHECK(r.times == t.times);
  CHECK(r.values == t.values);
}
