#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "lumpedtet/linalg.hpp"

using namespace lumpedtet;

TEST_CASE("Mat3 determinant and inverse") {
  Mat3 a;
  a.m = {{{2, 1, 0}, {0, 3, 1}, {1, 0, 4}}};
  double d = a.det();
  CHECK(d == doctest::Approx(2 * 12 - 1 * (-1) + 0).epsilon(1e-14));
  Mat3 inv = a.inverse();
  Mat3 p = a * inv;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(p.m[i][j] == doctest::Approx(i == j ? 1.0 : 0.0).epsilon(1e-13));
}

TEST_CASE("LU solves a random system") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1, 1);
  std::size_t n = 17;
  DenseMatrix a(n, n);
  std::vector<double> xref(n);
  for (std::size_t i = 0; i < n; ++i) {
    xref[i] = u(rng);
    for (std::size_t j = 0; j < n; ++j) a(i, j) = u(rng) + (i == j ? 4.0 : 0.0);
  }
  std::vector<double> b = a * xref;
  auto f = lu_factor(a);
  auto x = lu_solve(f, b);
  for (std::size_t i = 0; i < n; ++i) CHECK(x[i] == doctest::Approx(xref[i]).epsilon(1e-11));

  DenseMatrix inv = invert(a);
  DenseMatrix id = a * inv;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      CHECK(std::abs(id(i, j) - (i == j ? 1.0 : 0.0)) < 1e-11);
}

TEST_CASE("column-pivoted QR detects rank") {
  // 6x5 matrix with two dependent columns
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1, 1);
  DenseMatrix a(6, 5);
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 3; ++j) a(i, j) = u(rng);
  for (std::size_t i = 0; i < 6; ++i) {
    a(i, 3) = 2 * a(i, 0) - a(i, 1);
    a(i, 4) = a(i, 1) + 0.5 * a(i, 2);
  }
  CpqrResult r = cpqr_rank(a, 1e-10);
  CHECK(r.rank == 3);

  DenseMatrix id = DenseMatrix::identity(8);
  CHECK(cpqr_rank(id, 1e-10).rank == 8);
}

TEST_CASE("singular values and condition number") {
  // diag(5, 2, 0.5) rotated by an orthogonal matrix keeps its singular values
  DenseMatrix d(3, 3);
  d(0, 0) = 5;
  d(1, 1) = 2;
  d(2, 2) = 0.5;
  double c = std::cos(0.7), s = std::sin(0.7);
  DenseMatrix q(3, 3);
  q(0, 0) = c;
  q(0, 1) = -s;
  q(1, 0) = s;
  q(1, 1) = c;
  q(2, 2) = 1;
  DenseMatrix a = q * d;
  auto sv = singular_values(a);
  REQUIRE(sv.size() == 3);
  CHECK(sv[0] == doctest::Approx(5).epsilon(1e-12));
  CHECK(sv[1] == doctest::Approx(2).epsilon(1e-12));
  CHECK(sv[2] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(condition_number(a) == doctest::Approx(10).epsilon(1e-10));
}

TEST_CASE("Jacobi eigensolver: known spectrum and residual") {
  DenseMatrix a(3, 3);
  a(0, 0) = 2;
  a(1, 1) = 3;
  a(2, 2) = 4;
  a(0, 1) = a(1, 0) = 1;
  SymmetricEvd evd = jacobi_eigensolve(a);
  // eigenvalues of [[2,1,0],[1,3,0],[0,0,4]]: (5±sqrt(5))/2 and 4
  double lo = (5 - std::sqrt(5.0)) / 2, hi = (5 + std::sqrt(5.0)) / 2;
  CHECK(evd.values[0] == doctest::Approx(lo).epsilon(1e-13));
  CHECK(evd.values[1] == doctest::Approx(hi).epsilon(1e-13));
  CHECK(evd.values[2] == doctest::Approx(4).epsilon(1e-13));
  // A v = lambda v
  for (int k = 0; k < 3; ++k) {
    std::vector<double> v(3);
    for (int i = 0; i < 3; ++i) v[i] = evd.vectors(i, k);
    auto av = a * v;
    for (int i = 0; i < 3; ++i) CHECK(av[i] == doctest::Approx(evd.values[k] * v[i]).epsilon(1e-12));
  }
}

TEST_CASE("tridiagonal QL reproduces the discrete Laplacian spectrum") {
  std::size_t n = 40;
  std::vector<double> d(n, 2.0), e(n, -1.0);
  tridiagonal_ql(d, e);
  std::sort(d.begin(), d.end());
  for (std::size_t k = 0; k < n; ++k) {
    double expected = 2.0 - 2.0 * std::cos((k + 1) * std::numbers::pi / (n + 1));
    CHECK(d[k] == doctest::Approx(expected).epsilon(1e-11));
  }
}

TEST_CASE("Hermitian eigenvalues match a constructed spectrum") {
  using cd = std::complex<double>;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1, 1);
  std::size_t n = 24;
  std::vector<double> lambda(n);
  for (std::size_t i = 0; i < n; ++i) lambda[i] = u(rng) * 10;
  std::sort(lambda.begin(), lambda.end());

  std::vector<cd> h(n * n, cd(0, 0));
  for (std::size_t i = 0; i < n; ++i) h[i * n + i] = lambda[i];
  auto at = [&](std::size_t i, std::size_t j) -> cd& { return h[i * n + j]; };
  // apply random unitary 2x2 similarities; the spectrum is untouched
  for (int rep = 0; rep < 300; ++rep) {
    std::size_t p = rng() % n, q = rng() % n;
    if (p == q) continue;
    double t = u(rng) * 3, phi = u(rng) * 3;
    double c = std::cos(t);
    cd s = std::sin(t) * std::exp(cd(0, phi));
    for (std::size_t i = 0; i < n; ++i) {  // H <- H G (columns)
      cd hip = at(i, p), hiq = at(i, q);
      at(i, p) = c * hip + s * hiq;
      at(i, q) = -std::conj(s) * hip + c * hiq;
    }
    for (std::size_t j = 0; j < n; ++j) {  // H <- G* H (rows)
      cd hpj = at(p, j), hqj = at(q, j);
      at(p, j) = c * hpj + std::conj(s) * hqj;
      at(q, j) = -s * hpj + c * hqj;
    }
  }
  auto vals = hermitian_eigenvalues(n, h);
  REQUIRE(vals.size() == n);
  for (std::size_t i = 0; i < n; ++i) CHECK(vals[i] == doctest::Approx(lambda[i]).epsilon(5e-13));
}

TEST_CASE("symmetric_eigenvalues agrees with the Jacobi solver") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(-1, 1);
  std::size_t n = 15;
  DenseMatrix a(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) a(i, j) = a(j, i) = u(rng);
  auto v1 = symmetric_eigenvalues(a);
  auto v2 = jacobi_eigensolve(a).values;
  for (std::size_t i = 0; i < n; ++i) CHECK(v1[i] == doctest::Approx(v2[i]).epsilon(1e-11));
}

TEST_CASE("sparse matrix assembles duplicates and multiplies") {
  std::vector<std::tuple<int, int, double>> trip = {
      {0, 0, 1.0}, {0, 1, 2.0}, {1, 1, 3.0}, {0, 0, 0.5}, {2, 0, -1.0}};
  SparseMatrix s = SparseMatrix::from_triplets(3, trip);
  CHECK(s.nnz() == 4);
  CHECK(s.entry(0, 0) == doctest::Approx(1.5));
  std::vector<double> x = {1, 2, 3};
  auto y = s * x;
  CHECK(y[0] == doctest::Approx(1.5 + 4.0));
  CHECK(y[1] == doctest::Approx(6.0));
  CHECK(y[2] == doctest::Approx(-1.0));
}

TEST_CASE("power_law_fit recovers an exact power law") {
  std::vector<std::pair<double, double>> pts;
  for (double x : {1.0, 2.0, 4.0, 8.0}) pts.push_back({x, 2.0 * std::pow(x, -3.0)});
  PowerLawFit f = power_law_fit(pts);
  CHECK(f.constant == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.exponent == doctest::Approx(3.0).epsilon(1e-12));
  CHECK_THROWS(power_law_fit({{1.0, 1.0}}));
  CHECK_THROWS(power_law_fit({{1.0, -1.0}, {2.0, 1.0}}));
}
