#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "lumpedtet/parallel.hpp"

namespace lumpedtet {

// ---------------------------------------------------------------------------
// Small fixed-size types
// ---------------------------------------------------------------------------

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3() = default;
  Vec3(double xx, double yy, double zz) : x(xx), y(yy), z(zz) {}

  double& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  double operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }
inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(const Vec3& v) { return std::sqrt(dot(v, v)); }

struct Mat3 {
  // m[r][c]
  std::array<std::array<double, 3>, 3> m{};

  static Mat3 identity() {
    Mat3 r;
    for (int i = 0; i < 3; ++i) r.m[i][i] = 1.0;
    return r;
  }
  static Mat3 from_columns(const Vec3& c0, const Vec3& c1, const Vec3& c2) {
    Mat3 r;
    for (int i = 0; i < 3; ++i) {
      r.m[i][0] = c0[i];
      r.m[i][1] = c1[i];
      r.m[i][2] = c2[i];
    }
    return r;
  }

  Vec3 operator*(const Vec3& v) const {
    return {m[0][0] * v.x + m[0][1] * v.y + m[0][2] * v.z,
            m[1][0] * v.x + m[1][1] * v.y + m[1][2] * v.z,
            m[2][0] * v.x + m[2][1] * v.y + m[2][2] * v.z};
  }
  Mat3 operator*(const Mat3& o) const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        double s = 0;
        for (int k = 0; k < 3; ++k) s += m[i][k] * o.m[k][j];
        r.m[i][j] = s;
      }
    return r;
  }

  double det() const {
    return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) -
           m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
           m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
  }
  Mat3 transposed() const {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r.m[i][j] = m[j][i];
    return r;
  }
  Mat3 inverse() const {
    double d = det();
    if (d == 0.0) throw std::runtime_error("Mat3::inverse: singular matrix");
    Mat3 r;
    r.m[0][0] = (m[1][1] * m[2][2] - m[1][2] * m[2][1]) / d;
    r.m[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / d;
    r.m[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / d;
    r.m[1][0] = (m[1][2] * m[2][0] - m[1][0] * m[2][2]) / d;
    r.m[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / d;
    r.m[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / d;
    r.m[2][0] = (m[1][0] * m[2][1] - m[1][1] * m[2][0]) / d;
    r.m[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / d;
    r.m[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / d;
    return r;
  }
};

// ---------------------------------------------------------------------------
// Dense matrices (row-major, double)
// ---------------------------------------------------------------------------

class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

  static DenseMatrix identity(std::size_t n) {
    DenseMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  const double* row(std::size_t i) const { return a_.data() + i * cols_; }
  double* row(std::size_t i) { return a_.data() + i * cols_; }

  DenseMatrix transposed() const {
    DenseMatrix t(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  DenseMatrix operator*(const DenseMatrix& o) const {
    if (cols_ != o.rows_) throw std::runtime_error("DenseMatrix: shape mismatch in product");
    DenseMatrix r(rows_, o.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        double v = (*this)(i, k);
        if (v == 0.0) continue;
        const double* orow = o.row(k);
        double* rrow = r.row(i);
        for (std::size_t j = 0; j < o.cols_; ++j) rrow[j] += v * orow[j];
      }
    return r;
  }

  std::vector<double> operator*(const std::vector<double>& x) const {
    if (cols_ != x.size()) throw std::runtime_error("DenseMatrix: shape mismatch in matvec");
    std::vector<double> y(rows_, 0.0);
    for (std::size_t i = 0; i < rows_; ++i) {
      const double* r = row(i);
      double s = 0;
      for (std::size_t j = 0; j < cols_; ++j) s += r[j] * x[j];
      y[i] = s;
    }
    return y;
  }

  double max_abs() const {
    double m = 0;
    for (double v : a_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

// ---------------------------------------------------------------------------
// LU factorization with partial pivoting
// ---------------------------------------------------------------------------

struct LuFactors {
  DenseMatrix lu;
  std::vector<std::size_t> perm;
};

inline LuFactors lu_factor(DenseMatrix a) {
  std::size_t n = a.rows();
  if (n != a.cols()) throw std::runtime_error("lu_factor: matrix must be square");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(a(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      double v = std::abs(a(i, k));
      if (v > best) {
        best = v;
        piv = i;
      }
    }
    if (best == 0.0) throw std::runtime_error("lu_factor: singular matrix");
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(piv, j));
      std::swap(perm[k], perm[piv]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      double m = a(i, k) / a(k, k);
      a(i, k) = m;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= m * a(k, j);
    }
  }
  return {std::move(a), std::move(perm)};
}

inline std::vector<double> lu_solve(const LuFactors& f, const std::vector<double>& b) {
  std::size_t n = f.lu.rows();
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[f.perm[i]];
  for (std::size_t i = 1; i < n; ++i) {
    double s = x[i];
    for (std::size_t j = 0; j < i; ++j) s -= f.lu(i, j) * x[j];
    x[i] = s;
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = x[ii];
    for (std::size_t j = ii + 1; j < n; ++j) s -= f.lu(ii, j) * x[j];
    x[ii] = s / f.lu(ii, ii);
  }
  return x;
}

inline DenseMatrix invert(const DenseMatrix& a) {
  std::size_t n = a.rows();
  LuFactors f = lu_factor(a);
  DenseMatrix inv(n, n);
  std::vector<double> e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e[j] = 1.0;
    std::vector<double> col = lu_solve(f, e);
    e[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return inv;
}

// ---------------------------------------------------------------------------
// Column-pivoted QR: rank detection and a well-conditioned column subset
// ---------------------------------------------------------------------------

struct CpqrResult {
  std::size_t rank = 0;
  std::vector<std::size_t> pivots;  // column order chosen by the factorization
  std::vector<double> rdiag;        // |R_kk| in pivot order
};

// Householder QR with column pivoting on a copy of `a` (m x n). Columns with
// |R_kk| <= rel_tol * |R_00| are treated as dependent.
inline CpqrResult cpqr_rank(DenseMatrix a, double rel_tol) {
  std::size_t m = a.rows(), n = a.cols();
  std::vector<std::size_t> piv(n);
  std::iota(piv.begin(), piv.end(), std::size_t{0});
  std::vector<double> cnorm(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < m; ++i) s += a(i, j) * a(i, j);
    cnorm[j] = s;
  }
  CpqrResult res;
  std::size_t kmax = std::min(m, n);
  for (std::size_t k = 0; k < kmax; ++k) {
    // recompute remaining norms for robustness (sizes are small)
    std::size_t best = k;
    double bestv = -1;
    for (std::size_t j = k; j < n; ++j) {
      double s = 0;
      for (std::size_t i = k; i < m; ++i) s += a(i, j) * a(i, j);
      cnorm[j] = s;
      if (s > bestv) {
        bestv = s;
        best = j;
      }
    }
    if (best != k) {
      for (std::size_t i = 0; i < m; ++i) std::swap(a(i, k), a(i, best));
      std::swap(piv[k], piv[best]);
      std::swap(cnorm[k], cnorm[best]);
    }
    double alpha = std::sqrt(cnorm[k]);
    if (k == 0 && alpha == 0.0) break;
    res.rdiag.push_back(alpha);
    if (alpha <= rel_tol * res.rdiag[0]) {
      res.rdiag.pop_back();
      break;
    }
    // Householder vector to zero column k below row k
    double akk = a(k, k);
    double beta = akk >= 0 ? -alpha : alpha;
    double vkk = akk - beta;
    a(k, k) = beta;
    if (vkk != 0.0) {
      for (std::size_t j = k + 1; j < n; ++j) {
        double s = vkk * a(k, j);
        for (std::size_t i = k + 1; i < m; ++i) s += a(i, k) * a(i, j);
        double tau = s / (beta * vkk);
        a(k, j) += tau * vkk;
        for (std::size_t i = k + 1; i < m; ++i) a(i, j) += tau * a(i, k);
      }
    }
    for (std::size_t i = k + 1; i < m; ++i) a(i, k) /= vkk == 0.0 ? 1.0 : vkk;
    res.rank = k + 1;
  }
  res.pivots = std::move(piv);
  return res;
}

// ---------------------------------------------------------------------------
// One-sided Jacobi: singular values (descending)
// ---------------------------------------------------------------------------

inline std::vector<double> singular_values(DenseMatrix a) {
  std::size_t m = a.rows(), n = a.cols();
  if (m < n) a = a.transposed(), std::swap(m, n);
  const double eps = 1e-15;
  for (int sweep = 0; sweep < 60; ++sweep) {
    bool converged = true;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double app = 0, aqq = 0, apq = 0;
        for (std::size_t i = 0; i < m; ++i) {
          app += a(i, p) * a(i, p);
          aqq += a(i, q) * a(i, q);
          apq += a(i, p) * a(i, q);
        }
        if (std::abs(apq) <= eps * std::sqrt(app * aqq) || apq == 0.0) continue;
        converged = false;
        double zeta = (aqq - app) / (2.0 * apq);
        double t = (zeta >= 0 ? 1.0 : -1.0) / (std::abs(zeta) + std::sqrt(1.0 + zeta * zeta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        for (std::size_t i = 0; i < m; ++i) {
          double vip = a(i, p), viq = a(i, q);
          a(i, p) = c * vip - s * viq;
          a(i, q) = s * vip + c * viq;
        }
      }
    }
    if (converged) break;
  }
  std::vector<double> sv(n);
  for (std::size_t j = 0; j < n; ++j) {
    double s = 0;
    for (std::size_t i = 0; i < m; ++i) s += a(i, j) * a(i, j);
    sv[j] = std::sqrt(s);
  }
  std::sort(sv.begin(), sv.end(), std::greater<>());
  return sv;
}

inline double condition_number(const DenseMatrix& a) {
  std::vector<double> sv = singular_values(a);
  if (sv.empty() || sv.back() == 0.0) return std::numeric_limits<double>::infinity();
  return sv.front() / sv.back();
}

// ---------------------------------------------------------------------------
// Cyclic Jacobi eigendecomposition (real symmetric, with eigenvectors)
// ---------------------------------------------------------------------------

struct SymmetricEvd {
  std::vector<double> values;  // ascending
  DenseMatrix vectors;         // column j is the eigenvector of values[j]
};

inline SymmetricEvd jacobi_eigensolve(DenseMatrix a) {
  std::size_t n = a.rows();
  DenseMatrix v = DenseMatrix::identity(n);
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= 1e-30 * std::max(1.0, a.max_abs() * a.max_abs())) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (apq == 0.0) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        double c = 1.0 / std::sqrt(1.0 + t * t);
        double s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (std::size_t j = 0; j < n; ++j) {
          double apj = a(p, j), aqj = a(q, j);
          a(p, j) = c * apj - s * aqj;
          a(q, j) = s * apj + c * aqj;
        }
        for (std::size_t i = 0; i < n; ++i) {
          double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) < a(j, j); });
  SymmetricEvd out;
  out.values.resize(n);
  out.vectors = DenseMatrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tridiagonal eigenvalues: implicit-shift QL (values only)
// ---------------------------------------------------------------------------

// d: diagonal (length n), e: subdiagonal (length n, e[0] unused). Overwrites
// d with the eigenvalues, unsorted.
inline void tridiagonal_ql(std::vector<double>& d, std::vector<double>& e) {
  std::size_t n = d.size();
  if (n == 0) return;
  for (std::size_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  for (std::size_t l = 0; l < n; ++l) {
    int iter = 0;
    std::size_t m;
    do {
      for (m = l; m + 1 < n; ++m) {
        double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-16 * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) throw std::runtime_error("tridiagonal_ql: no convergence");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (std::size_t i = m; i-- > l;) {
          double f = s * e[i];
          double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

// ---------------------------------------------------------------------------
// Hermitian eigenvalues: Householder reduction to real tridiagonal + QL
// ---------------------------------------------------------------------------

// a: row-major n x n complex Hermitian matrix (only values are computed).
inline std::vector<double> hermitian_eigenvalues(std::size_t n,
                                                 std::vector<std::complex<double>> a) {
  using cd = std::complex<double>;
  auto at = [&](std::size_t i, std::size_t j) -> cd& { return a[i * n + j]; };
  std::vector<double> d(n), e(n, 0.0);
  if (n == 0) return {};
  std::vector<cd> v(n), p(n);
  for (std::size_t k = 0; k + 2 < n; ++k) {
    std::size_t m = n - k - 1;  // length of the column below the diagonal
    double xnorm2 = 0;
    for (std::size_t i = k + 1; i < n; ++i) xnorm2 += std::norm(at(i, k));
    double xnorm = std::sqrt(xnorm2);
    cd x0 = at(k + 1, k);
    if (xnorm == 0.0) {
      e[k + 1] = 0.0;
      continue;
    }
    cd phase = std::abs(x0) == 0.0 ? cd(1.0, 0.0) : x0 / std::abs(x0);
    cd alpha = -phase * xnorm;
    // v = x - alpha*e0, chosen so |v_0| = |x_0| + ||x|| (no cancellation)
    double vnorm2 = 0;
    for (std::size_t i = 0; i < m; ++i) {
      v[i] = at(k + 1 + i, k);
      if (i == 0) v[i] -= alpha;
      vnorm2 += std::norm(v[i]);
    }
    if (vnorm2 == 0.0) {
      e[k + 1] = std::abs(alpha);
      continue;
    }
    double beta = 2.0 / vnorm2;
    // p = beta * H v on the trailing block
    for (std::size_t i = 0; i < m; ++i) {
      cd s(0.0, 0.0);
      for (std::size_t j = 0; j < m; ++j) s += at(k + 1 + i, k + 1 + j) * v[j];
      p[i] = beta * s;
    }
    cd vp(0.0, 0.0);
    for (std::size_t i = 0; i < m; ++i) vp += std::conj(v[i]) * p[i];
    cd kk = 0.5 * beta * vp;
    for (std::size_t i = 0; i < m; ++i) p[i] -= kk * v[i];  // q = p - K v
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        at(k + 1 + i, k + 1 + j) -= p[i] * std::conj(v[j]) + v[i] * std::conj(p[j]);
    at(k + 1, k) = alpha;
    e[k + 1] = std::abs(alpha);
  }
  if (n >= 2) e[n - 1] = std::abs(at(n - 1, n - 2));
  for (std::size_t i = 0; i < n; ++i) d[i] = at(i, i).real();
  tridiagonal_ql(d, e);
  std::sort(d.begin(), d.end());
  return d;
}

inline std::vector<double> symmetric_eigenvalues(const DenseMatrix& a) {
  std::size_t n = a.rows();
  std::vector<std::complex<double>> c(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) c[i * n + j] = a(i, j);
  return hermitian_eigenvalues(n, std::move(c));
}

// ---------------------------------------------------------------------------
// Sparse matrix, compressed row storage with sorted column indices
// ---------------------------------------------------------------------------

class SparseMatrix {
 public:
  SparseMatrix() = default;

  static SparseMatrix from_triplets(std::size_t n,
                                    std::vector<std::tuple<int, int, double>> trip) {
    std::sort(trip.begin(), trip.end(), [](const auto& a, const auto& b) {
      if (std::get<0>(a) != std::get<0>(b)) return std::get<0>(a) < std::get<0>(b);
      return std::get<1>(a) < std::get<1>(b);
    });
    SparseMatrix s;
    s.n_ = n;
    s.row_ptr_.assign(n + 1, 0);
    for (std::size_t t = 0; t < trip.size();) {
      int i = std::get<0>(trip[t]);
      int j = std::get<1>(trip[t]);
      double v = 0;
      while (t < trip.size() && std::get<0>(trip[t]) == i && std::get<1>(trip[t]) == j) {
        v += std::get<2>(trip[t]);
        ++t;
      }
      s.col_.push_back(j);
      s.val_.push_back(v);
      s.row_ptr_[i + 1]++;
    }
    for (std::size_t i = 0; i < n; ++i) s.row_ptr_[i + 1] += s.row_ptr_[i];
    return s;
  }

  std::size_t size() const { return n_; }
  std::size_t nnz() const { return val_.size(); }

  void multiply(const std::vector<double>& x, std::vector<double>& y, int threads = 1) const {
    y.assign(n_, 0.0);
    auto row_range = [&](std::size_t i) {
      double s = 0;
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) s += val_[k] * x[col_[k]];
      y[i] = s;
    };
    if (threads <= 1 || n_ < 4096) {
      for (std::size_t i = 0; i < n_; ++i) row_range(i);
    } else {
      parallel_for(n_, row_range, threads);
    }
  }

  std::vector<double> operator*(const std::vector<double>& x) const {
    std::vector<double> y;
    multiply(x, y);
    return y;
  }

  double entry(int i, int j) const {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
      if (col_[k] == j) return val_[k];
    return 0.0;
  }

  template <typename Fn>
  void for_each(Fn&& fn) const {
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        fn(static_cast<int>(i), col_[k], val_[k]);
  }

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_;
  std::vector<int> col_;
  std::vector<double> val_;
};

// Least-squares power-law fit e = C * x^(-q) through log-log coordinates.
struct PowerLawFit {
  double constant = 0;
  double exponent = 0;
};

inline PowerLawFit power_law_fit(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 2) throw std::invalid_argument("power_law_fit: need at least 2 points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : points) {
    if (x <= 0 || y <= 0) throw std::invalid_argument("power_law_fit: inputs must be positive");
    double lx = std::log(x), ly = std::log(y);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  double m = points.size();
  double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  double icept = (sy - slope * sx) / m;
  return {std::exp(icept), -slope};
}

}  // namespace lumpedtet
