#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "geovex/errors.hpp"

namespace geovex {

using Vec = std::vector<double>;

/// Dense square matrix, row-major. Dimensions here are chart dimensions
/// (2 or 3 in practice), so no effort is spent on blocking or views.
struct Mat {
  int n = 0;
  std::vector<double> a;

  Mat() = default;
  explicit Mat(int dim) : n(dim), a(static_cast<std::size_t>(dim) * dim, 0.0) {}

  double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
  double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

  static Mat identity(int dim) {
    Mat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = 1.0;
    return m;
  }

  static Mat scaled_identity(int dim, double s) {
    Mat m(dim);
    for (int i = 0; i < dim; ++i) m(i, i) = s;
    return m;
  }
};

inline double dot(const Vec& a, const Vec& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline double norm(const Vec& a) { return std::sqrt(dot(a, a)); }

inline Vec add(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline Vec scaled(const Vec& a, double s) {
  Vec r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] * s;
  return r;
}

inline Vec neg(const Vec& a) { return scaled(a, -1.0); }

/// r += s * a
inline void axpy(Vec& r, double s, const Vec& a) {
  for (std::size_t i = 0; i < a.size(); ++i) r[i] += s * a[i];
}

inline Vec matvec(const Mat& m, const Vec& v) {
  Vec r(static_cast<std::size_t>(m.n), 0.0);
  for (int i = 0; i < m.n; ++i) {
    double s = 0.0;
    for (int j = 0; j < m.n; ++j) s += m(i, j) * v[static_cast<std::size_t>(j)];
    r[static_cast<std::size_t>(i)] = s;
  }
  return r;
}

/// v^T m w
inline double quadratic(const Mat& m, const Vec& v, const Vec& w) {
  double s = 0.0;
  for (int i = 0; i < m.n; ++i)
    for (int j = 0; j < m.n; ++j) s += v[static_cast<std::size_t>(i)] * m(i, j) * w[static_cast<std::size_t>(j)];
  return s;
}

/// Solve m x = b by Gaussian elimination with partial pivoting.
inline Vec solve(Mat m, Vec b) {
  const int n = m.n;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (m(piv, col) == 0.0) throw error(errc::metric_degeneracy, "singular matrix in linear solve");
    if (piv != col) {
      for (int j = 0; j < n; ++j) std::swap(m(piv, j), m(col, j));
      std::swap(b[static_cast<std::size_t>(piv)], b[static_cast<std::size_t>(col)]);
    }
    const double d = m(col, col);
    for (int r = col + 1; r < n; ++r) {
      const double f = m(r, col) / d;
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) m(r, j) -= f * m(col, j);
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
    }
  }
  Vec x(static_cast<std::size_t>(n), 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < n; ++j) s -= m(i, j) * x[static_cast<std::size_t>(j)];
    x[static_cast<std::size_t>(i)] = s / m(i, i);
  }
  return x;
}

/// True iff m is symmetric positive-definite (checked via Cholesky).
inline bool is_spd(const Mat& m, double sym_tol = 1e-9) {
  const int n = m.n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double scale = std::max({1.0, std::abs(m(i, j)), std::abs(m(j, i))});
      if (std::abs(m(i, j) - m(j, i)) > sym_tol * scale) return false;
    }
  Mat l(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (s <= 0.0) return false;
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return true;
}

}  // namespace geovex
