#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "geovex/config.hpp"
#include "geovex/errors.hpp"
#include "geovex/linalg.hpp"

namespace geovex {

enum class ManifoldKind { Euclidean, PoincareBall, Custom };

struct ManifoldSpec;
using ManifoldPtr = std::shared_ptr<const ManifoldSpec>;

/// Which geometry is in force. Euclidean n-space and the Poincare ball
/// (sectional curvature -1) have closed-form geodesics; a custom coordinate
/// metric is handled numerically. The metric callback for Custom returns
/// g_ij at the given chart coordinates and is checked for positive
/// definiteness at every queried point.
struct ManifoldSpec {
  ManifoldKind kind = ManifoldKind::Euclidean;
  int dim = 0;
  std::function<Mat(const Vec&)> metric_fn;                // Custom only
  std::vector<std::pair<double, double>> chart_bounds;     // Custom only; empty = unbounded
  std::string name;

  static ManifoldPtr euclidean(int n) {
    check_dim(n);
    auto m = std::make_shared<ManifoldSpec>();
    m->kind = ManifoldKind::Euclidean;
    m->dim = n;
    m->name = "euclidean(" + std::to_string(n) + ")";
    return m;
  }

  static ManifoldPtr poincare_ball(int n) {
    check_dim(n);
    auto m = std::make_shared<ManifoldSpec>();
    m->kind = ManifoldKind::PoincareBall;
    m->dim = n;
    m->name = "poincare-ball(" + std::to_string(n) + ")";
    return m;
  }

  static ManifoldPtr custom(int n, std::function<Mat(const Vec&)> metric,
                            std::vector<std::pair<double, double>> bounds = {},
                            std::string label = {}) {
    check_dim(n);
    if (!metric) throw error(errc::config_error, "custom manifold requires a metric callback");
    if (!bounds.empty() && static_cast<int>(bounds.size()) != n)
      throw error(errc::config_error, "chart bounds dimension mismatch");
    auto m = std::make_shared<ManifoldSpec>();
    m->kind = ManifoldKind::Custom;
    m->dim = n;
    m->metric_fn = std::move(metric);
    m->chart_bounds = std::move(bounds);
    m->name = label.empty() ? "custom(" + std::to_string(n) + ")" : std::move(label);
    return m;
  }

  bool closed_form() const { return kind != ManifoldKind::Custom; }

  bool in_chart(const Vec& x, double boundary_eps = 1e-12) const {
    if (static_cast<int>(x.size()) != dim) return false;
    switch (kind) {
      case ManifoldKind::Euclidean:
        return true;
      case ManifoldKind::PoincareBall:
        return norm(x) < 1.0 - boundary_eps;
      case ManifoldKind::Custom:
        for (int i = 0; i < dim; ++i) {
          if (chart_bounds.empty()) break;
          const auto& [lo, hi] = chart_bounds[static_cast<std::size_t>(i)];
          if (x[static_cast<std::size_t>(i)] < lo || x[static_cast<std::size_t>(i)] > hi) return false;
        }
        return true;
    }
    return false;
  }

private:
  static void check_dim(int n) {
    if (n < 1) throw error(errc::config_error, "manifold dimension must be >= 1");
  }
};

inline bool same_manifold(const ManifoldPtr& a, const ManifoldPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind || a->dim != b->dim) return false;
  // distinct custom manifolds are never interchangeable
  return a->kind != ManifoldKind::Custom;
}

inline std::string format_coords(const Vec& x) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (i) os << ", ";
    os << x[i];
  }
  os << ")";
  return os.str();
}

/// Chart-coordinate point on a manifold. Construction validates the chart
/// domain; Poincare ball points with norm >= 1 - boundary_eps are rejected.
struct Point {
  ManifoldPtr manifold;
  Vec x;

  Point() = default;
  Point(ManifoldPtr m, Vec coords, double boundary_eps = 1e-12)
      : manifold(std::move(m)), x(std::move(coords)) {
    if (!manifold) throw error(errc::config_error, "point requires a manifold");
    if (static_cast<int>(x.size()) != manifold->dim)
      throw error(errc::config_error, "point dimension " + std::to_string(x.size()) +
                                          " does not match " + manifold->name);
    if (!manifold->in_chart(x, boundary_eps))
      throw error(errc::domain_exit, "point " + format_coords(x) + " outside the chart of " + manifold->name);
  }

  int dim() const { return manifold ? manifold->dim : 0; }
};

inline bool same_coords(const Vec& a, const Vec& b, double tol = 1e-9) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::abs(a[i] - b[i]) > tol) return false;
  return true;
}

/// Tangent vector anchored at a base point, stored in chart components.
struct TangentVector {
  Point base;
  Vec v;

  TangentVector() = default;
  TangentVector(Point b, Vec components) : base(std::move(b)), v(std::move(components)) {
    if (static_cast<int>(v.size()) != base.dim())
      throw error(errc::config_error, "tangent components do not match manifold dimension");
  }
};

inline Mat metric_eval(const ManifoldSpec& m, const Point& p) {
  switch (m.kind) {
    case ManifoldKind::Euclidean:
      return Mat::identity(m.dim);
    case ManifoldKind::PoincareBall: {
      const double r2 = dot(p.x, p.x);
      const double lambda = 2.0 / (1.0 - r2);
      return Mat::scaled_identity(m.dim, lambda * lambda);
    }
    case ManifoldKind::Custom: {
      Mat g = m.metric_fn(p.x);
      if (g.n != m.dim) throw error(errc::metric_degeneracy, "metric callback returned wrong dimension");
      if (!is_spd(g))
        throw error(errc::metric_degeneracy,
                    "metric is not symmetric positive-definite at " + format_coords(p.x));
      return g;
    }
  }
  throw error(errc::config_error, "unreachable manifold kind");
}

inline Mat metric_eval(const ManifoldPtr& m, const Point& p) { return metric_eval(*m, p); }

/// Raw metric at chart coordinates, without chart-membership validation.
/// Used by finite-difference stencils that may poke marginally outside.
inline Mat metric_at(const ManifoldSpec& m, const Vec& x) {
  switch (m.kind) {
    case ManifoldKind::Euclidean:
      return Mat::identity(m.dim);
    case ManifoldKind::PoincareBall: {
      const double lambda = 2.0 / (1.0 - dot(x, x));
      return Mat::scaled_identity(m.dim, lambda * lambda);
    }
    case ManifoldKind::Custom: {
      Mat g = m.metric_fn(x);
      if (!is_spd(g))
        throw error(errc::metric_degeneracy,
                    "metric is not symmetric positive-definite at " + format_coords(x));
      return g;
    }
  }
  throw error(errc::config_error, "unreachable manifold kind");
}

inline void require_same_base(const TangentVector& u, const TangentVector& v) {
  if (!same_manifold(u.base.manifold, v.base.manifold) || !same_coords(u.base.x, v.base.x))
    throw error(errc::base_mismatch, "tangent vectors based at " + format_coords(u.base.x) + " and " +
                                         format_coords(v.base.x));
}

/// Riemannian inner product g_p(u, v).
inline double inner(const TangentVector& u, const TangentVector& v) {
  require_same_base(u, v);
  const Mat g = metric_eval(u.base.manifold, u.base);
  return quadratic(g, u.v, v.v);
}

inline double riemannian_norm(const TangentVector& u) {
  const Mat g = metric_eval(u.base.manifold, u.base);
  const double q = quadratic(g, u.v, u.v);
  return q <= 0.0 ? 0.0 : std::sqrt(q);
}

inline TangentVector zero_vector(const Point& p) {
  return TangentVector(p, Vec(static_cast<std::size_t>(p.dim()), 0.0));
}

}  // namespace geovex
