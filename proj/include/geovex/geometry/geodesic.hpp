#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "geovex/config.hpp"
#include "geovex/errors.hpp"
#include "geovex/geometry/manifold.hpp"
#include "geovex/linalg.hpp"

namespace geovex {

// ---------------------------------------------------------------------------
// Mobius gyrovector operations on the Poincare ball (curvature -1).
// ---------------------------------------------------------------------------

inline double conformal_factor(const Vec& x) { return 2.0 / (1.0 - dot(x, x)); }

inline Vec mobius_add(const Vec& u, const Vec& v) {
  const double uv = dot(u, v);
  const double nu2 = dot(u, u);
  const double nv2 = dot(v, v);
  const double den = 1.0 + 2.0 * uv + nu2 * nv2;
  Vec r = scaled(u, (1.0 + 2.0 * uv + nv2) / den);
  axpy(r, (1.0 - nu2) / den, v);
  return r;
}

/// gyr[u,w] applied to v. Gyrations are orthogonal linear maps, so v is
/// shrunk into the ball before the gyrocommutator is evaluated and the
/// result rescaled; this keeps the Mobius formulas well-defined for tangent
/// components of any magnitude.
inline Vec gyration(const Vec& u, const Vec& w, const Vec& v) {
  const double nv = norm(v);
  if (nv == 0.0) return v;
  const double c = 0.25 / nv;
  const Vec vs = scaled(v, c);
  const Vec r = mobius_add(neg(mobius_add(u, w)), mobius_add(u, mobius_add(w, vs)));
  return scaled(r, 1.0 / c);
}

inline Vec ball_exp(const Vec& p, const Vec& v) {
  const double nv = norm(v);
  if (nv == 0.0) return p;
  const double lam = conformal_factor(p);
  const double t = std::tanh(lam * nv / 2.0);
  return mobius_add(p, scaled(v, t / nv));
}

inline Vec ball_log(const Vec& p, const Vec& q) {
  const Vec m = mobius_add(neg(p), q);
  const double nm = norm(m);
  if (nm == 0.0) return Vec(p.size(), 0.0);
  const double lam = conformal_factor(p);
  return scaled(m, (2.0 / lam) * std::atanh(nm) / nm);
}

/// Parallel transport of tangent components from p to q along the unique
/// geodesic joining them: (lambda_p / lambda_q) gyr[q, -p] v.
inline Vec ball_transport(const Vec& p, const Vec& q, const Vec& v) {
  const Vec g = gyration(q, neg(p), v);
  return scaled(g, conformal_factor(p) / conformal_factor(q));
}

inline double ball_distance(const Vec& p, const Vec& q) {
  const Vec d = sub(p, q);
  const double num = 2.0 * dot(d, d);
  const double den = (1.0 - dot(p, p)) * (1.0 - dot(q, q));
  return std::acosh(1.0 + num / den);
}

// ---------------------------------------------------------------------------
// Christoffel symbols by central finite differences of the metric.
// ---------------------------------------------------------------------------

/// Gamma[k](i,j) at chart coordinates x.
inline std::vector<Mat> christoffel(const ManifoldSpec& m, const Vec& x, double fd_step) {
  const int n = m.dim;
  const Mat g = metric_at(m, x);

  // dg[l](i,j) = d g_ij / d x_l
  std::vector<Mat> dg(static_cast<std::size_t>(n), Mat(n));
  Vec xp = x, xm = x;
  for (int l = 0; l < n; ++l) {
    xp[static_cast<std::size_t>(l)] = x[static_cast<std::size_t>(l)] + fd_step;
    xm[static_cast<std::size_t>(l)] = x[static_cast<std::size_t>(l)] - fd_step;
    const Mat gp = metric_at(m, xp);
    const Mat gm = metric_at(m, xm);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) dg[static_cast<std::size_t>(l)](i, j) = (gp(i, j) - gm(i, j)) / (2.0 * fd_step);
    xp[static_cast<std::size_t>(l)] = x[static_cast<std::size_t>(l)];
    xm[static_cast<std::size_t>(l)] = x[static_cast<std::size_t>(l)];
  }

  // first kind: T[k](i,j) = (d_i g_jk + d_j g_ik - d_k g_ij) / 2
  std::vector<Mat> first(static_cast<std::size_t>(n), Mat(n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        first[static_cast<std::size_t>(k)](i, j) =
            0.5 * (dg[static_cast<std::size_t>(i)](j, k) + dg[static_cast<std::size_t>(j)](i, k) -
                   dg[static_cast<std::size_t>(k)](i, j));

  // raise the first index: Gamma^k = g^{kl} T_l, column by column via solves
  std::vector<Mat> gamma(static_cast<std::size_t>(n), Mat(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Vec rhs(static_cast<std::size_t>(n));
      for (int l = 0; l < n; ++l) rhs[static_cast<std::size_t>(l)] = first[static_cast<std::size_t>(l)](i, j);
      const Vec col = solve(g, rhs);
      for (int k = 0; k < n; ++k) gamma[static_cast<std::size_t>(k)](i, j) = col[static_cast<std::size_t>(k)];
    }
  return gamma;
}

// ---------------------------------------------------------------------------
// GeodesicHandle
// ---------------------------------------------------------------------------

/// The curve through `start` with initial velocity `velocity`, evaluable on
/// [0,1] (and slightly beyond, for finite-difference stencils). Closed-form
/// on Euclidean space and the Poincare ball; RK4-integrated dense output for
/// custom metrics, with positions and velocities cached per step.
class GeodesicHandle {
public:
  GeodesicHandle(Point start, Vec velocity, const Tolerances& tol = {})
      : start_(std::move(start)), v0_(std::move(velocity)), tol_(tol) {
    if (static_cast<int>(v0_.size()) != start_.dim())
      throw error(errc::config_error, "velocity dimension mismatch");
    if (!start_.manifold->closed_form()) integrate();
  }

  const Point& start() const { return start_; }
  TangentVector velocity() const { return TangentVector(start_, v0_); }
  const ManifoldPtr& manifold() const { return start_.manifold; }
  bool closed_form() const { return start_.manifold->closed_form(); }

  Point eval(double t) const { return Point(start_.manifold, position(t), tol_.boundary_eps); }

  TangentVector deriv(double t) const {
    return TangentVector(eval(t), velocity_components(t));
  }

  Vec position(double t) const {
    switch (start_.manifold->kind) {
      case ManifoldKind::Euclidean: {
        Vec r = start_.x;
        axpy(r, t, v0_);
        return r;
      }
      case ManifoldKind::PoincareBall:
        return ball_exp(start_.x, scaled(v0_, t));
      case ManifoldKind::Custom:
        return hermite(t).first;
    }
    throw error(errc::config_error, "unreachable manifold kind");
  }

  Vec velocity_components(double t) const {
    switch (start_.manifold->kind) {
      case ManifoldKind::Euclidean:
        return v0_;
      case ManifoldKind::PoincareBall:
        // the velocity field of a geodesic is its own parallel transport
        return ball_transport(start_.x, position(t), v0_);
      case ManifoldKind::Custom:
        return hermite(t).second;
    }
    throw error(errc::config_error, "unreachable manifold kind");
  }

  /// Dense cache for the ODE path: grid[i] holds (x, dx/dt) at t = i/steps.
  const std::vector<std::pair<Vec, Vec>>& cache() const { return grid_; }
  int steps() const { return static_cast<int>(grid_.empty() ? 0 : grid_.size() - 1); }
  const Tolerances& tolerances() const { return tol_; }

private:
  void integrate() {
    const ManifoldSpec& m = *start_.manifold;
    const int nsteps = tol_.ode_step_count();
    const double h = 1.0 / nsteps;
    Vec x = start_.x, u = v0_;
    grid_.reserve(static_cast<std::size_t>(nsteps) + 1);
    grid_.emplace_back(x, u);
    for (int i = 0; i < nsteps; ++i) {
      rk4_step(m, x, u, h, static_cast<double>(i) * h);
      if (!m.in_chart(x, tol_.boundary_eps))
        throw error(errc::domain_exit,
                    "geodesic left the chart at t = " + std::to_string((i + 1) * h) + " near " + format_coords(x));
      grid_.emplace_back(x, u);
    }
  }

  void rk4_step(const ManifoldSpec& m, Vec& x, Vec& u, double h, double t0) const {
    const auto accel = [&](const Vec& xx, const Vec& uu) {
      std::vector<Mat> gamma;
      try {
        gamma = christoffel(m, xx, tol_.christoffel_fd_step);
      } catch (const error& e) {
        if (e.code() == errc::metric_degeneracy)
          throw error(errc::domain_exit, std::string("geodesic left the metric domain near t = ") +
                                             std::to_string(t0) + " (" + e.what() + ")");
        throw;
      }
      Vec a(xx.size(), 0.0);
      for (std::size_t k = 0; k < xx.size(); ++k)
        a[k] = -quadratic(gamma[k], uu, uu);
      return a;
    };

    const Vec k1x = u, k1u = accel(x, u);
    Vec x2 = x, u2 = u;
    axpy(x2, h / 2, k1x);
    axpy(u2, h / 2, k1u);
    const Vec k2x = u2, k2u = accel(x2, u2);
    Vec x3 = x, u3 = u;
    axpy(x3, h / 2, k2x);
    axpy(u3, h / 2, k2u);
    const Vec k3x = u3, k3u = accel(x3, u3);
    Vec x4 = x, u4 = u;
    axpy(x4, h, k3x);
    axpy(u4, h, k3u);
    const Vec k4x = u4, k4u = accel(x4, u4);

    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] += h / 6.0 * (k1x[i] + 2 * k2x[i] + 2 * k3x[i] + k4x[i]);
      u[i] += h / 6.0 * (k1u[i] + 2 * k2u[i] + 2 * k3u[i] + k4u[i]);
    }
  }

  /// Cubic Hermite interpolation of the cached trajectory at parameter t.
  std::pair<Vec, Vec> hermite(double t) const {
    const int nsteps = steps();
    const double h = 1.0 / nsteps;
    if (t <= 0.0) {
      // linear extension below 0 keeps finite-difference stencils usable
      if (t == 0.0) return grid_.front();
      Vec x = grid_.front().first;
      axpy(x, t, grid_.front().second);
      return {x, grid_.front().second};
    }
    if (t >= 1.0) {
      if (t == 1.0) return grid_.back();
      Vec x = grid_.back().first;
      axpy(x, t - 1.0, grid_.back().second);
      return {x, grid_.back().second};
    }
    int i = static_cast<int>(t * nsteps);
    if (i >= nsteps) i = nsteps - 1;
    const double th = (t - i * h) / h;
    const auto& [xa, ua] = grid_[static_cast<std::size_t>(i)];
    const auto& [xb, ub] = grid_[static_cast<std::size_t>(i) + 1];

    const double h00 = (1 + 2 * th) * (1 - th) * (1 - th);
    const double h10 = th * (1 - th) * (1 - th);
    const double h01 = th * th * (3 - 2 * th);
    const double h11 = th * th * (th - 1);
    const double d00 = 6 * th * (th - 1);
    const double d10 = (1 - th) * (1 - 3 * th);
    const double d01 = -d00;
    const double d11 = th * (3 * th - 2);

    Vec x(xa.size()), u(xa.size());
    for (std::size_t k = 0; k < xa.size(); ++k) {
      x[k] = h00 * xa[k] + h10 * h * ua[k] + h01 * xb[k] + h11 * h * ub[k];
      u[k] = (d00 * xa[k] + d01 * xb[k]) / h + d10 * ua[k] + d11 * ub[k];
    }
    return {x, u};
  }

  Point start_;
  Vec v0_;
  Tolerances tol_;
  std::vector<std::pair<Vec, Vec>> grid_;
};

inline GeodesicHandle solve_geodesic(const Point& p, const TangentVector& v, const Tolerances& tol = {}) {
  if (!same_manifold(p.manifold, v.base.manifold) || !same_coords(p.x, v.base.x))
    throw error(errc::base_mismatch, "geodesic velocity not based at the start point");
  return GeodesicHandle(p, v.v, tol);
}

inline Point exp_map(const Point& p, const TangentVector& v, const Tolerances& tol = {}) {
  switch (p.manifold->kind) {
    case ManifoldKind::Euclidean:
      return Point(p.manifold, add(p.x, v.v));
    case ManifoldKind::PoincareBall:
      return Point(p.manifold, ball_exp(p.x, v.v), tol.boundary_eps);
    case ManifoldKind::Custom:
      return solve_geodesic(p, v, tol).eval(1.0);
  }
  throw error(errc::config_error, "unreachable manifold kind");
}

/// Inverse of exp_map. Guaranteed only on the built-in Hadamard models,
/// where geodesics between any two points are unique.
inline TangentVector log_map(const Point& p, const Point& q) {
  if (!same_manifold(p.manifold, q.manifold))
    throw error(errc::base_mismatch, "log endpoints on different manifolds");
  switch (p.manifold->kind) {
    case ManifoldKind::Euclidean:
      return TangentVector(p, sub(q.x, p.x));
    case ManifoldKind::PoincareBall:
      return TangentVector(p, ball_log(p.x, q.x));
    case ManifoldKind::Custom:
      throw error(errc::unsupported_inverse, "log map is not available on custom metrics");
  }
  throw error(errc::config_error, "unreachable manifold kind");
}

inline double distance(const Point& p, const Point& q) {
  if (!same_manifold(p.manifold, q.manifold))
    throw error(errc::base_mismatch, "distance endpoints on different manifolds");
  switch (p.manifold->kind) {
    case ManifoldKind::Euclidean:
      return norm(sub(p.x, q.x));
    case ManifoldKind::PoincareBall:
      return ball_distance(p.x, q.x);
    case ManifoldKind::Custom:
      throw error(errc::unsupported_inverse, "distance is not available on custom metrics");
  }
  throw error(errc::config_error, "unreachable manifold kind");
}

// ---------------------------------------------------------------------------
// Curve length by adaptive quadrature.
// ---------------------------------------------------------------------------

/// A parametrized curve; `velocity` may be empty, in which case derivatives
/// are taken by central differences of `position`.
struct Curve {
  std::function<Point(double)> position;
  std::function<Vec(double)> velocity;
};

namespace detail {

inline double curve_speed(const Curve& c, double t, double fd_step) {
  const Point p = c.position(t);
  Vec v;
  if (c.velocity) {
    v = c.velocity(t);
  } else {
    const Vec a = c.position(t - fd_step).x;
    const Vec b = c.position(t + fd_step).x;
    v = scaled(sub(b, a), 1.0 / (2.0 * fd_step));
  }
  const Mat g = metric_eval(p.manifold, p);
  const double q = quadratic(g, v, v);
  return q <= 0.0 ? 0.0 : std::sqrt(q);
}

inline double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b, double fa,
                               double fm, double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = simpson(a, m, fa, flm, fm);
  const double right = simpson(m, b, fm, frm, fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

}  // namespace detail

inline double curve_length(const Curve& c, double a, double b, const Tolerances& tol = {}) {
  if (a > b) throw error(errc::parameter_order, "curve_length requires a <= b");
  if (a == b) return 0.0;
  const auto f = [&](double t) { return detail::curve_speed(c, t, tol.fd_step); };
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = detail::simpson(a, b, fa, fm, fb);
  return detail::adaptive_simpson(f, a, b, fa, fm, fb, whole, tol.tol_quad, 24);
}

inline Curve as_curve(const GeodesicHandle& geo) {
  return Curve{[&geo](double t) { return geo.eval(t); },
               [&geo](double t) { return geo.velocity_components(t); }};
}

inline double curve_length(const GeodesicHandle& geo, double a, double b, const Tolerances& tol = {}) {
  return curve_length(as_curve(geo), a, b, tol);
}

}  // namespace geovex
