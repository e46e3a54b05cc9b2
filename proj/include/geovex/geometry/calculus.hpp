#pragma once

#include <functional>

#include "geovex/config.hpp"
#include "geovex/geometry/geodesic.hpp"
#include "geovex/geometry/manifold.hpp"
#include "geovex/linalg.hpp"

namespace geovex {

using ScalarField = std::function<double(const Point&)>;

/// df_p(v): central difference of f along the geodesics through p with
/// velocities +v and -v, each evaluated at the FD step. Exact central
/// differencing along the curve, valid on every manifold kind.
inline double differential(const ScalarField& f, const TangentVector& v, const Tolerances& tol = {}) {
  const double h = tol.fd_step;
  const GeodesicHandle fwd(v.base, v.v, tol);
  const GeodesicHandle bwd(v.base, neg(v.v), tol);
  return (f(fwd.eval(h)) - f(bwd.eval(h))) / (2.0 * h);
}

/// Chart partial derivatives of f at p by central differences.
inline Vec chart_partials(const ScalarField& f, const Point& p, const Tolerances& tol = {}) {
  const double h = tol.fd_step;
  Vec d(p.x.size());
  Vec xp = p.x, xm = p.x;
  for (std::size_t i = 0; i < p.x.size(); ++i) {
    xp[i] = p.x[i] + h;
    xm[i] = p.x[i] - h;
    d[i] = (f(Point(p.manifold, xp, tol.boundary_eps)) - f(Point(p.manifold, xm, tol.boundary_eps))) /
           (2.0 * h);
    xp[i] = p.x[i];
    xm[i] = p.x[i];
  }
  return d;
}

/// Riemannian gradient: the tangent vector with g(grad f, w) = df(w) for all
/// w, i.e. grad^i = g^{ij} (partial_j f).
inline TangentVector gradient(const ScalarField& f, const Point& p, const Tolerances& tol = {}) {
  const Vec df = chart_partials(f, p, tol);
  const Mat g = metric_eval(p.manifold, p);
  return TangentVector(p, solve(g, df));
}

}  // namespace geovex
