#pragma once

#include <cmath>
#include <string>

#include "geovex/errors.hpp"
#include "geovex/geometry/geodesic.hpp"
#include "geovex/geometry/manifold.hpp"

namespace geovex {

namespace detail {

inline void require_unit_interval(double s, const char* what) {
  if (!(s >= 0.0 && s <= 1.0))
    throw error(errc::parameter_order, std::string(what) + " must lie in [0,1], got " + std::to_string(s));
}

/// Transport along an ODE-integrated geodesic: solve
///   dv^k/dt = -Gamma^k_ij(gamma(t)) gamma'(t)^i v^j
/// from s to t with RK4, sampling the cached trajectory by Hermite
/// interpolation.
inline Vec ode_transport(const GeodesicHandle& geo, double s, double t, const Vec& v) {
  const ManifoldSpec& m = *geo.manifold();
  const Tolerances& tol = geo.tolerances();
  const auto rhs = [&](double tau, const Vec& w) {
    const Vec x = geo.position(tau);
    const Vec u = geo.velocity_components(tau);
    const std::vector<Mat> gamma = christoffel(m, x, tol.christoffel_fd_step);
    Vec dw(w.size(), 0.0);
    for (std::size_t k = 0; k < w.size(); ++k) dw[k] = -quadratic(gamma[k], u, w);
    return dw;
  };

  const int nsteps = tol.ode_step_count();
  const double h = (t - s) / nsteps;
  Vec w = v;
  if (h == 0.0) return w;
  double tau = s;
  for (int i = 0; i < nsteps; ++i) {
    const Vec k1 = rhs(tau, w);
    Vec w2 = w;
    axpy(w2, h / 2, k1);
    const Vec k2 = rhs(tau + h / 2, w2);
    Vec w3 = w;
    axpy(w3, h / 2, k2);
    const Vec k3 = rhs(tau + h / 2, w3);
    Vec w4 = w;
    axpy(w4, h, k3);
    const Vec k4 = rhs(tau + h, w4);
    for (std::size_t j = 0; j < w.size(); ++j) w[j] += h / 6.0 * (k1[j] + 2 * k2[j] + 2 * k3[j] + k4[j]);
    tau = s + (i + 1) * h;
  }
  return w;
}

}  // namespace detail

/// Parallel transport of `v` (based at geo(s)) to geo(t) along the geodesic.
inline TangentVector parallel_transport(const GeodesicHandle& geo, double s, double t,
                                        const TangentVector& v) {
  detail::require_unit_interval(s, "transport source parameter s");
  detail::require_unit_interval(t, "transport target parameter t");
  const Point at_s = geo.eval(s);
  if (!same_manifold(v.base.manifold, geo.manifold()))
    throw error(errc::base_mismatch, "transported vector lives on a different manifold");
  if (!same_coords(v.base.x, at_s.x))
    throw error(errc::base_mismatch, "transported vector is based at " + format_coords(v.base.x) +
                                         ", but the geodesic passes through " + format_coords(at_s.x) +
                                         " at s = " + std::to_string(s));

  switch (geo.manifold()->kind) {
    case ManifoldKind::Euclidean:
      return TangentVector(geo.eval(t), v.v);
    case ManifoldKind::PoincareBall:
      return TangentVector(geo.eval(t), ball_transport(at_s.x, geo.position(t), v.v));
    case ManifoldKind::Custom:
      return TangentVector(geo.eval(t), detail::ode_transport(geo, s, t, v.v));
  }
  throw error(errc::config_error, "unreachable manifold kind");
}

/// Point-to-point transport along the unique connecting geodesic; available
/// wherever the log map is.
inline TangentVector parallel_transport(const Point& p, const Point& q, const TangentVector& v) {
  if (!same_manifold(p.manifold, q.manifold))
    throw error(errc::base_mismatch, "transport endpoints on different manifolds");
  if (!same_coords(v.base.x, p.x))
    throw error(errc::base_mismatch, "transported vector is not based at the source point");
  switch (p.manifold->kind) {
    case ManifoldKind::Euclidean:
      return TangentVector(q, v.v);
    case ManifoldKind::PoincareBall:
      return TangentVector(q, ball_transport(p.x, q.x, v.v));
    case ManifoldKind::Custom:
      throw error(errc::unsupported_inverse,
                  "point-to-point transport on a custom metric requires an explicit geodesic");
  }
  throw error(errc::config_error, "unreachable manifold kind");
}

}  // namespace geovex
