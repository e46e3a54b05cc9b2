#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "geovex/dsl/ast.hpp"
#include "geovex/dsl/eval.hpp"
#include "geovex/errors.hpp"
#include "geovex/geometry/geodesic.hpp"
#include "geovex/geometry/manifold.hpp"

namespace geovex {

namespace detail {

/// Bindings for a bifunction of points: the first argument is visible as
/// both "x" and "a", the second as both "y" and "b".
inline Bindings pair_bindings(const Point& a, const Point& b) {
  Bindings bind;
  bind.point("x", a).point("a", a).point("y", b).point("b", b);
  return bind;
}

inline Vec eval_components(const std::vector<Expr>& comps, const Bindings& bind, const ManifoldPtr& m) {
  Vec out(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) out[i] = eval_scalar(comps[i], bind, m);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// EtaDef: the direction bifunction eta(a, b), a tangent vector at b.
// ---------------------------------------------------------------------------

struct EtaDef {
  enum class Kind { LogMap, Zero, PiecewiseBalls, Expression };

  Kind kind = Kind::LogMap;
  Vec center1, center2;          // PiecewiseBalls
  double r1 = 0.0, r2 = 0.0;     // PiecewiseBalls
  std::vector<Expr> components;  // Expression

  static EtaDef log_map() { return EtaDef{Kind::LogMap, {}, {}, 0, 0, {}}; }
  static EtaDef zero() { return EtaDef{Kind::Zero, {}, {}, 0, 0, {}}; }
  static EtaDef piecewise_balls(Vec c1, double radius1, Vec c2, double radius2) {
    if (!(radius1 > 0.0) || !(radius2 > 0.0))
      throw error(errc::construction_error, "piecewise-balls radii must be positive");
    return EtaDef{Kind::PiecewiseBalls, std::move(c1), std::move(c2), radius1, radius2, {}};
  }
  static EtaDef expression(std::vector<Expr> comps) {
    if (comps.empty()) throw error(errc::construction_error, "eta expression needs components");
    return EtaDef{Kind::Expression, {}, {}, 0, 0, std::move(comps)};
  }
};

/// eta(a, b) in T_b M.
inline TangentVector eval_eta(const EtaDef& def, const Point& a, const Point& b) {
  if (!same_manifold(a.manifold, b.manifold))
    throw error(errc::base_mismatch, "eta arguments on different manifolds");
  switch (def.kind) {
    case EtaDef::Kind::LogMap:
      return log_map(b, a);
    case EtaDef::Kind::Zero:
      return zero_vector(b);
    case EtaDef::Kind::PiecewiseBalls: {
      // co-ball test with strict inequalities (open balls)
      const Point c1(a.manifold, def.center1), c2(a.manifold, def.center2);
      const bool in1 = distance(a, c1) < def.r1 && distance(b, c1) < def.r1;
      const bool in2 = distance(a, c2) < def.r2 && distance(b, c2) < def.r2;
      if (in1 || in2) return log_map(b, a);
      return zero_vector(b);
    }
    case EtaDef::Kind::Expression: {
      if (static_cast<int>(def.components.size()) != b.dim())
        throw error(errc::config_error, "eta expression has " + std::to_string(def.components.size()) +
                                            " components on a manifold of dimension " +
                                            std::to_string(b.dim()));
      const Vec v = detail::eval_components(def.components, detail::pair_bindings(a, b), b.manifold);
      return TangentVector(b, v);
    }
  }
  throw error(errc::config_error, "unreachable eta kind");
}

// ---------------------------------------------------------------------------
// AlphaDef: the scaling bifunction alpha(a, b), with codomain R - {0}.
// ---------------------------------------------------------------------------

struct AlphaDef {
  enum class Kind { Constant, Expression };

  Kind kind = Kind::Constant;
  double c = 1.0;
  Expr expr;

  static AlphaDef constant(double value) {
    if (value == 0.0) throw error(errc::zero_alpha, "alpha constant must be nonzero");
    return AlphaDef{Kind::Constant, value, {}};
  }
  static AlphaDef expression(Expr e) { return AlphaDef{Kind::Expression, 0.0, std::move(e)}; }
};

inline double eval_alpha(const AlphaDef& def, const Point& a, const Point& b) {
  if (def.kind == AlphaDef::Kind::Constant) return def.c;
  const double v = eval_scalar(def.expr, detail::pair_bindings(a, b), a.manifold);
  if (v == 0.0)
    throw error(errc::zero_alpha, "alpha evaluated to 0 at a = " + format_coords(a.x) +
                                      ", b = " + format_coords(b.x) + " (codomain excludes 0)");
  return v;
}

// ---------------------------------------------------------------------------
// EMapDef: the point map E(x).
// ---------------------------------------------------------------------------

struct EMapDef {
  enum class Kind { Identity, GeodesicProjection, Expression };

  Kind kind = Kind::Identity;
  Vec anchor;                    // GeodesicProjection
  double rho = 0.0;              // GeodesicProjection
  std::vector<Expr> components;  // Expression

  static EMapDef identity() { return EMapDef{Kind::Identity, {}, 0, {}}; }
  static EMapDef geodesic_projection(Vec anchor, double rho) {
    if (!(rho > 0.0)) throw error(errc::construction_error, "projection radius must be positive");
    return EMapDef{Kind::GeodesicProjection, std::move(anchor), rho, {}};
  }
  static EMapDef expression(std::vector<Expr> comps) {
    if (comps.empty()) throw error(errc::construction_error, "E expression needs components");
    return EMapDef{Kind::Expression, {}, 0, std::move(comps)};
  }
};

inline Point eval_E(const EMapDef& def, const Point& x, const Tolerances& tol = {}) {
  switch (def.kind) {
    case EMapDef::Kind::Identity:
      return x;
    case EMapDef::Kind::GeodesicProjection: {
      const Point anchor(x.manifold, def.anchor);
      TangentVector dir = log_map(anchor, x);
      double len = riemannian_norm(dir);
      if (len <= 1e-15) {
        // tie-break at x == anchor: project along the first chart basis
        // direction, unit-normalized in the metric, so d(anchor, E) = rho
        // still holds.
        const Mat g = metric_eval(x.manifold, anchor);
        Vec e1(x.x.size(), 0.0);
        e1[0] = 1.0 / std::sqrt(g(0, 0));
        dir = TangentVector(anchor, e1);
        len = 1.0;
      }
      return exp_map(anchor, TangentVector(anchor, scaled(dir.v, def.rho / len)), tol);
    }
    case EMapDef::Kind::Expression: {
      if (static_cast<int>(def.components.size()) != x.dim())
        throw error(errc::config_error, "E expression has " + std::to_string(def.components.size()) +
                                            " components on a manifold of dimension " +
                                            std::to_string(x.dim()));
      Bindings bind;
      bind.point("x", x).point("a", x);
      return Point(x.manifold, detail::eval_components(def.components, bind, x.manifold),
                   tol.boundary_eps);
    }
  }
  throw error(errc::config_error, "unreachable E kind");
}

}  // namespace geovex
