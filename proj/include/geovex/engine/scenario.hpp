#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "geovex/config.hpp"
#include "geovex/dsl/eval.hpp"
#include "geovex/dsl/maps.hpp"
#include "geovex/errors.hpp"
#include "geovex/geometry/geodesic.hpp"
#include "geovex/geometry/manifold.hpp"
#include "geovex/rng.hpp"

namespace geovex {

// ---------------------------------------------------------------------------
// SetSpec: an open subset of the manifold.
// ---------------------------------------------------------------------------

/// Membership is strict by construction — a union of open metric balls or a
/// strict-inequality predicate {x : expr(x) > 0}. Lower sections append
/// non-strict constraints f(x) <= lambda on top.
struct SetSpec {
  enum class Kind { BallUnion, Expression };

  struct Section {
    Expr f;
    double lambda = 0.0;
  };

  Kind kind = Kind::BallUnion;
  std::vector<Vec> centers;      // BallUnion
  std::vector<double> radii;     // BallUnion, metric radii, strict <
  Expr expr;                     // Expression: member iff expr(x) > 0
  std::vector<Section> sections; // conjunction of f(x) <= lambda constraints

  static SetSpec ball_union(std::vector<Vec> centers, std::vector<double> radii) {
    if (centers.empty() || centers.size() != radii.size())
      throw error(errc::construction_error, "ball union needs matching nonempty centers and radii");
    for (double r : radii)
      if (!(r > 0.0)) throw error(errc::construction_error, "ball radii must be positive");
    SetSpec s;
    s.kind = Kind::BallUnion;
    s.centers = std::move(centers);
    s.radii = std::move(radii);
    return s;
  }
  static SetSpec expression(Expr e) {
    SetSpec s;
    s.kind = Kind::Expression;
    s.expr = std::move(e);
    return s;
  }
};

// ---------------------------------------------------------------------------
// Sampler configuration
// ---------------------------------------------------------------------------

struct SamplerCfg {
  std::uint64_t seed = 42;
  int pairs = 500;  // N
  int t_grid = 33;  // T, includes both endpoints (and the midpoint when odd)
  std::vector<std::pair<double, double>> box;  // rejection box; empty = derive
  int max_rejects = 10000;
};

// ---------------------------------------------------------------------------
// InvexityScenario
// ---------------------------------------------------------------------------

struct InvexityScenario {
  std::string name;
  ManifoldPtr manifold;
  SetSpec set;
  EMapDef E = EMapDef::identity();
  EtaDef eta = EtaDef::log_map();
  AlphaDef alpha = AlphaDef::constant(1.0);
  std::map<std::string, Expr> functions;  // name -> scalar expression over x
  SamplerCfg sampler;
  Tolerances tol;
};

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

/// Signed margin of the primary set: positive strictly inside, negative
/// outside. Sections are checked separately (non-strict).
inline double set_margin(const InvexityScenario& sc, const Point& p) {
  switch (sc.set.kind) {
    case SetSpec::Kind::BallUnion: {
      double best = -1e300;
      for (std::size_t i = 0; i < sc.set.centers.size(); ++i) {
        const double m = sc.set.radii[i] - distance(p, Point(p.manifold, sc.set.centers[i]));
        best = std::max(best, m);
      }
      return best;
    }
    case SetSpec::Kind::Expression: {
      Bindings b;
      b.point("x", p).point("a", p);
      return eval_scalar(sc.set.expr, b, p.manifold);
    }
  }
  throw error(errc::config_error, "unreachable set kind");
}

inline double section_margin(const InvexityScenario& sc, const Point& p) {
  double best = 1e300;
  Bindings b;
  b.point("x", p).point("a", p);
  for (const auto& sec : sc.set.sections)
    best = std::min(best, sec.lambda - eval_scalar(sec.f, b, p.manifold));
  return best;  // +inf surrogate when no sections
}

inline bool member(const InvexityScenario& sc, const Point& p) {
  if (!(set_margin(sc, p) > 0.0)) return false;
  if (!sc.set.sections.empty() && section_margin(sc, p) < 0.0) return false;
  return true;
}

/// How far outside the set a point lies (0 when inside); used as witness
/// slack for membership violations.
inline double membership_deficit(const InvexityScenario& sc, const Point& p) {
  double d = std::max(0.0, -set_margin(sc, p));
  if (!sc.set.sections.empty()) d = std::max(d, std::max(0.0, -section_margin(sc, p)));
  return d;
}

// ---------------------------------------------------------------------------
// Sampling
// ---------------------------------------------------------------------------

inline std::vector<std::pair<double, double>> sampling_box(const InvexityScenario& sc) {
  if (!sc.sampler.box.empty()) {
    if (static_cast<int>(sc.sampler.box.size()) != sc.manifold->dim)
      throw error(errc::config_error, "sampler box dimension mismatch");
    return sc.sampler.box;
  }
  const int n = sc.manifold->dim;
  if (sc.manifold->kind == ManifoldKind::Euclidean) {
    if (sc.set.kind != SetSpec::Kind::BallUnion)
      throw error(errc::config_error,
                  "scenario '" + sc.name + "' needs an explicit sampler box for an expression set "
                  "on Euclidean space");
    std::vector<std::pair<double, double>> box(static_cast<std::size_t>(n), {1e300, -1e300});
    for (std::size_t i = 0; i < sc.set.centers.size(); ++i)
      for (int d = 0; d < n; ++d) {
        auto& [lo, hi] = box[static_cast<std::size_t>(d)];
        lo = std::min(lo, sc.set.centers[i][static_cast<std::size_t>(d)] - sc.set.radii[i]);
        hi = std::max(hi, sc.set.centers[i][static_cast<std::size_t>(d)] + sc.set.radii[i]);
      }
    return box;
  }
  // bounded charts: shrink slightly off the boundary
  std::vector<std::pair<double, double>> box;
  const auto bounds = sc.manifold->chart_bounds.empty()
                          ? std::vector<std::pair<double, double>>(static_cast<std::size_t>(n), {-1.0, 1.0})
                          : sc.manifold->chart_bounds;
  for (const auto& [lo, hi] : bounds) {
    const double pad = 1e-3 * (hi - lo);
    box.emplace_back(lo + pad, hi - pad);
  }
  return box;
}

/// Draw one point of S using the scenario's rejection sampler.
inline Point sample_point(const InvexityScenario& sc, Rng& rng,
                          const std::vector<std::pair<double, double>>& box) {
  const int n = sc.manifold->dim;
  for (int attempt = 0; attempt < sc.sampler.max_rejects; ++attempt) {
    Vec x(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
      const auto& [lo, hi] = box[static_cast<std::size_t>(d)];
      x[static_cast<std::size_t>(d)] = rng.uniform(lo, hi);
    }
    if (!sc.manifold->in_chart(x, sc.tol.boundary_eps)) continue;
    const Point p(sc.manifold, x, sc.tol.boundary_eps);
    if (member(sc, p)) return p;
  }
  throw error(errc::empty_set, "scenario '" + sc.name + "': no point of S found after " +
                                   std::to_string(sc.sampler.max_rejects) + " rejection attempts");
}

/// Deterministic pair for sample index i, independent of all other indices.
inline std::pair<Point, Point> sample_pair(const InvexityScenario& sc, std::int64_t index,
                                           const std::vector<std::pair<double, double>>& box) {
  Rng rng = Rng::substream(sc.sampler.seed, static_cast<std::uint64_t>(index));
  Point x = sample_point(sc, rng, box);
  Point y = sample_point(sc, rng, box);
  return {std::move(x), std::move(y)};
}

inline std::vector<double> t_grid(int T) {
  if (T < 2) throw error(errc::config_error, "t-grid needs at least 2 points");
  std::vector<double> ts(static_cast<std::size_t>(T));
  for (int k = 0; k < T; ++k) ts[static_cast<std::size_t>(k)] = static_cast<double>(k) / (T - 1);
  return ts;
}

// ---------------------------------------------------------------------------
// Scenario function evaluation
// ---------------------------------------------------------------------------

inline const Expr& scenario_function(const InvexityScenario& sc, const std::string& fname) {
  const auto it = sc.functions.find(fname);
  if (it == sc.functions.end())
    throw error(errc::config_error, "scenario '" + sc.name + "' has no function '" + fname + "'");
  return it->second;
}

inline double eval_function(const InvexityScenario& sc, const Expr& f, const Point& p) {
  Bindings b;
  b.point("x", p).point("a", p).point("p", p);
  return eval_scalar(f, b, sc.manifold);
}

inline double eval_function(const InvexityScenario& sc, const std::string& fname, const Point& p) {
  return eval_function(sc, scenario_function(sc, fname), p);
}

/// Bivariate evaluation, F(p, q); the first argument is visible as p/x/a,
/// the second as q/y/b.
inline double eval_function2(const InvexityScenario& sc, const Expr& f, const Point& p, const Point& q) {
  Bindings b;
  b.point("p", p).point("x", p).point("a", p).point("q", q).point("y", q).point("b", q);
  return eval_scalar(f, b, sc.manifold);
}

// ---------------------------------------------------------------------------
// Derived scenarios
// ---------------------------------------------------------------------------

/// Lower section S_lambda = {x in S : f(x) <= lambda}; everything else shared.
inline InvexityScenario lower_section(const InvexityScenario& sc, const std::string& fname,
                                      double lambda) {
  InvexityScenario out = sc;
  out.name = sc.name + " | " + fname + " <= " + format_double(lambda);
  out.set.sections.push_back(SetSpec::Section{scenario_function(sc, fname), lambda});
  return out;
}

}  // namespace geovex
