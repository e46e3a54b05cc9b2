#pragma once

#include <chrono>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "geovex/engine/report.hpp"
#include "geovex/engine/scenario.hpp"
#include "geovex/geometry/calculus.hpp"
#include "geovex/geometry/geodesic.hpp"
#include "geovex/geometry/transport.hpp"

namespace geovex {

namespace detail {

class Stopwatch {
public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

private:
  std::chrono::steady_clock::time_point start_;
};

inline double max_abs_diff(const Vec& a, const Vec& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace detail

/// View a named scenario function as a scalar field. The scenario and
/// expression must outlive the returned field.
inline ScalarField function_field(const InvexityScenario& sc, const Expr& f) {
  const InvexityScenario* scp = &sc;
  const Expr* fp = &f;
  return [scp, fp](const Point& p) { return eval_function(*scp, *fp, p); };
}

// ---------------------------------------------------------------------------
// The family geodesic of Def 3.1-style scenarios
// ---------------------------------------------------------------------------

/// gamma_{E(x),E(y)}: starts at E(y) with velocity alpha(E(x),E(y)) *
/// eta(E(x),E(y)).
inline GeodesicHandle family_geodesic(const InvexityScenario& sc, const Point& x, const Point& y) {
  const Point ex = eval_E(sc.E, x, sc.tol);
  const Point ey = eval_E(sc.E, y, sc.tol);
  const double a = eval_alpha(sc.alpha, ex, ey);
  const TangentVector dir = eval_eta(sc.eta, ex, ey);
  return GeodesicHandle(ey, scaled(dir.v, a), sc.tol);
}

// ---------------------------------------------------------------------------
// Per-sample slack primitives (shared by checks, search, and replay)
// ---------------------------------------------------------------------------

/// How far gamma_{E(x),E(y)}(t) lies outside S (0 when inside).
inline double invex_set_deficit(const InvexityScenario& sc, const Point& x, const Point& y, double t,
                                Vec* curve_point = nullptr) {
  const GeodesicHandle geo = family_geodesic(sc, x, y);
  const Point p = geo.eval(t);
  if (curve_point) *curve_point = p.x;
  if (member(sc, p)) return 0.0;
  return membership_deficit(sc, p);
}

/// f(gamma(t)) - [t f(E(x)) + (1-t) f(E(y))]; positive slack violates
/// preinvexity.
inline double preinvex_slack(const InvexityScenario& sc, const ScalarField& f, const Point& x,
                             const Point& y, double t, double* lhs_out = nullptr,
                             double* rhs_out = nullptr, Vec* curve_point = nullptr) {
  const Point ex = eval_E(sc.E, x, sc.tol);
  const Point ey = eval_E(sc.E, y, sc.tol);
  const GeodesicHandle geo = family_geodesic(sc, x, y);
  const Point p = geo.eval(t);
  const double lhs = f(p);
  const double rhs = t * f(ex) + (1.0 - t) * f(ey);
  if (lhs_out) *lhs_out = lhs;
  if (rhs_out) *rhs_out = rhs;
  if (curve_point) *curve_point = p.x;
  return lhs - rhs;
}

inline double preinvex_slack(const InvexityScenario& sc, const Expr& f, const Point& x, const Point& y,
                             double t, double* lhs_out = nullptr, double* rhs_out = nullptr,
                             Vec* curve_point = nullptr) {
  return preinvex_slack(sc, function_field(sc, f), x, y, t, lhs_out, rhs_out, curve_point);
}

/// df_{E(y)}(alpha eta) - [f(E(x)) - f(E(y))]; positive slack violates
/// invexity of f.
inline double invex_function_slack(const InvexityScenario& sc, const ScalarField& f, const Point& x,
                                   const Point& y, double* lhs_out = nullptr,
                                   double* rhs_out = nullptr) {
  const Point ex = eval_E(sc.E, x, sc.tol);
  const Point ey = eval_E(sc.E, y, sc.tol);
  const double a = eval_alpha(sc.alpha, ex, ey);
  const TangentVector dir = eval_eta(sc.eta, ex, ey);
  const double lhs = f(ex) - f(ey);
  const double rhs = differential(f, TangentVector(ey, scaled(dir.v, a)), sc.tol);
  if (lhs_out) *lhs_out = lhs;
  if (rhs_out) *rhs_out = rhs;
  return rhs - lhs;
}

inline double invex_function_slack(const InvexityScenario& sc, const Expr& f, const Point& x,
                                   const Point& y, double* lhs_out = nullptr,
                                   double* rhs_out = nullptr) {
  return invex_function_slack(sc, function_field(sc, f), x, y, lhs_out, rhs_out);
}

// ---------------------------------------------------------------------------
// Aggregated checks
// ---------------------------------------------------------------------------

inline CheckReport check_invex_set(const InvexityScenario& sc) {
  detail::Stopwatch clock;
  CheckReport rep;
  rep.predicate = "invex-set";
  rep.scenario = sc.name;
  rep.tol = sc.tol;
  const auto box = sampling_box(sc);
  const auto ts = t_grid(sc.sampler.t_grid);
  for (int i = 0; i < sc.sampler.pairs; ++i) {
    const auto& [x, y] = sample_pair(sc, i, box);
    try {
      const GeodesicHandle geo = family_geodesic(sc, x, y);
      for (double t : ts) {
        ++rep.samples;
        const Point p = geo.eval(t);
        const bool in = member(sc, p);
        const double deficit = in ? 0.0 : membership_deficit(sc, p);
        rep.observe_slack(deficit);
        if (!in) {
          ViolationWitness w;
          w.predicate = rep.predicate;
          w.x = x.x;
          w.y = y.x;
          w.t = t;
          w.slack = deficit;
          w.curve_point = p.x;
          w.detail = "curve point leaves S";
          rep.record(w);
        }
      }
    } catch (const error& e) {
      if (e.code() != errc::domain_exit) throw;
      ++rep.samples;
      ViolationWitness w;
      w.predicate = rep.predicate;
      w.x = x.x;
      w.y = y.x;
      w.t = 0.0;
      w.slack = 0.0;
      w.detail = e.what();
      rep.record(w);
    }
  }
  rep.wall_seconds = clock.seconds();
  return rep;
}

/// Preinvexity of an arbitrary scalar field; `extra_tol` widens the slack
/// tolerance (finite surrogates), and `approximate` marks the report.
inline CheckReport check_preinvex_field(const InvexityScenario& sc, const ScalarField& f,
                                        const std::string& label, double extra_tol = 0.0,
                                        bool approximate = false) {
  detail::Stopwatch clock;
  CheckReport rep;
  rep.predicate = label;
  rep.scenario = sc.name;
  rep.tol = sc.tol;
  rep.approximate = approximate;
  const double tol = sc.tol.tol_ineq + extra_tol;
  const auto box = sampling_box(sc);
  const auto ts = t_grid(sc.sampler.t_grid);
  for (int i = 0; i < sc.sampler.pairs; ++i) {
    const auto& [x, y] = sample_pair(sc, i, box);
    for (double t : ts) {
      ++rep.samples;
      double lhs, rhs;
      Vec cp;
      const double slack = preinvex_slack(sc, f, x, y, t, &lhs, &rhs, &cp);
      rep.observe_slack(slack);
      if (slack > tol) {
        ViolationWitness w;
        w.predicate = rep.predicate;
        w.x = x.x;
        w.y = y.x;
        w.t = t;
        w.lhs = lhs;
        w.rhs = rhs;
        w.slack = slack;
        w.curve_point = cp;
        w.detail = "f(gamma(t)) exceeds the chord bound";
        rep.record(w);
      }
    }
  }
  rep.wall_seconds = clock.seconds();
  return rep;
}

inline CheckReport check_preinvex(const InvexityScenario& sc, const std::string& fname) {
  const Expr& f = scenario_function(sc, fname);
  return check_preinvex_field(sc, function_field(sc, f), "preinvex:" + fname);
}

inline CheckReport check_invex_function(const InvexityScenario& sc, const std::string& fname) {
  detail::Stopwatch clock;
  CheckReport rep;
  rep.predicate = "invex-function:" + fname;
  rep.scenario = sc.name;
  rep.tol = sc.tol;
  const Expr& f = scenario_function(sc, fname);
  const ScalarField field = function_field(sc, f);
  const auto box = sampling_box(sc);
  for (int i = 0; i < sc.sampler.pairs; ++i) {
    const auto& [x, y] = sample_pair(sc, i, box);
    ++rep.samples;
    double lhs, rhs;
    const double slack = invex_function_slack(sc, field, x, y, &lhs, &rhs);
    rep.observe_slack(slack);
    // finite differences sit in the chain, so the FD tolerance governs
    if (slack > sc.tol.tol_ineq_fd) {
      ViolationWitness w;
      w.predicate = rep.predicate;
      w.x = x.x;
      w.y = y.x;
      w.t = 0.0;
      w.lhs = lhs;
      w.rhs = rhs;
      w.slack = slack;
      w.detail = "df_{E(y)}(alpha eta) exceeds f(E(x)) - f(E(y))";
      rep.record(w);
    }
  }
  rep.wall_seconds = clock.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// Property (P) and Condition (C)
// ---------------------------------------------------------------------------

namespace detail {

inline void property_P_into(const InvexityScenario& sc, const Point& x, const Point& y,
                            CheckReport& rep) {
  const GeodesicHandle geo = family_geodesic(sc, x, y);
  const auto grid = t_grid(sc.sampler.t_grid);
  for (double s : grid) {
    const Point gs = geo.eval(s);
    const Vec vel = geo.velocity_components(s);
    for (double t : grid) {
      ++rep.samples;
      const Point gt = geo.eval(t);
      const double a = eval_alpha(sc.alpha, gt, gs);
      const TangentVector dir = eval_eta(sc.eta, gt, gs);
      const Vec lhs = scaled(vel, t - s);
      const Vec rhs = scaled(dir.v, a);
      const double dev = max_abs_diff(lhs, rhs);
      rep.observe_slack(dev);
      if (dev > sc.tol.tol_geo) {
        ViolationWitness w;
        w.predicate = rep.predicate;
        w.x = x.x;
        w.y = y.x;
        w.t = t;
        w.s = s;
        w.has_s = true;
        w.lhs = norm(lhs);
        w.rhs = norm(rhs);
        w.slack = dev;
        w.curve_point = gs.x;
        w.detail = "(t-s) gamma'(s) differs from alpha(gamma(t),gamma(s)) eta(gamma(t),gamma(s))";
        rep.record(w);
      }
    }
  }
}

inline void condition_C_into(const InvexityScenario& sc, const Point& x, const Point& y,
                             CheckReport& rep) {
  const Point ex = eval_E(sc.E, x, sc.tol);
  const Point ey = eval_E(sc.E, y, sc.tol);
  const GeodesicHandle geo = family_geodesic(sc, x, y);
  const Vec v0 = geo.velocity_components(0.0);  // alpha(E(x),E(y)) eta(E(x),E(y)) at E(y)
  const auto grid = t_grid(sc.sampler.t_grid);
  for (double s : grid) {
    const Point gs = geo.eval(s);
    int which = 0;
    for (const auto& [endpoint, factor] : {std::make_pair(ey, -s), std::make_pair(ex, 1.0 - s)}) {
      ++which;
      ++rep.samples;
      const double a = eval_alpha(sc.alpha, endpoint, gs);
      const TangentVector dir = eval_eta(sc.eta, endpoint, gs);
      const Vec back = parallel_transport(geo, s, 0.0, TangentVector(gs, scaled(dir.v, a))).v;
      const Vec want = scaled(v0, factor);
      const double dev = max_abs_diff(back, want);
      rep.observe_slack(dev);
      if (dev > sc.tol.tol_cond) {
        ViolationWitness w;
        w.predicate = rep.predicate;
        w.x = x.x;
        w.y = y.x;
        w.s = s;
        w.t = 0.0;
        w.has_s = true;
        w.lhs = norm(back);
        w.rhs = norm(want);
        w.slack = dev;
        w.curve_point = gs.x;
        w.detail = which == 1
                       ? "transported alpha eta(E(y),gamma(s)) differs from -s alpha eta(E(x),E(y))"
                       : "transported alpha eta(E(x),gamma(s)) differs from (1-s) alpha eta(E(x),E(y))";
        rep.record(w);
      }
    }
  }
}

}  // namespace detail

/// Both displayed transport identities of Condition (C) on one pair.
inline CheckReport check_condition_C(const InvexityScenario& sc, const Point& x, const Point& y) {
  detail::Stopwatch clock;
  CheckReport rep;
  rep.predicate = "condition-C";
  rep.scenario = sc.name;
  rep.tol = sc.tol;
  detail::condition_C_into(sc, x, y, rep);
  rep.wall_seconds = clock.seconds();
  return rep;
}

/// Property (P) on the full (s,t) grid for one pair.
inline CheckReport check_property_P(const InvexityScenario& sc, const Point& x, const Point& y) {
  detail::Stopwatch clock;
  CheckReport rep;
  rep.predicate = "property-P";
  rep.scenario = sc.name;
  rep.tol = sc.tol;
  detail::property_P_into(sc, x, y, rep);
  rep.wall_seconds = clock.seconds();
  return rep;
}

/// Pair count for the quadratic-cost grid checks.
inline int grid_check_pairs(const InvexityScenario& sc) { return std::min(sc.sampler.pairs, 25); }

inline CheckReport check_property_P_sampled(const InvexityScenario& sc) {
  detail::Stopwatch clock;
  CheckReport rep;
  rep.predicate = "property-P";
  rep.scenario = sc.name;
  rep.tol = sc.tol;
  const auto box = sampling_box(sc);
  for (int i = 0; i < grid_check_pairs(sc); ++i) {
    const auto& [x, y] = sample_pair(sc, i, box);
    detail::property_P_into(sc, x, y, rep);
  }
  rep.wall_seconds = clock.seconds();
  return rep;
}

inline CheckReport check_condition_C_sampled(const InvexityScenario& sc) {
  detail::Stopwatch clock;
  CheckReport rep;
  rep.predicate = "condition-C";
  rep.scenario = sc.name;
  rep.tol = sc.tol;
  const auto box = sampling_box(sc);
  for (int i = 0; i < grid_check_pairs(sc); ++i) {
    const auto& [x, y] = sample_pair(sc, i, box);
    detail::condition_C_into(sc, x, y, rep);
  }
  rep.wall_seconds = clock.seconds();
  return rep;
}

// ---------------------------------------------------------------------------
// Witness replay
// ---------------------------------------------------------------------------

struct ReplayResult {
  bool violated = false;
  double slack = 0.0;
  double lhs = 0.0, rhs = 0.0;
};

/// Re-evaluate a witness against its predicate; a sound witness reproduces
/// slack beyond the tolerance in force.
inline ReplayResult replay_witness(const InvexityScenario& sc, const ViolationWitness& w) {
  const Point x(sc.manifold, w.x);
  const Point y(sc.manifold, w.y);
  ReplayResult r;
  const std::string& pred = w.predicate;
  const auto after_colon = [&pred]() { return pred.substr(pred.find(':') + 1); };
  if (pred == "invex-set") {
    try {
      const GeodesicHandle geo = family_geodesic(sc, x, y);
      const Point p = geo.eval(w.t);
      r.violated = !member(sc, p);
      r.slack = membership_deficit(sc, p);
    } catch (const error& e) {
      if (e.code() != errc::domain_exit) throw;
      r.violated = true;  // the curve does not even stay in the chart
      r.slack = std::numeric_limits<double>::infinity();
    }
    return r;
  }
  if (pred.rfind("preinvex:", 0) == 0) {
    const Expr& f = scenario_function(sc, after_colon());
    r.slack = preinvex_slack(sc, f, x, y, w.t, &r.lhs, &r.rhs);
    r.violated = r.slack > sc.tol.tol_ineq;
    return r;
  }
  if (pred.rfind("invex-function:", 0) == 0) {
    const Expr& f = scenario_function(sc, after_colon());
    r.slack = invex_function_slack(sc, f, x, y, &r.lhs, &r.rhs);
    r.violated = r.slack > sc.tol.tol_ineq_fd;
    return r;
  }
  if (pred == "property-P") {
    const GeodesicHandle geo = family_geodesic(sc, x, y);
    const Point gs = geo.eval(w.s);
    const Point gt = geo.eval(w.t);
    const double a = eval_alpha(sc.alpha, gt, gs);
    const TangentVector dir = eval_eta(sc.eta, gt, gs);
    r.slack = detail::max_abs_diff(scaled(geo.velocity_components(w.s), w.t - w.s), scaled(dir.v, a));
    r.violated = r.slack > sc.tol.tol_geo;
    return r;
  }
  if (pred == "condition-C") {
    const GeodesicHandle geo = family_geodesic(sc, x, y);
    const Point ex = eval_E(sc.E, x, sc.tol);
    const Point ey = eval_E(sc.E, y, sc.tol);
    const Point gs = geo.eval(w.s);
    double worst = 0.0;
    for (const auto& [endpoint, factor] :
         {std::make_pair(ey, -w.s), std::make_pair(ex, 1.0 - w.s)}) {
      const double a = eval_alpha(sc.alpha, endpoint, gs);
      const TangentVector dir = eval_eta(sc.eta, endpoint, gs);
      const Vec back = parallel_transport(geo, w.s, 0.0, TangentVector(gs, scaled(dir.v, a))).v;
      worst = std::max(worst, detail::max_abs_diff(back, scaled(geo.velocity_components(0.0), factor)));
    }
    r.slack = worst;
    r.violated = worst > sc.tol.tol_cond;
    return r;
  }
  throw error(errc::config_error, "unknown predicate '" + pred + "'");
}

// ---------------------------------------------------------------------------
// Predicate dispatch
// ---------------------------------------------------------------------------

inline const std::vector<std::string>& predicate_names() {
  static const std::vector<std::string> names = {"invex-set", "preinvex", "invex-function",
                                                 "property-P", "condition-C"};
  return names;
}

/// Resolve the function a predicate applies to: an explicit name, or the
/// scenario's single function when unambiguous.
inline std::string resolve_function(const InvexityScenario& sc, const std::string& fname) {
  if (!fname.empty()) {
    scenario_function(sc, fname);  // existence check
    return fname;
  }
  if (sc.functions.size() == 1) return sc.functions.begin()->first;
  throw error(errc::config_error, "scenario '" + sc.name + "' has " +
                                      std::to_string(sc.functions.size()) +
                                      " functions; specify one by name");
}

inline CheckReport run_predicate(const InvexityScenario& sc, const std::string& predicate,
                                 const std::string& fname = "") {
  if (predicate == "invex-set") return check_invex_set(sc);
  if (predicate == "preinvex") return check_preinvex(sc, resolve_function(sc, fname));
  if (predicate == "invex-function") return check_invex_function(sc, resolve_function(sc, fname));
  if (predicate == "property-P") return check_property_P_sampled(sc);
  if (predicate == "condition-C") return check_condition_C_sampled(sc);
  throw error(errc::config_error,
              "unknown predicate '" + predicate + "' (expected invex-set, preinvex, invex-function, "
              "property-P, or condition-C)");
}

}  // namespace geovex
