#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>

#include "geovex/engine/checks.hpp"

namespace geovex {

/// Limits for the counterexample search; both must be positive.
struct SearchBudget {
  std::int64_t max_samples = 1000;  // candidate (x, y) pairs
  double max_seconds = 30.0;
  std::uint64_t seed = 42;
};

/// What the search actually spent, for reporting.
struct SearchStats {
  std::int64_t samples = 0;
  double wall_seconds = 0.0;
};

namespace detail {

/// Maximize g on [lo, hi] by golden-section search; returns (argmax, max).
inline std::pair<double, double> golden_max(const std::function<double(double)>& g, double lo,
                                            double hi, int iterations = 40) {
  constexpr double inv_phi = 0.6180339887498949;  // (sqrt(5) - 1) / 2
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = g(c), fd = g(d);
  for (int i = 0; i < iterations; ++i) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = g(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = g(d);
    }
  }
  return fc >= fd ? std::make_pair(c, fc) : std::make_pair(d, fd);
}

/// Scan g over the grid, then refine around the best cell by golden-section.
inline std::pair<double, double> grid_then_golden(const std::function<double(double)>& g,
                                                  const std::vector<double>& grid) {
  double best_t = grid.front();
  double best = g(best_t);
  for (std::size_t i = 1; i < grid.size(); ++i) {
    const double v = g(grid[i]);
    if (v > best) {
      best = v;
      best_t = grid[i];
    }
  }
  const double h = grid.size() > 1 ? grid[1] - grid[0] : 1.0;
  const auto [t_ref, v_ref] = golden_max(g, std::max(0.0, best_t - h), std::min(1.0, best_t + h));
  return v_ref > best ? std::make_pair(t_ref, v_ref) : std::make_pair(best_t, best);
}

}  // namespace detail

/// Violation threshold for each predicate under the scenario's tolerances.
inline double predicate_tolerance(const InvexityScenario& sc, const std::string& predicate) {
  if (predicate == "invex-set") return 0.0;
  if (predicate == "preinvex") return sc.tol.tol_ineq;
  if (predicate == "invex-function") return sc.tol.tol_ineq_fd;
  if (predicate == "property-P") return sc.tol.tol_geo;
  if (predicate == "condition-C") return sc.tol.tol_cond;
  throw error(errc::config_error,
              "unknown predicate '" + predicate + "' (expected invex-set, preinvex, invex-function, "
              "property-P, or condition-C)");
}

/// Random restarts over sampled pairs with golden-section refinement of the
/// curve parameter; returns the maximal-slack witness beyond the predicate's
/// tolerance, or nothing within budget.
inline std::optional<ViolationWitness> search_counterexample(const InvexityScenario& sc,
                                                             const std::string& predicate,
                                                             const std::string& fname = "",
                                                             const SearchBudget& budget = {},
                                                             SearchStats* stats = nullptr) {
  if (budget.max_samples <= 0)
    throw error(errc::config_error, "search budget requires a positive sample limit");
  if (!(budget.max_seconds > 0.0))
    throw error(errc::config_error, "search budget requires a positive time limit");
  const double tol = predicate_tolerance(sc, predicate);

  std::string label = predicate;
  const Expr* f = nullptr;
  if (predicate == "preinvex" || predicate == "invex-function") {
    const std::string resolved = resolve_function(sc, fname);
    f = &scenario_function(sc, resolved);
    label += ":" + resolved;
  }

  const auto box = sampling_box(sc);
  const auto grid = t_grid(sc.sampler.t_grid);
  detail::Stopwatch clock;
  std::optional<ViolationWitness> best;

  std::int64_t i = 0;
  for (; i < budget.max_samples; ++i) {
    if (clock.seconds() > budget.max_seconds) break;
    Rng rng = Rng::substream(budget.seed, static_cast<std::uint64_t>(i));
    const Point x = sample_point(sc, rng, box);
    const Point y = sample_point(sc, rng, box);

    ViolationWitness w;
    w.predicate = label;
    w.x = x.x;
    w.y = y.x;

    try {
      if (predicate == "invex-set") {
        const auto [t, slack] = detail::grid_then_golden(
            [&](double t) { return invex_set_deficit(sc, x, y, t); }, grid);
        w.t = t;
        w.slack = slack;
        invex_set_deficit(sc, x, y, t, &w.curve_point);
        w.detail = "curve point leaves S";
      } else if (predicate == "preinvex") {
        const auto [t, slack] = detail::grid_then_golden(
            [&](double t) { return preinvex_slack(sc, *f, x, y, t); }, grid);
        w.t = t;
        w.slack = slack;
        preinvex_slack(sc, *f, x, y, t, &w.lhs, &w.rhs, &w.curve_point);
        w.detail = "f(gamma(t)) exceeds the chord bound";
      } else if (predicate == "invex-function") {
        w.slack = invex_function_slack(sc, *f, x, y, &w.lhs, &w.rhs);
        w.detail = "df_{E(y)}(alpha eta) exceeds f(E(x)) - f(E(y))";
      } else if (predicate == "property-P") {
        // two parameters: grid over s, refined scan over t at the worst s
        double best_slack = -1.0, best_s = 0.0, best_t = 0.0;
        const GeodesicHandle geo = family_geodesic(sc, x, y);
        for (double s : grid) {
          const Point gs = geo.eval(s);
          const Vec vel = geo.velocity_components(s);
          const auto dev = [&](double t) {
            const Point gt = geo.eval(t);
            const double a = eval_alpha(sc.alpha, gt, gs);
            return detail::max_abs_diff(scaled(vel, t - s), scaled(eval_eta(sc.eta, gt, gs).v, a));
          };
          const auto [t, slack] = detail::grid_then_golden(dev, grid);
          if (slack > best_slack) {
            best_slack = slack;
            best_s = s;
            best_t = t;
          }
        }
        w.s = best_s;
        w.t = best_t;
        w.has_s = true;
        w.slack = best_slack;
        w.detail = "(t-s) gamma'(s) differs from alpha(gamma(t),gamma(s)) eta(gamma(t),gamma(s))";
      } else if (predicate == "condition-C") {
        const GeodesicHandle geo = family_geodesic(sc, x, y);
        const Point ex = eval_E(sc.E, x, sc.tol);
        const Point ey = eval_E(sc.E, y, sc.tol);
        const Vec v0 = geo.velocity_components(0.0);
        const auto dev = [&](double s) {
          const Point gs = geo.eval(s);
          double worst = 0.0;
          for (const auto& [endpoint, factor] :
               {std::make_pair(ey, -s), std::make_pair(ex, 1.0 - s)}) {
            const double a = eval_alpha(sc.alpha, endpoint, gs);
            const TangentVector dir = eval_eta(sc.eta, endpoint, gs);
            const Vec back = parallel_transport(geo, s, 0.0, TangentVector(gs, scaled(dir.v, a))).v;
            worst = std::max(worst, detail::max_abs_diff(back, scaled(v0, factor)));
          }
          return worst;
        };
        const auto [s, slack] = detail::grid_then_golden(dev, grid);
        w.s = s;
        w.has_s = true;
        w.slack = slack;
        w.detail = "transport identity deviates at gamma(s)";
      } else {
        throw error(errc::config_error, "unknown predicate '" + predicate + "'");
      }
    } catch (const error& e) {
      if (e.code() != errc::domain_exit) throw;
      // the family curve left the chart: decisive for the set predicate
      if (predicate == "invex-set") {
        w.slack = std::numeric_limits<double>::infinity();
        w.detail = e.what();
        if (!best || w.slack > best->slack) best = w;
      }
      continue;
    }

    if (w.slack > tol && (!best || w.slack > best->slack)) best = w;
  }

  if (stats) {
    stats->samples = i;
    stats->wall_seconds = clock.seconds();
  }
  return best;
}

}  // namespace geovex
