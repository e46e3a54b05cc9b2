#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "geovex/dsl/parser.hpp"
#include "geovex/harness/theorems.hpp"

namespace geovex {

// ---------------------------------------------------------------------------
// Hyperbolic ball geometry helpers (for tight sampling boxes)
// ---------------------------------------------------------------------------

/// Euclidean center and radius of the hyperbolic metric ball B(center,
/// radius) inside the Poincare ball.
inline std::pair<Vec, double> hyperbolic_ball_euclidean(const Vec& center, double radius) {
  const double c2 = dot(center, center);
  const double t = std::tanh(0.5 * radius);
  const double denom = 1.0 - t * t * c2;
  return {scaled(center, (1.0 - t * t) / denom), t * (1.0 - c2) / denom};
}

/// Bounding box of a union of hyperbolic balls, in chart coordinates.
inline std::vector<std::pair<double, double>> hyperbolic_balls_box(const std::vector<Vec>& centers,
                                                                   const std::vector<double>& radii) {
  if (centers.empty() || centers.size() != radii.size())
    throw error(errc::config_error, "ball box needs matching nonempty centers and radii");
  const std::size_t n = centers.front().size();
  std::vector<std::pair<double, double>> box(n, {1e300, -1e300});
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const auto [ce, re] = hyperbolic_ball_euclidean(centers[i], radii[i]);
    for (std::size_t d = 0; d < n; ++d) {
      box[d].first = std::min(box[d].first, ce[d] - re);
      box[d].second = std::max(box[d].second, ce[d] + re);
    }
  }
  return box;
}

// ---------------------------------------------------------------------------
// The two-ball construction on the Poincare ball
// ---------------------------------------------------------------------------

/// S = B(x0, r1) u B(y0, r2) with the piecewise eta (log map inside a common
/// ball, zero across) and E projecting onto the sphere of radius r1/2 about
/// x0. Preconditions: 0 < r1, r2 < d(x0, y0)/2 and the balls are disjoint.
inline InvexityScenario build_example_31(const Point& x0, const Point& y0, double r1, double r2,
                                         AlphaDef alpha = AlphaDef::constant(1.0)) {
  if (x0.manifold->kind != ManifoldKind::PoincareBall)
    throw error(errc::construction_error, "the two-ball construction lives on the Poincare ball");
  if (!same_manifold(x0.manifold, y0.manifold))
    throw error(errc::construction_error, "x0 and y0 must lie on the same manifold");
  const double d = distance(x0, y0);
  const auto fail = [](const std::string& inequality, const std::string& values) {
    throw error(errc::construction_error,
                "precondition " + inequality + " violated (" + values + ")");
  };
  if (!(r1 > 0.0)) fail("0 < r1", "r1 = " + format_double(r1));
  if (!(r2 > 0.0)) fail("0 < r2", "r2 = " + format_double(r2));
  if (!(r1 < 0.5 * d))
    fail("r1 < d(x0,y0)/2", "r1 = " + format_double(r1) + ", d/2 = " + format_double(0.5 * d));
  if (!(r2 < 0.5 * d))
    fail("r2 < d(x0,y0)/2", "r2 = " + format_double(r2) + ", d/2 = " + format_double(0.5 * d));
  if (!(d >= r1 + r2))  // implied by the radius bounds; still verified
    fail("B(x0,r1) and B(y0,r2) disjoint",
         "d = " + format_double(d) + ", r1 + r2 = " + format_double(r1 + r2));

  InvexityScenario sc;
  sc.name = "example31";
  sc.manifold = x0.manifold;
  sc.set = SetSpec::ball_union({x0.x, y0.x}, {r1, r2});
  sc.eta = EtaDef::piecewise_balls(x0.x, r1, y0.x, r2);
  sc.E = EMapDef::geodesic_projection(x0.x, 0.5 * r1);
  sc.alpha = std::move(alpha);
  sc.sampler.box = hyperbolic_balls_box({x0.x, y0.x}, {r1, r2});
  return sc;
}

// ---------------------------------------------------------------------------
// Built-in scenario library
// ---------------------------------------------------------------------------

namespace detail {

inline InvexityScenario euclidean_canonical() {
  InvexityScenario sc;
  sc.name = "euclidean-canonical";
  sc.manifold = ManifoldSpec::euclidean(2);
  sc.set = SetSpec::ball_union({{0.0, 0.0}}, {2.0});
  sc.functions.emplace("sqnorm", parse("x[0]^2 + x[1]^2"));
  sc.functions.emplace("linear", parse("x[0] + 2*x[1]"));
  sc.functions.emplace("abs1", parse("max(x[0], -x[0])"));
  sc.functions.emplace("lin_pos", parse("x[0]"));
  sc.functions.emplace("lin_neg", parse("-x[0]"));
  return sc;
}

inline InvexityScenario euclidean_battery() {
  InvexityScenario sc;
  sc.name = "euclidean-battery";
  sc.manifold = ManifoldSpec::euclidean(1);
  sc.set = SetSpec::ball_union({{0.0}}, {2.0});
  sc.functions.emplace("sqnorm", parse("x[0]^2"));
  sc.functions.emplace("linear", parse("2*x[0] - 1"));
  sc.functions.emplace("neg_sqnorm", parse("-x[0]^2"));
  sc.functions.emplace("abs1", parse("max(x[0], -x[0])"));
  return sc;
}

inline InvexityScenario euclidean_concave() {
  InvexityScenario sc;
  sc.name = "euclidean-concave";
  sc.manifold = ManifoldSpec::euclidean(2);
  sc.set = SetSpec::ball_union({{0.0, 0.0}}, {2.0});
  sc.functions.emplace("neg_sqnorm", parse("-(x[0]^2 + x[1]^2)"));
  return sc;
}

inline InvexityScenario euclidean_shifted_E() {
  InvexityScenario sc;
  sc.name = "euclidean-shifted-E";
  sc.manifold = ManifoldSpec::euclidean(2);
  sc.set = SetSpec::ball_union({{0.0, 0.0}}, {2.0});
  sc.E = EMapDef::geodesic_projection({0.25, 0.0}, 1.0);
  sc.functions.emplace("sqnorm", parse("x[0]^2 + x[1]^2"));
  return sc;
}

inline InvexityScenario euclidean_scaled_eta() {
  InvexityScenario sc;
  sc.name = "euclidean-scaled-eta";
  sc.manifold = ManifoldSpec::euclidean(2);
  sc.set = SetSpec::ball_union({{0.0, 0.0}}, {2.0});
  sc.alpha = AlphaDef::constant(2.0);
  sc.eta = EtaDef::expression({parse("(x[0] - y[0]) / 2"), parse("(x[1] - y[1]) / 2")});
  sc.functions.emplace("sqnorm", parse("x[0]^2 + x[1]^2"));
  return sc;
}

inline InvexityScenario euclidean_small() {
  InvexityScenario sc;
  sc.name = "euclidean-small";
  sc.manifold = ManifoldSpec::euclidean(2);
  sc.set = SetSpec::ball_union({{0.0, 0.0}}, {0.08});
  sc.functions.emplace("sqnorm", parse("x[0]^2 + x[1]^2"));
  sc.sampler.pairs = 200;
  sc.sampler.t_grid = 17;
  return sc;
}

inline InvexityScenario two_ball_global_eta() {
  InvexityScenario sc;
  sc.name = "two-ball-global-eta";
  sc.manifold = ManifoldSpec::euclidean(2);
  sc.set = SetSpec::ball_union({{-1.0, 0.0}, {1.0, 0.0}}, {0.5, 0.5});
  sc.functions.emplace("sqnorm", parse("x[0]^2 + x[1]^2"));
  return sc;
}

inline InvexityScenario hyperbolic_canonical() {
  InvexityScenario sc;
  sc.name = "hyperbolic-canonical";
  sc.manifold = ManifoldSpec::poincare_ball(2);
  sc.set = SetSpec::ball_union({{0.0, 0.0}}, {1.0});
  sc.functions.emplace("sqd0", parse("sqdist(x, [0, 0])"));
  sc.functions.emplace("sqd_p", parse("sqdist(x, [0.2, 0.1])"));
  sc.sampler.box = hyperbolic_balls_box({{0.0, 0.0}}, {1.0});
  return sc;
}

inline InvexityScenario hyperbolic_shifted_E() {
  InvexityScenario sc;
  sc.name = "hyperbolic-shifted-E";
  sc.manifold = ManifoldSpec::poincare_ball(2);
  sc.set = SetSpec::ball_union({{-0.5, 0.0}}, {0.5});
  sc.E = EMapDef::geodesic_projection({-0.5, 0.0}, 0.25);
  sc.functions.emplace("sqd_anchor", parse("sqdist(x, [-0.5, 0])"));
  sc.sampler.box = hyperbolic_balls_box({{-0.5, 0.0}}, {0.5});
  return sc;
}

inline InvexityScenario hyperbolic_small() {
  InvexityScenario sc;
  sc.name = "hyperbolic-small";
  sc.manifold = ManifoldSpec::poincare_ball(2);
  sc.set = SetSpec::ball_union({{0.0, 0.0}}, {0.08});
  sc.functions.emplace("sqd0", parse("sqdist(x, [0, 0])"));
  sc.sampler.pairs = 200;
  sc.sampler.t_grid = 17;
  sc.sampler.box = hyperbolic_balls_box({{0.0, 0.0}}, {0.08});
  return sc;
}

inline InvexityScenario example31_scenario() {
  const ManifoldPtr ball = ManifoldSpec::poincare_ball(2);
  InvexityScenario sc = build_example_31(Point(ball, {-0.5, 0.0}), Point(ball, {0.5, 0.0}), 0.5, 0.5);
  sc.functions.emplace("sqd_x0", parse("sqdist(x, [-0.5, 0])"));
  return sc;
}

inline InvexityScenario example31_negative() {
  InvexityScenario sc = example31_scenario();
  sc.name = "example31-negative";
  sc.E = EMapDef::identity();
  sc.eta = EtaDef::log_map();
  return sc;
}

}  // namespace detail

inline const std::vector<std::string>& builtin_scenario_names() {
  static const std::vector<std::string> names = {
      "euclidean-canonical", "euclidean-battery",  "euclidean-concave", "euclidean-shifted-E",
      "euclidean-scaled-eta", "euclidean-small",   "two-ball-global-eta",
      "hyperbolic-canonical", "hyperbolic-shifted-E", "hyperbolic-small",
      "example31",           "example31-negative"};
  return names;
}

inline InvexityScenario builtin_scenario(const std::string& name) {
  if (name == "euclidean-canonical") return detail::euclidean_canonical();
  if (name == "euclidean-battery") return detail::euclidean_battery();
  if (name == "euclidean-concave") return detail::euclidean_concave();
  if (name == "euclidean-shifted-E") return detail::euclidean_shifted_E();
  if (name == "euclidean-scaled-eta") return detail::euclidean_scaled_eta();
  if (name == "euclidean-small") return detail::euclidean_small();
  if (name == "two-ball-global-eta") return detail::two_ball_global_eta();
  if (name == "hyperbolic-canonical") return detail::hyperbolic_canonical();
  if (name == "hyperbolic-shifted-E") return detail::hyperbolic_shifted_E();
  if (name == "hyperbolic-small") return detail::hyperbolic_small();
  if (name == "example31") return detail::example31_scenario();
  if (name == "example31-negative") return detail::example31_negative();
  throw error(errc::config_error, "unknown builtin scenario '" + name + "'");
}

// ---------------------------------------------------------------------------
// Built-in theorem suites
// ---------------------------------------------------------------------------

namespace detail {

inline TheoremCase make_case(std::string id, InvexityScenario sc, std::string fname = "") {
  TheoremCase c;
  c.id = std::move(id);
  c.scenario = std::move(sc);
  c.fname = std::move(fname);
  return c;
}

inline TheoremSuite canonical_euclidean_suite() {
  TheoremSuite suite;
  suite.name = "canonical-euclidean";
  {
    TheoremCase c = make_case("P4.1", euclidean_canonical(), "sqnorm");
    c.lambdas = {0.25, 1.0, 4.0};
    suite.cases.push_back(std::move(c));
  }
  suite.cases.push_back(make_case("T4.2", euclidean_canonical(), "sqnorm"));
  suite.cases.push_back(make_case("T4.3", euclidean_canonical(), "sqnorm"));
  {
    TheoremCase c = make_case("T4.4", euclidean_canonical(), "sqnorm");
    c.phi = parse("exp(u)");
    suite.cases.push_back(std::move(c));
  }
  {
    TheoremCase c = make_case("T4.5", euclidean_canonical());
    c.family = {"lin_pos", "lin_neg"};
    suite.cases.push_back(std::move(c));
  }
  return suite;
}

inline TheoremSuite hyperbolic_suite() {
  TheoremSuite suite;
  suite.name = "hyperbolic";
  {
    TheoremCase c = make_case("P4.1", hyperbolic_canonical(), "sqd0");
    c.lambdas = {0.04, 0.16, 0.5};
    suite.cases.push_back(std::move(c));
  }
  suite.cases.push_back(make_case("T4.2", hyperbolic_canonical(), "sqd0"));
  suite.cases.push_back(make_case("T4.3", hyperbolic_canonical(), "sqd0"));
  {
    TheoremCase c = make_case("T4.4", hyperbolic_canonical(), "sqd0");
    c.phi = parse("exp(u)");
    suite.cases.push_back(std::move(c));
  }
  {
    TheoremCase c = make_case("T4.5", hyperbolic_canonical());
    c.family = {"sqd0", "sqd_p"};
    suite.cases.push_back(std::move(c));
  }
  {
    TheoremCase c = make_case("T4.6", hyperbolic_small());
    c.bivariate = parse("sqdist(p, q) + sqdist(q, [0, 0])");
    suite.cases.push_back(std::move(c));
  }
  return suite;
}

inline TheoremSuite full_suite() {
  TheoremSuite suite;
  suite.name = "full";
  for (TheoremSuite part : {canonical_euclidean_suite(), hyperbolic_suite()})
    for (TheoremCase& c : part.cases) suite.cases.push_back(std::move(c));
  {
    TheoremCase c = make_case("P4.1", example31_scenario(), "sqd_x0");
    c.lambdas = {0.1};
    suite.cases.push_back(std::move(c));
  }
  suite.cases.push_back(make_case("T4.2", example31_scenario(), "sqd_x0"));
  {
    TheoremCase c = make_case("T4.6", euclidean_small());
    c.bivariate = parse("sqdist(p, q) + sqdist(q, [0, 0])");
    suite.cases.push_back(std::move(c));
  }
  return suite;
}

}  // namespace detail

inline const std::vector<std::string>& builtin_suite_names() {
  static const std::vector<std::string> names = {"canonical-euclidean", "hyperbolic", "full"};
  return names;
}

inline TheoremSuite builtin_suite(const std::string& name) {
  if (name == "canonical-euclidean") return detail::canonical_euclidean_suite();
  if (name == "hyperbolic") return detail::hyperbolic_suite();
  if (name == "full") return detail::full_suite();
  throw error(errc::config_error, "unknown builtin suite '" + name + "' (expected "
                                  "canonical-euclidean, hyperbolic, or full)");
}

}  // namespace geovex
