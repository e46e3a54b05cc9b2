#include <catch2/catch_amalgamated.hpp>

#include "geovex/engine/checks.hpp"
#include "geovex/harness/library.hpp"

using namespace geovex;

TEST_CASE("pair sampling is deterministic and counter-indexed") {
  const InvexityScenario sc = builtin_scenario("euclidean-canonical");
  const auto box = sampling_box(sc);
  const auto [x1, y1] = sample_pair(sc, 7, box);
  const auto [x2, y2] = sample_pair(sc, 7, box);
  CHECK(max_abs_diff(x1.x, x2.x) == 0.0);
  CHECK(max_abs_diff(y1.x, y2.x) == 0.0);

  const auto [x3, y3] = sample_pair(sc, 8, box);
  CHECK(max_abs_diff(x1.x, x3.x) > 0.0);

  // every sampled point lies in the set
  for (int i = 0; i < 50; ++i) {
    const auto [x, y] = sample_pair(sc, i, box);
    CHECK(membership_deficit(sc, x) == 0.0);
    CHECK(membership_deficit(sc, y) == 0.0);
  }
}

TEST_CASE("the curve parameter grid covers both endpoints") {
  const auto g = t_grid(33);
  REQUIRE(g.size() == 33);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[16] == 0.5);  // odd grid contains the midpoint
  for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);
}

TEST_CASE("canonical scenarios satisfy every predicate") {
  for (const char* name : {"euclidean-canonical", "hyperbolic-canonical"}) {
    InvexityScenario sc = builtin_scenario(name);
    sc.sampler.pairs = 60;  // keep the unit test quick
    INFO(name);
    CHECK(check_invex_set(sc).pass());
    CHECK(check_property_P_sampled(sc).pass());
    CHECK(check_condition_C_sampled(sc).pass());
    for (const auto& [fname, expr] : sc.functions) {
      INFO(fname);
      const bool convex_like = fname.rfind("neg_", 0) != 0;  // only neg_sqnorm is concave
      CHECK(check_preinvex(sc, fname).pass() == convex_like);
      CHECK(check_invex_function(sc, fname).pass() == convex_like);
    }
  }
}

TEST_CASE("a concave function fails preinvexity with a replayable witness") {
  InvexityScenario sc = builtin_scenario("euclidean-concave");
  sc.sampler.pairs = 40;
  const CheckReport rep = check_preinvex(sc, "neg_sqnorm");
  CHECK_FALSE(rep.pass());
  REQUIRE_FALSE(rep.witnesses.empty());
  CHECK(rep.violation_count > 0);
  CHECK(static_cast<int>(rep.witnesses.size()) <= CheckReport::max_witnesses);

  for (const auto& w : rep.witnesses) {
    const ReplayResult r = replay_witness(sc, w);
    CHECK(r.violated);
    CHECK(r.slack == Catch::Approx(w.slack).margin(1e-12));
  }
}

TEST_CASE("an analytic witness reproduces its exact slack") {
  // f(z) = -z^2 on the interval: x = 1, y = -1, t = 1/2 gives
  // f(gamma(1/2)) = f(0) = 0 against the chord value -1, slack exactly 1.
  const InvexityScenario sc = builtin_scenario("euclidean-battery");
  ViolationWitness w;
  w.predicate = "preinvex:neg_sqnorm";
  w.x = {1.0};
  w.y = {-1.0};
  w.t = 0.5;
  const ReplayResult r = replay_witness(sc, w);
  CHECK(r.violated);
  CHECK(r.slack == Catch::Approx(1.0).margin(1e-12));
  CHECK(r.lhs == Catch::Approx(0.0).margin(1e-15));
  CHECK(r.rhs == Catch::Approx(-1.0).margin(1e-15));
}

TEST_CASE("replaying a satisfied configuration reports no violation") {
  const InvexityScenario sc = builtin_scenario("euclidean-canonical");
  ViolationWitness w;
  w.predicate = "preinvex:sqnorm";
  w.x = {1.0, 0.0};
  w.y = {0.0, 1.0};
  w.t = 0.5;
  const ReplayResult r = replay_witness(sc, w);
  CHECK_FALSE(r.violated);
  CHECK(r.slack < 0.0);  // strictly inside the inequality
}

TEST_CASE("the family is invariant under (c alpha, eta / c)") {
  // Scaling alpha by 2 while halving eta leaves every geodesic unchanged,
  // so verdicts and slacks agree to machine precision.
  InvexityScenario base = builtin_scenario("euclidean-canonical");
  base.sampler.pairs = 40;
  InvexityScenario scaled_sc = builtin_scenario("euclidean-scaled-eta");
  scaled_sc.sampler.pairs = 40;

  const CheckReport a = check_preinvex(base, "sqnorm");
  const CheckReport b = check_preinvex(scaled_sc, "sqnorm");
  CHECK(a.pass());
  CHECK(b.pass());
  CHECK(a.max_slack == Catch::Approx(b.max_slack).margin(1e-12));
}

TEST_CASE("the invex-set check reports curve exits with their deficit") {
  InvexityScenario sc = builtin_scenario("two-ball-global-eta");
  sc.sampler.pairs = 120;
  const CheckReport rep = check_invex_set(sc);
  CHECK_FALSE(rep.pass());
  REQUIRE_FALSE(rep.witnesses.empty());
  const ViolationWitness& w = rep.witnesses.front();
  CHECK(w.slack > 0.0);
  CHECK_FALSE(w.curve_point.empty());
  // the offending curve point sits strictly between the balls
  CHECK(std::abs(w.curve_point[0]) < 0.5);

  const ReplayResult r = replay_witness(sc, w);
  CHECK(r.violated);
  CHECK(r.slack == Catch::Approx(w.slack).margin(1e-10));
}

TEST_CASE("condition C holds canonically and measures transport deviations") {
  InvexityScenario eu = builtin_scenario("euclidean-canonical");
  eu.sampler.pairs = 30;
  const CheckReport a = check_condition_C_sampled(eu);
  CHECK(a.pass());
  CHECK(a.max_slack <= 1e-12);  // euclidean geometry satisfies it exactly

  InvexityScenario hy = builtin_scenario("hyperbolic-canonical");
  hy.sampler.pairs = 30;
  const CheckReport b = check_condition_C_sampled(hy);
  CHECK(b.pass());
  CHECK(b.max_slack <= 1e-6);
}

TEST_CASE("lower sections derive a restricted scenario") {
  const InvexityScenario sc = builtin_scenario("euclidean-canonical");
  const InvexityScenario sec = lower_section(sc, "sqnorm", 1.0);
  CHECK(sec.name.find("sqnorm") != std::string::npos);
  REQUIRE(sec.set.sections.size() == 1);

  const Point inside(sc.manifold, Vec{0.5, 0.5});
  const Point outside(sc.manifold, Vec{1.2, 0.8});
  CHECK(membership_deficit(sec, inside) == 0.0);
  CHECK(membership_deficit(sec, outside) > 0.0);

  // the sublevel set of a preinvex function is an invex set
  InvexityScenario sec2 = sec;
  sec2.sampler.pairs = 60;
  CHECK(check_invex_set(sec2).pass());
}

TEST_CASE("predicates route by name and validate their inputs") {
  const auto names = predicate_names();
  CHECK(names.size() == 5);
  InvexityScenario sc = builtin_scenario("euclidean-canonical");
  sc.sampler.pairs = 10;
  for (const auto& p : names) CHECK_NOTHROW(run_predicate(sc, p, p == "invex-set" ? "" : "sqnorm"));

  CHECK_THROWS_AS(run_predicate(sc, "nope", ""), error);
  // several functions and no name to pick one
  CHECK_THROWS_AS(run_predicate(sc, "preinvex", ""), error);
  // unknown function name
  CHECK_THROWS_AS(run_predicate(sc, "preinvex", "missing"), error);
}

TEST_CASE("scalar-field checks accept arbitrary callables") {
  InvexityScenario sc = builtin_scenario("euclidean-canonical");
  sc.sampler.pairs = 40;
  const ScalarField f = [](const Point& p) { return 3.0 * dot(p.x, p.x) + 1.0; };
  const CheckReport rep = check_preinvex_field(sc, f, "preinvex:custom-field");
  CHECK(rep.pass());
  CHECK(rep.predicate == "preinvex:custom-field");
}
