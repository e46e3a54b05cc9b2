#include <catch2/catch_amalgamated.hpp>

#include "geovex/harness/library.hpp"
#include "geovex/harness/search.hpp"
#include "geovex/harness/theorems.hpp"

using namespace geovex;

namespace {

const TheoremReport& find_case(const std::vector<TheoremReport>& reports, const std::string& id) {
  for (const auto& r : reports)
    if (r.id == id) return r;
  FAIL("missing case " + id);
  throw std::logic_error("unreachable");
}

}  // namespace

TEST_CASE("two-ball construction enforces its preconditions by name") {
  const ManifoldPtr m = ManifoldSpec::poincare_ball(2);
  const Point x0(m, Vec{-0.5, 0.0});
  const Point y0(m, Vec{0.5, 0.0});

  CHECK_NOTHROW(build_example_31(x0, y0, 0.5, 0.5));

  const auto expect_named = [&](double r1, double r2, const std::string& needle) {
    try {
      build_example_31(x0, y0, r1, r2);
      FAIL("expected a precondition failure");
    } catch (const error& e) {
      CHECK(e.code() == errc::construction_error);
      CHECK(std::string(e.what()).find(needle) != std::string::npos);
    }
  };
  expect_named(-0.1, 0.5, "0 < r1");
  expect_named(0.5, 0.0, "0 < r2");
  expect_named(5.0, 0.5, "r1 < d(x0,y0)/2");
  expect_named(0.5, 5.0, "r2 < d(x0,y0)/2");

  // non-ball manifolds are rejected outright
  const ManifoldPtr e = ManifoldSpec::euclidean(2);
  CHECK_THROWS_AS(build_example_31(Point(e, Vec{-0.5, 0.0}), Point(e, Vec{0.5, 0.0}), 0.5, 0.5),
                  error);
}

TEST_CASE("the two-ball scenario projects everything to the target sphere") {
  InvexityScenario sc = builtin_scenario("example31");
  const Point anchor(sc.manifold, sc.E.anchor);
  const auto box = sampling_box(sc);
  for (int i = 0; i < 100; ++i) {
    const auto [x, y] = sample_pair(sc, i, box);
    CHECK(distance(anchor, eval_E(sc.E, x)) == Catch::Approx(sc.E.rho).margin(1e-7));
    CHECK(distance(anchor, eval_E(sc.E, y)) == Catch::Approx(sc.E.rho).margin(1e-7));
  }
  // the projection radius is half the left-ball radius
  CHECK(sc.E.rho == Catch::Approx(0.25));
}

TEST_CASE("the two-ball scenario is invex while its naive variant is not") {
  InvexityScenario good = builtin_scenario("example31");
  good.sampler.pairs = 150;
  CHECK(check_invex_set(good).pass());

  InvexityScenario naive = builtin_scenario("example31-negative");
  naive.sampler.pairs = 150;
  const CheckReport rep = check_invex_set(naive);
  CHECK_FALSE(rep.pass());
  REQUIRE_FALSE(rep.witnesses.empty());
  // some witness pairs the two balls (x and y on opposite sides)
  bool cross = false;
  for (const auto& w : rep.witnesses) cross = cross || (w.x[0] * w.y[0] < 0.0);
  CHECK(cross);
}

TEST_CASE("canonical suite passes every case strictly") {
  const std::vector<TheoremReport> reports = run_suite(builtin_suite("canonical-euclidean"));
  REQUIRE(reports.size() == 5);
  for (const auto& r : reports) {
    INFO(r.id << " on " << r.scenario);
    CHECK(r.status == CaseStatus::Pass);
  }
}

TEST_CASE("hyperbolic suite passes with one approximate case") {
  const std::vector<TheoremReport> reports = run_suite(builtin_suite("hyperbolic"));
  REQUIRE(reports.size() == 6);
  int approx = 0;
  for (const auto& r : reports) {
    INFO(r.id << " on " << r.scenario);
    CHECK(r.pass());
    if (r.status == CaseStatus::ApproximatePass) {
      ++approx;
      CHECK(r.id == "T4.6");
    }
  }
  CHECK(approx == 1);
}

TEST_CASE("failed hypotheses convert cases to skips, not failures") {
  // a concave function never enters the implication chain
  TheoremCase c;
  c.id = "T4.2";
  c.scenario = "euclidean-concave";
  c.fname = "neg_sqnorm";
  const TheoremReport r = run_case(c);
  CHECK(r.status == CaseStatus::SkippedHypothesis);

  // a decreasing transform fails the monotonicity hypothesis of composition
  TheoremCase c2;
  c2.id = "T4.4";
  c2.scenario = "euclidean-canonical";
  c2.fname = "sqnorm";
  c2.phi = parse("-u");
  const TheoremReport r2 = run_case(c2);
  CHECK(r2.status == CaseStatus::SkippedHypothesis);

  // while an increasing convex transform passes through
  TheoremCase c3 = c2;
  c3.phi = parse("exp(u)");
  CHECK(run_case(c3).status == CaseStatus::Pass);
}

TEST_CASE("lower sections skip empty levels and verify nonempty ones") {
  TheoremCase c;
  c.id = "P4.1";
  c.scenario = "euclidean-canonical";
  c.fname = "sqnorm";
  c.lambdas = {-1.0, 0.25, 1.0};  // the -1 level is empty
  const TheoremReport r = run_case(c);
  CHECK(r.pass());
  bool noted_empty = false;
  for (const auto& n : r.notes) noted_empty = noted_empty || n.find("empty") != std::string::npos;
  CHECK(noted_empty);
}

TEST_CASE("the max of preinvex functions is verified preinvex") {
  TheoremCase c;
  c.id = "T4.5";
  c.scenario = "euclidean-canonical";
  c.family = {"lin_pos", "lin_neg"};  // pointwise max is |x1|
  const TheoremReport r = run_case(c);
  CHECK(r.status == CaseStatus::Pass);
}

TEST_CASE("search finds a replayable separating witness on the naive scenario") {
  InvexityScenario sc = builtin_scenario("two-ball-global-eta");
  SearchBudget budget;
  budget.max_samples = 400;
  SearchStats stats;
  const auto w = search_counterexample(sc, "invex-set", "", budget, &stats);
  REQUIRE(w.has_value());
  CHECK(stats.samples <= 400);
  CHECK(w->slack > 0.1);

  const ReplayResult r = replay_witness(sc, *w);
  CHECK(r.violated);
  CHECK(r.slack == Catch::Approx(w->slack).margin(1e-9));
}

TEST_CASE("search is seed-deterministic") {
  InvexityScenario sc = builtin_scenario("euclidean-concave");
  SearchBudget budget;
  budget.max_samples = 200;
  budget.seed = 2024;
  const auto w1 = search_counterexample(sc, "preinvex", "neg_sqnorm", budget);
  const auto w2 = search_counterexample(sc, "preinvex", "neg_sqnorm", budget);
  REQUIRE(w1.has_value());
  REQUIRE(w2.has_value());
  CHECK(max_abs_diff(w1->x, w2->x) == 0.0);
  CHECK(max_abs_diff(w1->y, w2->y) == 0.0);
  CHECK(w1->t == w2->t);
  CHECK(w1->slack == w2->slack);
}

TEST_CASE("search respects its budget and input validation") {
  InvexityScenario sc = builtin_scenario("euclidean-canonical");
  SearchBudget budget;
  budget.max_samples = 150;
  SearchStats stats;
  const auto none = search_counterexample(sc, "preinvex", "sqnorm", budget, &stats);
  CHECK_FALSE(none.has_value());
  CHECK(stats.samples == 150);

  SearchBudget bad;
  bad.max_samples = 0;
  CHECK_THROWS_AS(search_counterexample(sc, "preinvex", "sqnorm", bad), error);
  CHECK_THROWS_AS(search_counterexample(sc, "not-a-predicate", "", budget), error);
}

TEST_CASE("suite reports keep their declared order") {
  const std::vector<TheoremReport> reports = run_suite(builtin_suite("full"));
  // P4.1 cases lead, then the implication chains, compositions, families
  REQUIRE(reports.size() >= 8);
  const auto& p41 = find_case(reports, "P4.1");
  CHECK(p41.pass());
  for (std::size_t i = 1; i < reports.size(); ++i) CHECK(reports[i - 1].id <= reports[i].id);
}
