#include <catch2/catch_amalgamated.hpp>

#include "geovex/dsl/maps.hpp"
#include "geovex/dsl/parser.hpp"
#include "geovex/geometry/geodesic.hpp"
#include "geovex/rng.hpp"

using namespace geovex;

TEST_CASE("log-map eta is the riemannian log") {
  const ManifoldPtr m = ManifoldSpec::poincare_ball(2);
  const Point a(m, Vec{0.2, 0.3});
  const Point b(m, Vec{-0.4, 0.1});
  const TangentVector got = eval_eta(EtaDef::log_map(), a, b);
  const TangentVector want = log_map(b, a);
  CHECK(max_abs_diff(got.v, want.v) < 1e-15);
  CHECK(same_coords(got.base.x, b.x));

  // exp at b along eta(a, b) reaches a
  CHECK(max_abs_diff(exp_map(b, got).x, a.x) < 1e-12);
}

TEST_CASE("zero eta returns the zero vector at the base") {
  const ManifoldPtr m = ManifoldSpec::euclidean(3);
  const Point a(m, Vec{1, 2, 3});
  const Point b(m, Vec{0, 0, 1});
  const TangentVector v = eval_eta(EtaDef::zero(), a, b);
  CHECK(norm(v.v) == 0.0);
  CHECK(same_coords(v.base.x, b.x));
}

TEST_CASE("piecewise-balls eta switches between log and zero") {
  const ManifoldPtr m = ManifoldSpec::poincare_ball(2);
  const EtaDef eta = EtaDef::piecewise_balls(Vec{-0.5, 0.0}, 0.5, Vec{0.5, 0.0}, 0.5);

  // both points in the left ball -> log behavior
  const Point a1(m, Vec{-0.55, 0.05});
  const Point b1(m, Vec{-0.45, -0.05});
  CHECK(max_abs_diff(eval_eta(eta, a1, b1).v, log_map(b1, a1).v) < 1e-15);

  // points in different balls -> zero
  const Point a2(m, Vec{-0.5, 0.0});
  const Point b2(m, Vec{0.5, 0.0});
  CHECK(norm(eval_eta(eta, a2, b2).v) == 0.0);

  // a point outside both balls -> zero even when the other is inside
  const Point outside(m, Vec{0.0, 0.9});
  CHECK(norm(eval_eta(eta, a1, outside).v) == 0.0);
}

TEST_CASE("expression eta evaluates componentwise with pair bindings") {
  const ManifoldPtr m = ManifoldSpec::euclidean(2);
  const EtaDef eta = EtaDef::expression({parse("(x[0] - y[0]) / 2"), parse("(x[1] - y[1]) / 2")});
  const Point a(m, Vec{2, 4});
  const Point b(m, Vec{0, 0});
  const TangentVector v = eval_eta(eta, a, b);
  CHECK(v.v[0] == 1.0);
  CHECK(v.v[1] == 2.0);

  // wrong component count is a configuration error
  const EtaDef bad = EtaDef::expression({parse("x[0]")});
  CHECK_THROWS_AS(eval_eta(bad, a, b), error);
}

TEST_CASE("alpha must avoid zero") {
  CHECK_THROWS_AS(AlphaDef::constant(0.0), error);

  const ManifoldPtr m = ManifoldSpec::euclidean(1);
  const AlphaDef a = AlphaDef::expression(parse("x[0] - y[0]"));
  const Point p(m, Vec{1.0});
  CHECK(eval_alpha(a, p, Point(m, Vec{0.0})) == 1.0);
  try {
    eval_alpha(a, p, p);  // evaluates to 0
    FAIL("expected zero-alpha error");
  } catch (const error& e) {
    CHECK(e.code() == errc::zero_alpha);
    CHECK(std::string(e.what()).find("(1)") != std::string::npos);  // names the pair
  }
}

TEST_CASE("identity E returns its argument") {
  const ManifoldPtr m = ManifoldSpec::poincare_ball(2);
  const Point x(m, Vec{0.3, -0.2});
  CHECK(max_abs_diff(eval_E(EMapDef::identity(), x).x, x.x) < 1e-16);
}

TEST_CASE("geodesic projection lands on the sphere of radius rho") {
  const ManifoldPtr m = ManifoldSpec::poincare_ball(2);
  const Vec anchor = {-0.5, 0.0};
  const double rho = 0.25;
  const EMapDef E = EMapDef::geodesic_projection(anchor, rho);
  Rng rng = Rng::substream(99, 0);
  const Point pa(m, anchor);
  for (int i = 0; i < 50; ++i) {
    Vec raw = {rng.uniform(-0.9, 0.9), rng.uniform(-0.9, 0.9)};
    if (norm(raw) >= 0.95) raw = scaled(raw, 0.5);
    const Point x(m, raw);
    const Point ex = eval_E(E, x);
    CHECK(distance(pa, ex) == Catch::Approx(rho).margin(1e-9));
    if (distance(pa, x) > 1e-6) {
      // E(x) lies on the geodesic from the anchor toward x
      const TangentVector to_x = log_map(pa, x);
      const TangentVector to_ex = log_map(pa, ex);
      const double cosang = inner(to_x, to_ex) / (riemannian_norm(to_x) * riemannian_norm(to_ex));
      CHECK(cosang == Catch::Approx(1.0).margin(1e-9));
    }
  }

  // the anchor itself projects somewhere at distance rho (tie broken deterministically)
  CHECK(distance(pa, eval_E(E, pa)) == Catch::Approx(rho).margin(1e-9));
}

TEST_CASE("expression E maps through the chart") {
  const ManifoldPtr m = ManifoldSpec::euclidean(2);
  const EMapDef E = EMapDef::expression({parse("x[1]"), parse("x[0]")});  // coordinate swap
  const Point x(m, Vec{3.0, 7.0});
  const Point ex = eval_E(E, x);
  CHECK(ex.x[0] == 7.0);
  CHECK(ex.x[1] == 3.0);

  // an expression E that leaves the ball chart is rejected
  const ManifoldPtr b = ManifoldSpec::poincare_ball(2);
  const EMapDef bad = EMapDef::expression({parse("x[0] + 2"), parse("x[1]")});
  CHECK_THROWS_AS(eval_E(bad, Point(b, Vec{0.1, 0.1})), error);
}

TEST_CASE("mismatched manifolds are rejected by the bifunctions") {
  const Point a(ManifoldSpec::euclidean(2), Vec{0, 0});
  const Point b(ManifoldSpec::poincare_ball(2), Vec{0, 0});
  CHECK_THROWS_AS(eval_eta(EtaDef::log_map(), a, b), error);
}
