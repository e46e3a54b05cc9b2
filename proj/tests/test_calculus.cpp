#include <catch2/catch_amalgamated.hpp>

#include "geovex/geometry/calculus.hpp"
#include "geovex/geometry/geodesic.hpp"
#include "geovex/rng.hpp"

using namespace geovex;

TEST_CASE("directional differential matches the analytic derivative") {
  const ManifoldPtr m = ManifoldSpec::euclidean(2);
  const ScalarField sqnorm = [](const Point& p) { return dot(p.x, p.x); };
  Rng rng = Rng::substream(3, 0);
  for (int i = 0; i < 50; ++i) {
    Vec px = {rng.uniform(-2, 2), rng.uniform(-2, 2)};
    Vec vx = {rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const Point p(m, px);
    const TangentVector v(p, vx);
    // d/dt |p + t v|^2 at 0 = 2 <p, v>
    CHECK(differential(sqnorm, v) == Catch::Approx(2.0 * dot(px, vx)).margin(1e-7));
  }
}

TEST_CASE("chart partials recover the gradient of a polynomial") {
  const ManifoldPtr m = ManifoldSpec::euclidean(2);
  const ScalarField f = [](const Point& p) { return p.x[0] * p.x[0] * p.x[1] + 3.0 * p.x[1]; };
  const Point p(m, Vec{1.5, -0.5});
  const Vec partials = chart_partials(f, p);
  CHECK(partials[0] == Catch::Approx(2.0 * 1.5 * -0.5).margin(1e-6));   // 2 x y
  CHECK(partials[1] == Catch::Approx(1.5 * 1.5 + 3.0).margin(1e-6));    // x^2 + 3
}

TEST_CASE("riemannian gradient satisfies the defining identity") {
  // g(grad f, v) = df(v) for all v, on the curved manifold.
  const ManifoldPtr m = ManifoldSpec::poincare_ball(2);
  const ScalarField f = [](const Point& p) { return p.x[0] + 2.0 * p.x[1] * p.x[1]; };
  Rng rng = Rng::substream(5, 0);
  for (int i = 0; i < 30; ++i) {
    Vec px = {rng.uniform(-0.7, 0.7), rng.uniform(-0.5, 0.5)};
    const Point p(m, px);
    const TangentVector g = gradient(f, p);
    const TangentVector v(p, Vec{rng.uniform(-1, 1), rng.uniform(-1, 1)});
    CHECK(inner(g, v) == Catch::Approx(differential(f, v)).margin(1e-5));
  }
}

TEST_CASE("gradient on the ball carries the inverse metric factor") {
  // For the conformal metric lambda^2 I, grad f = lambda^{-2} euclid-grad f.
  const ManifoldPtr m = ManifoldSpec::poincare_ball(2);
  const ScalarField coord = [](const Point& p) { return p.x[0]; };
  const Point p(m, Vec{0.3, -0.4});
  const double lam = conformal_factor(p.x);
  const TangentVector g = gradient(coord, p);
  CHECK(g.v[0] == Catch::Approx(1.0 / (lam * lam)).margin(1e-7));
  CHECK(g.v[1] == Catch::Approx(0.0).margin(1e-7));
}

TEST_CASE("differential along a geodesic is the curve derivative of f") {
  const ManifoldPtr m = ManifoldSpec::poincare_ball(2);
  const Point p(m, Vec{0.1, 0.2});
  const Point q(m, Vec{-0.3, 0.4});
  const ScalarField f = [&m](const Point& z) { return distance(z, Point(m, Vec{0.0, 0.0})); };
  const GeodesicHandle geo = solve_geodesic(p, log_map(p, q));

  // compare df(gamma'(0)) with a centered difference of f along the curve
  const double h = 1e-6;
  const double fd = (f(geo.eval(h)) - f(geo.eval(0.0))) / h;
  CHECK(differential(f, geo.deriv(0.0)) == Catch::Approx(fd).margin(1e-4));
}
