#include <catch2/catch_amalgamated.hpp>

#include "geovex/geometry/calculus.hpp"
#include "geovex/geometry/geodesic.hpp"
#include "geovex/geometry/transport.hpp"
#include "geovex/harness/library.hpp"
#include "geovex/rng.hpp"

using namespace geovex;

namespace {

Vec random_ball_point(Rng& rng, int dim, double rmax = 0.85) {
  Vec x(static_cast<std::size_t>(dim));
  for (auto& c : x) c = rng.uniform(-1.0, 1.0);
  const double n = norm(x);
  const double target = rmax * std::pow(rng.uniform(0.0, 1.0), 1.0 / dim);
  return n == 0.0 ? x : scaled(x, target / n);
}

Vec random_vec(Rng& rng, int dim, double scale) {
  Vec v(static_cast<std::size_t>(dim));
  for (auto& c : v) c = rng.uniform(-scale, scale);
  return v;
}

ManifoldPtr custom_ball(int dim) {
  return ManifoldSpec::custom(
      dim,
      [](const Vec& x) {
        const double lam = conformal_factor(x);
        return Mat::scaled_identity(static_cast<int>(x.size()), lam * lam);
      },
      std::vector<std::pair<double, double>>(static_cast<std::size_t>(dim), {-0.999, 0.999}),
      "conformal-ball");
}

}  // namespace

TEST_CASE("mobius addition identities") {
  Rng rng = Rng::substream(7, 0);
  for (int i = 0; i < 50; ++i) {
    const Vec p = random_ball_point(rng, 3);
    const Vec q = random_ball_point(rng, 3);
    const Vec zero(3, 0.0);

    // 0 + p = p and (-p) + p = 0
    CHECK(max_abs_diff(mobius_add(zero, p), p) < 1e-15);
    CHECK(norm(mobius_add(scaled(p, -1.0), p)) < 1e-14);

    // result stays in the ball
    CHECK(norm(mobius_add(p, q)) < 1.0);
  }
}

TEST_CASE("ball exp and log invert each other") {
  Rng rng = Rng::substream(11, 0);
  for (int i = 0; i < 200; ++i) {
    const Vec p = random_ball_point(rng, 2);
    const Vec q = random_ball_point(rng, 2);
    const Vec v = ball_log(p, q);
    CHECK(max_abs_diff(ball_exp(p, v), q) < 1e-12);

    const Vec w = random_vec(rng, 2, 1.5);
    const Vec r = ball_exp(p, w);
    CHECK(norm(r) < 1.0);
    CHECK(max_abs_diff(ball_log(p, r), w) < 1e-10);
  }
}

TEST_CASE("ball exp at the origin follows the radial tanh profile") {
  // unit-speed radial geodesic through 0: exp_0(v) = tanh(|v|) v/|v|
  // (|v| here measured in the hyperbolic metric at 0 where lambda = 2).
  const Vec origin(2, 0.0);
  const Vec v = {0.3, 0.0};
  const Vec image = ball_exp(origin, v);
  CHECK(image[0] == Catch::Approx(std::tanh(0.3)).epsilon(1e-14));
  CHECK(image[1] == 0.0);

  // metric length of v at 0 is 2 * 0.3; the reached point sits at that
  // hyperbolic distance from the origin.
  CHECK(ball_distance(origin, image) == Catch::Approx(2 * 0.3).epsilon(1e-12));
}

TEST_CASE("ball distance matches the closed form and is a metric") {
  Rng rng = Rng::substream(13, 0);
  for (int i = 0; i < 100; ++i) {
    const Vec p = random_ball_point(rng, 2);
    const Vec q = random_ball_point(rng, 2);
    const double d = ball_distance(p, q);

    // direct acosh evaluation
    const Vec diff = sub(p, q);
    const double num = 2.0 * dot(diff, diff);
    const double den = (1.0 - dot(p, p)) * (1.0 - dot(q, q));
    CHECK(d == Catch::Approx(std::acosh(1.0 + num / den)).margin(1e-12));

    CHECK(d == Catch::Approx(ball_distance(q, p)).margin(1e-12));
    CHECK(d >= 0.0);
    const Vec r = random_ball_point(rng, 2);
    CHECK(ball_distance(p, r) <= d + ball_distance(q, r) + 1e-12);
  }
}

TEST_CASE("geodesics have constant speed and hit their endpoints") {
  Rng rng = Rng::substream(17, 0);
  for (const char* kind : {"euclidean", "ball"}) {
    const ManifoldPtr m =
        std::string(kind) == "euclidean" ? ManifoldSpec::euclidean(2) : ManifoldSpec::poincare_ball(2);
    for (int i = 0; i < 40; ++i) {
      const Vec px = std::string(kind) == "euclidean" ? random_vec(rng, 2, 2.0)
                                                      : random_ball_point(rng, 2);
      const Vec qx = std::string(kind) == "euclidean" ? random_vec(rng, 2, 2.0)
                                                      : random_ball_point(rng, 2);
      const Point p(m, px), q(m, qx);
      const TangentVector v = log_map(p, q);
      const GeodesicHandle geo = solve_geodesic(p, v);

      CHECK(max_abs_diff(geo.eval(0.0).x, p.x) < 1e-15);
      CHECK(max_abs_diff(geo.eval(1.0).x, q.x) < 1e-12);

      // constant-speed property: d(geo(s), geo(t)) = |t - s| d(p, q)
      const double d = distance(p, q);
      CHECK(distance(geo.eval(0.25), geo.eval(0.75)) == Catch::Approx(0.5 * d).margin(1e-10));
      CHECK(distance(p, geo.eval(0.5)) == Catch::Approx(0.5 * d).margin(1e-10));
    }
  }
}

TEST_CASE("exp preserves riemannian length as distance") {
  Rng rng = Rng::substream(19, 0);
  const ManifoldPtr m = ManifoldSpec::poincare_ball(3);
  for (int i = 0; i < 50; ++i) {
    const Point p(m, random_ball_point(rng, 3));
    const TangentVector v(p, random_vec(rng, 3, 0.5));
    const Point q = exp_map(p, v);
    CHECK(distance(p, q) == Catch::Approx(riemannian_norm(v)).margin(1e-10));
  }
}

TEST_CASE("parallel transport is a linear isometry") {
  Rng rng = Rng::substream(23, 0);
  for (const char* kind : {"euclidean", "ball"}) {
    const ManifoldPtr m =
        std::string(kind) == "euclidean" ? ManifoldSpec::euclidean(2) : ManifoldSpec::poincare_ball(2);
    for (int i = 0; i < 60; ++i) {
      const Vec px = std::string(kind) == "euclidean" ? random_vec(rng, 2, 2.0)
                                                      : random_ball_point(rng, 2);
      const Vec qx = std::string(kind) == "euclidean" ? random_vec(rng, 2, 2.0)
                                                      : random_ball_point(rng, 2);
      const Point p(m, px), q(m, qx);
      const TangentVector u(p, random_vec(rng, 2, 1.0));
      const TangentVector w(p, random_vec(rng, 2, 1.0));

      const TangentVector tu = parallel_transport(p, q, u);
      const TangentVector tw = parallel_transport(p, q, w);

      CHECK(riemannian_norm(tu) == Catch::Approx(riemannian_norm(u)).margin(1e-10));
      CHECK(inner(tu, tw) == Catch::Approx(inner(u, w)).margin(1e-9));

      // transporting back returns the original vector
      const TangentVector back = parallel_transport(q, p, tu);
      CHECK(max_abs_diff(back.v, u.v) < 1e-10);

      // transport to the same point is the identity
      CHECK(max_abs_diff(parallel_transport(p, p, u).v, u.v) < 1e-14);
    }
  }
}

TEST_CASE("transport along a geodesic composes") {
  Rng rng = Rng::substream(29, 0);
  const ManifoldPtr m = ManifoldSpec::poincare_ball(2);
  for (int i = 0; i < 30; ++i) {
    const Point p(m, random_ball_point(rng, 2));
    const GeodesicHandle geo = solve_geodesic(p, TangentVector(p, random_vec(rng, 2, 0.6)));
    const TangentVector u(p, random_vec(rng, 2, 1.0));

    const TangentVector half = parallel_transport(geo, 0.0, 0.5, u);
    const TangentVector full_via_half = parallel_transport(geo, 0.5, 1.0, half);
    const TangentVector full = parallel_transport(geo, 0.0, 1.0, u);
    CHECK(max_abs_diff(full.v, full_via_half.v) < 1e-10);

    // the velocity field is parallel along the geodesic
    const TangentVector v0 = geo.deriv(0.0);
    const TangentVector moved = parallel_transport(geo, 0.0, 0.7, v0);
    CHECK(max_abs_diff(moved.v, geo.deriv(0.7).v) < 1e-9);
  }
}

TEST_CASE("numerical ODE route reproduces the closed-form ball geometry") {
  // Feed the conformal ball metric to the custom-metric engine and compare a
  // handful of cases here (the full battery runs in the acceptance suite).
  const ManifoldPtr closed = ManifoldSpec::poincare_ball(2);
  const ManifoldPtr ode = custom_ball(2);
  Rng rng = Rng::substream(31, 0);
  for (int i = 0; i < 5; ++i) {
    const Vec px = random_ball_point(rng, 2, 0.6);
    const Vec v = random_vec(rng, 2, 0.4);

    const GeodesicHandle g_closed = solve_geodesic(Point(closed, px), TangentVector(Point(closed, px), v));
    const GeodesicHandle g_ode = solve_geodesic(Point(ode, px), TangentVector(Point(ode, px), v));
    for (double t : {0.25, 0.5, 1.0})
      CHECK(max_abs_diff(g_closed.position(t), g_ode.position(t)) < 1e-7);

    const Vec w = random_vec(rng, 2, 1.0);
    const Vec tw_closed =
        parallel_transport(g_closed, 0.0, 1.0, TangentVector(Point(closed, px), w)).v;
    const Vec tw_ode = parallel_transport(g_ode, 0.0, 1.0, TangentVector(Point(ode, px), w)).v;
    CHECK(max_abs_diff(tw_closed, tw_ode) < 1e-6);
  }
}

TEST_CASE("geodesic length integrates to the distance") {
  Rng rng = Rng::substream(37, 0);
  const ManifoldPtr m = ManifoldSpec::poincare_ball(2);
  for (int i = 0; i < 10; ++i) {
    const Point p(m, random_ball_point(rng, 2));
    const Point q(m, random_ball_point(rng, 2));
    const GeodesicHandle geo = solve_geodesic(p, log_map(p, q));
    CHECK(curve_length(geo, 0.0, 1.0) == Catch::Approx(distance(p, q)).margin(1e-8));
  }
}

TEST_CASE("hyperbolic balls have the predicted euclidean image") {
  // A geodesic ball on the Poincare disk is a euclidean disk with shifted
  // center; points at hyperbolic distance r from c must lie on that circle.
  Rng rng = Rng::substream(41, 0);
  const ManifoldPtr m = ManifoldSpec::poincare_ball(2);
  const Vec c = {0.4, -0.2};
  const double r = 0.7;
  const auto [ce, re] = hyperbolic_ball_euclidean(c, r);
  const Point pc(m, c);
  for (int i = 0; i < 50; ++i) {
    Vec dir = random_vec(rng, 2, 1.0);
    if (norm(dir) == 0.0) dir = {1.0, 0.0};
    const double lam = conformal_factor(c);
    dir = scaled(dir, r / (lam * norm(dir)));  // metric length r
    const Point edge = exp_map(pc, TangentVector(pc, dir));
    CHECK(ball_distance(c, edge.x) == Catch::Approx(r).margin(1e-10));
    CHECK(norm(sub(edge.x, ce)) == Catch::Approx(re).margin(1e-10));
  }
}

TEST_CASE("out-of-chart points are rejected") {
  const ManifoldPtr m = ManifoldSpec::poincare_ball(2);
  CHECK_THROWS_AS(Point(m, Vec{1.5, 0.0}), error);
  try {
    Point(m, Vec{1.5, 0.0});
  } catch (const error& e) {
    CHECK(e.code() == errc::domain_exit);
  }
}
