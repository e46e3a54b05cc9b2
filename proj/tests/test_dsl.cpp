#include <catch2/catch_amalgamated.hpp>

#include "geovex/dsl/eval.hpp"
#include "geovex/dsl/parser.hpp"
#include "geovex/geometry/geodesic.hpp"

using namespace geovex;

namespace {

double eval1(const std::string& src, const Point& x) {
  Bindings b;
  b.point("x", x);
  return eval_scalar(parse(src), b, x.manifold);
}

double eval_u(const std::string& src, double u) {
  Bindings b;
  b.scalar("u", u);
  return eval_scalar(parse(src), b);
}

}  // namespace

TEST_CASE("arithmetic precedence and associativity") {
  CHECK(eval_u("1 + 2 * 3", 0) == 7.0);
  CHECK(eval_u("(1 + 2) * 3", 0) == 9.0);
  CHECK(eval_u("2 ^ 3 ^ 2", 0) == 512.0);        // right-associative
  CHECK(eval_u("-2 ^ 2", 0) == -4.0);            // ^ binds tighter than unary -
  CHECK(eval_u("2 ^ -1", 0) == 0.5);             // negative exponents
  CHECK(eval_u("10 - 4 - 3", 0) == 3.0);         // left-associative
  CHECK(eval_u("12 / 4 / 3", 0) == 1.0);
  CHECK(eval_u("u / 2 + 1", 5.0) == 3.5);
}

TEST_CASE("built-in scalar functions") {
  CHECK(eval_u("exp(0)", 0) == 1.0);
  CHECK(eval_u("log(exp(2))", 0) == Catch::Approx(2.0));
  CHECK(eval_u("tanh(artanh(0.3))", 0) == Catch::Approx(0.3));
  CHECK(eval_u("sqrt(16)", 0) == 4.0);
  CHECK(eval_u("abs(-3)", 0) == 3.0);
  CHECK(eval_u("min(2, -1)", 0) == -1.0);
  CHECK(eval_u("max(u, 0)", -2.5) == 0.0);
  CHECK(eval_u("max(u, -u)", -2.5) == 2.5);
}

TEST_CASE("coordinate access and point variables") {
  const ManifoldPtr m = ManifoldSpec::euclidean(3);
  const Point x(m, Vec{1.0, -2.0, 0.5});
  CHECK(eval1("x[0] + x[1] * x[2]", x) == 0.0);
  CHECK(eval1("x[2] ^ 2", x) == 0.25);
}

TEST_CASE("dist and sqdist use the manifold metric") {
  const ManifoldPtr e = ManifoldSpec::euclidean(2);
  const Point xe(e, Vec{3.0, 4.0});
  CHECK(eval1("dist(x, [0, 0])", xe) == Catch::Approx(5.0));
  CHECK(eval1("sqdist(x, [0, 0])", xe) == Catch::Approx(25.0));

  const ManifoldPtr b = ManifoldSpec::poincare_ball(2);
  const Point xb(b, Vec{0.5, 0.0});
  const double dh = ball_distance(Vec{0.5, 0.0}, Vec{0.0, 0.0});
  CHECK(eval1("dist(x, [0, 0])", xb) == Catch::Approx(dh));          // hyperbolic, not 0.5
  CHECK(eval1("sqdist(x, [0, 0])", xb) == Catch::Approx(dh * dh));
  CHECK(dh > 1.0);  // strictly larger than the euclidean distance

  // point literals may contain expressions
  CHECK(eval1("dist(x, [x[0], 0])", xb) == Catch::Approx(0.0).margin(1e-12));
}

TEST_CASE("parse errors carry line, column, and expectations") {
  try {
    parse("x[0] +");
    FAIL("expected a parse error");
  } catch (const parse_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 1") != std::string::npos);
    CHECK(msg.find("column 7") != std::string::npos);
    CHECK(msg.find("operand") != std::string::npos);
  }

  try {
    parse("1 +\nfoo(2)");
    FAIL("expected an unknown-function error");
  } catch (const parse_error& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("foo") != std::string::npos);
    CHECK(msg.find("sqdist") != std::string::npos);  // suggestions listed
  }

  CHECK_THROWS_AS(parse("x[0] x[1]"), parse_error);   // trailing tokens
  CHECK_THROWS_AS(parse("x[-1]"), parse_error);       // negative index
  CHECK_THROWS_AS(parse("x[0.5]"), parse_error);      // fractional index
  CHECK_THROWS_AS(parse("dist(1, 2)"), parse_error);  // scalar where point expected
  CHECK_THROWS_AS(parse(""), parse_error);
}

TEST_CASE("evaluation errors name the offending symbol") {
  const ManifoldPtr m = ManifoldSpec::euclidean(2);
  const Point x(m, Vec{1.0, 2.0});
  try {
    eval1("x[0] + zz", x);
    FAIL("expected unbound-variable error");
  } catch (const error& e) {
    CHECK(e.code() == errc::eval_error);
    CHECK(std::string(e.what()).find("zz") != std::string::npos);
  }
  try {
    eval1("x[7]", x);
    FAIL("expected out-of-range error");
  } catch (const error& e) {
    CHECK(std::string(e.what()).find("7") != std::string::npos);
  }
}

TEST_CASE("printer round-trips through the parser") {
  for (const char* src : {
           "x[0]^2 + x[1]^2",
           "max(x[0], -x[0])",
           "sqdist(x, [-0.5, 0])",
           "-(x[0] + x[1]) / 2",
           "exp(u) * tanh(u - 1)",
           "2 ^ -3 ^ 2",
           "min(dist(x, y), 1)",
       }) {
    const Expr e1 = parse(src);
    const std::string printed = e1.print();
    const Expr e2 = parse(printed);
    CHECK(e2.print() == printed);  // canonical fixed point
  }
}

TEST_CASE("printed expressions preserve evaluation semantics") {
  const ManifoldPtr m = ManifoldSpec::euclidean(2);
  const Point x(m, Vec{0.7, -1.3});
  for (const char* src : {"x[0]^2 + x[1]^2", "-x[0]^2", "x[0] - x[1] - 1", "2^-x[0]",
                          "max(x[0], -x[0]) / (1 + abs(x[1]))"}) {
    const double direct = eval1(src, x);
    const double reparsed = eval1(parse(src).print(), x);
    CHECK(direct == Catch::Approx(reparsed).margin(1e-15));
  }
}
