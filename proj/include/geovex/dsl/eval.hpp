#pragma once

#include <cmath>
#include <map>
#include <string>

#include "geovex/dsl/ast.hpp"
#include "geovex/errors.hpp"
#include "geovex/geometry/geodesic.hpp"
#include "geovex/geometry/manifold.hpp"

namespace geovex {

/// Named values an expression may reference. Point bindings serve both
/// coordinate references like x[0] and point arguments of dist/sqdist.
struct Bindings {
  std::map<std::string, Point> points;
  std::map<std::string, double> scalars;

  Bindings() = default;
  Bindings& point(const std::string& name, Point p) {
    points.insert_or_assign(name, std::move(p));
    return *this;
  }
  Bindings& scalar(const std::string& name, double v) {
    scalars.insert_or_assign(name, v);
    return *this;
  }
};

namespace detail {

[[noreturn]] inline void located(errc code, const Expr& e, int node, const std::string& msg) {
  const auto [line, col] = e.locate(e.node(node).offset);
  throw error(code, msg + " (line " + std::to_string(line) + ", column " + std::to_string(col) + ")");
}

class Evaluator {
public:
  Evaluator(const Expr& e, const Bindings& b, ManifoldPtr m) : e_(e), b_(b), m_(std::move(m)) {}

  double scalar(int idx) const {
    const AstNode& n = e_.node(idx);
    switch (n.kind) {
      case NodeKind::Num:
        return n.num;
      case NodeKind::Coord: {
        const Point& p = point_named(n.name, idx);
        if (n.index >= static_cast<int>(p.x.size()))
          located(errc::eval_error, e_, idx,
                  "coordinate index " + std::to_string(n.index) + " out of range for '" + n.name +
                      "' of dimension " + std::to_string(p.x.size()));
        return p.x[static_cast<std::size_t>(n.index)];
      }
      case NodeKind::Var: {
        const auto it = b_.scalars.find(n.name);
        if (it == b_.scalars.end())
          located(errc::eval_error, e_, idx, "unbound variable '" + n.name + "'");
        return it->second;
      }
      case NodeKind::Add:
        return scalar(n.kids[0]) + scalar(n.kids[1]);
      case NodeKind::Sub:
        return scalar(n.kids[0]) - scalar(n.kids[1]);
      case NodeKind::Mul:
        return scalar(n.kids[0]) * scalar(n.kids[1]);
      case NodeKind::Div: {
        const double den = scalar(n.kids[1]);
        if (den == 0.0) located(errc::eval_error, e_, idx, "division by zero");
        return scalar(n.kids[0]) / den;
      }
      case NodeKind::Pow: {
        const double r = std::pow(scalar(n.kids[0]), scalar(n.kids[1]));
        if (!std::isfinite(r)) located(errc::eval_error, e_, idx, "power produced a non-finite value");
        return r;
      }
      case NodeKind::Neg:
        return -scalar(n.kids[0]);
      case NodeKind::Call:
        return call(idx, n);
      case NodeKind::PointVar:
      case NodeKind::PointLit:
        located(errc::eval_error, e_, idx, "point value used where a scalar is required");
    }
    located(errc::eval_error, e_, idx, "malformed expression node");
  }

private:
  const Point& point_named(const std::string& name, int idx) const {
    const auto it = b_.points.find(name);
    if (it == b_.points.end()) located(errc::eval_error, e_, idx, "unbound point '" + name + "'");
    return it->second;
  }

  Point point_arg(int idx) const {
    const AstNode& n = e_.node(idx);
    if (n.kind == NodeKind::PointVar) return point_named(n.name, idx);
    // PointLit: components are scalar expressions; manifold context required
    ManifoldPtr m = m_;
    if (!m && !b_.points.empty()) m = b_.points.begin()->second.manifold;
    if (!m) located(errc::eval_error, e_, idx, "point literal requires a manifold context");
    Vec coords(n.kids.size());
    for (std::size_t i = 0; i < n.kids.size(); ++i) coords[i] = scalar(n.kids[i]);
    try {
      return Point(m, coords);
    } catch (const error& err) {
      located(err.code(), e_, idx, err.what());
    }
  }

  double call(int idx, const AstNode& n) const {
    const std::string& f = n.name;
    if (f == "dist" || f == "sqdist") {
      const Point a = point_arg(n.kids[0]);
      const Point b = point_arg(n.kids[1]);
      try {
        const double d = distance(a, b);
        return f == "dist" ? d : d * d;
      } catch (const error& err) {
        located(err.code(), e_, idx, err.what());
      }
    }
    if (f == "min" || f == "max") {
      const double a = scalar(n.kids[0]);
      const double b = scalar(n.kids[1]);
      return f == "min" ? std::min(a, b) : std::max(a, b);
    }
    const double u = scalar(n.kids[0]);
    if (f == "exp") {
      const double r = std::exp(u);
      if (!std::isfinite(r)) located(errc::eval_error, e_, idx, "exp overflow");
      return r;
    }
    if (f == "log") {
      if (u <= 0.0) located(errc::eval_error, e_, idx, "log of non-positive value");
      return std::log(u);
    }
    if (f == "tanh") return std::tanh(u);
    if (f == "artanh") {
      if (!(std::abs(u) < 1.0))
        located(errc::eval_error, e_, idx, "artanh argument outside (-1, 1)");
      return std::atanh(u);
    }
    if (f == "sqrt") {
      if (u < 0.0) located(errc::eval_error, e_, idx, "sqrt of negative value");
      return std::sqrt(u);
    }
    if (f == "abs") return std::abs(u);
    located(errc::eval_error, e_, idx, "unknown function '" + f + "'");
  }

  const Expr& e_;
  const Bindings& b_;
  ManifoldPtr m_;
};

}  // namespace detail

/// Evaluate a scalar expression. The manifold supplies context for point
/// literals inside dist/sqdist; it may be null when no literal occurs.
inline double eval_scalar(const Expr& e, const Bindings& b, ManifoldPtr m = nullptr) {
  if (e.empty()) throw error(errc::eval_error, "cannot evaluate an empty expression");
  return detail::Evaluator(e, b, std::move(m)).scalar(e.root());
}

}  // namespace geovex
