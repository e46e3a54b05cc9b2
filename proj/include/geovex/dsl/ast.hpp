#pragma once

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "geovex/errors.hpp"

namespace geovex {

/// Shortest decimal form that parses back to exactly the same double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

enum class NodeKind {
  Num,       // numeric literal
  Coord,     // point coordinate reference, e.g. x[0]
  Var,       // scalar variable reference
  Add, Sub, Mul, Div, Pow,
  Neg,       // unary minus
  Call,      // named function / intrinsic application
  PointVar,  // point-valued identifier (argument of dist/sqdist)
  PointLit,  // point literal [e0, e1, ...]; children are scalar expressions
};

struct AstNode {
  NodeKind kind;
  double num = 0.0;
  int index = -1;        // Coord only
  std::string name;      // Coord base, Var, PointVar, Call
  std::vector<int> kids;
  int offset = 0;        // byte offset into the source text
};

/// Immutable expression: a node arena plus the root index. Nodes keep their
/// source offsets so runtime diagnostics can point back into the text.
class Expr {
public:
  Expr() = default;
  Expr(std::vector<AstNode> nodes, int root, std::string source)
      : nodes_(std::move(nodes)), root_(root), source_(std::move(source)) {}

  bool empty() const { return nodes_.empty(); }
  const AstNode& node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
  int root() const { return root_; }
  const std::string& source() const { return source_; }

  /// 1-based line/column of a byte offset in the original source.
  std::pair<int, int> locate(int offset) const {
    int line = 1, col = 1;
    for (int i = 0; i < offset && i < static_cast<int>(source_.size()); ++i) {
      if (source_[static_cast<std::size_t>(i)] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    return {line, col};
  }

  std::string print() const {
    if (empty()) throw error(errc::eval_error, "cannot print an empty expression");
    std::string out;
    print_node(root_, 0, out);
    return out;
  }

  friend bool operator==(const Expr& a, const Expr& b) {
    if (a.empty() || b.empty()) return a.empty() == b.empty();
    return a.equal_nodes(a.root_, b, b.root_);
  }
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

private:
  static int prec(NodeKind k) {
    switch (k) {
      case NodeKind::Add:
      case NodeKind::Sub: return 1;
      case NodeKind::Mul:
      case NodeKind::Div: return 2;
      case NodeKind::Neg: return 3;
      case NodeKind::Pow: return 4;
      default: return 5;  // atoms
    }
  }

  // `min_prec` is the binding strength required to omit parentheses.
  void print_node(int idx, int min_prec, std::string& out) const {
    const AstNode& n = node(idx);
    const int p = prec(n.kind);
    const bool wrap = p < min_prec;
    if (wrap) out += '(';
    switch (n.kind) {
      case NodeKind::Num:
        if (n.num < 0 && !wrap && min_prec > 0) {
          out += '(';
          out += format_double(n.num);
          out += ')';
        } else {
          out += format_double(n.num);
        }
        break;
      case NodeKind::Coord:
        out += n.name;
        out += '[';
        out += std::to_string(n.index);
        out += ']';
        break;
      case NodeKind::Var:
      case NodeKind::PointVar:
        out += n.name;
        break;
      case NodeKind::Add:
      case NodeKind::Sub:
      case NodeKind::Mul:
      case NodeKind::Div:
        // left-associative: an equal-precedence right child keeps its parens
        print_node(n.kids[0], p, out);
        out += n.kind == NodeKind::Add ? " + "
               : n.kind == NodeKind::Sub ? " - "
               : n.kind == NodeKind::Mul ? "*" : "/";
        print_node(n.kids[1], p + 1, out);
        break;
      case NodeKind::Pow:
        // right-associative
        print_node(n.kids[0], p + 1, out);
        out += '^';
        print_node(n.kids[1], p, out);
        break;
      case NodeKind::Neg:
        out += '-';
        print_node(n.kids[0], p, out);
        break;
      case NodeKind::Call: {
        out += n.name;
        out += '(';
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
          if (i) out += ", ";
          print_node(n.kids[i], 0, out);
        }
        out += ')';
        break;
      }
      case NodeKind::PointLit: {
        out += '[';
        for (std::size_t i = 0; i < n.kids.size(); ++i) {
          if (i) out += ", ";
          print_node(n.kids[i], 0, out);
        }
        out += ']';
        break;
      }
    }
    if (wrap) out += ')';
  }

  bool equal_nodes(int ia, const Expr& other, int ib) const {
    const AstNode& a = node(ia);
    const AstNode& b = other.node(ib);
    if (a.kind != b.kind || a.name != b.name || a.index != b.index || a.kids.size() != b.kids.size())
      return false;
    if (a.kind == NodeKind::Num && !(a.num == b.num)) return false;
    for (std::size_t i = 0; i < a.kids.size(); ++i)
      if (!equal_nodes(a.kids[i], other, b.kids[i])) return false;
    return true;
  }

  std::vector<AstNode> nodes_;
  int root_ = -1;
  std::string source_;
};

}  // namespace geovex
