#pragma once

#include <cctype>
#include <cstdlib>
#include <string>
#include <vector>

#include "geovex/dsl/ast.hpp"
#include "geovex/errors.hpp"

namespace geovex {

namespace detail {

enum class Tok { Number, Ident, Plus, Minus, Star, Slash, Caret, LParen, RParen, LBracket, RBracket, Comma, End };

struct Token {
  Tok kind;
  std::string text;
  double value = 0.0;
  int line = 1, col = 1, offset = 0;
};

inline const char* tok_name(Tok t) {
  switch (t) {
    case Tok::Number: return "number";
    case Tok::Ident: return "identifier";
    case Tok::Plus: return "'+'";
    case Tok::Minus: return "'-'";
    case Tok::Star: return "'*'";
    case Tok::Slash: return "'/'";
    case Tok::Caret: return "'^'";
    case Tok::LParen: return "'('";
    case Tok::RParen: return "')'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Comma: return "','";
    case Tok::End: return "end of input";
  }
  return "?";
}

inline std::vector<Token> lex(const std::string& src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  const auto push = [&](Tok k, std::size_t begin, std::size_t end, int tl, int tc) {
    Token t;
    t.kind = k;
    t.text = src.substr(begin, end - begin);
    t.line = tl;
    t.col = tc;
    t.offset = static_cast<int>(begin);
    if (k == Tok::Number) t.value = std::strtod(t.text.c_str(), nullptr);
    out.push_back(std::move(t));
  };
  while (i < src.size()) {
    const char c = src[i];
    if (c == '\n') {
      ++line;
      col = 1;
      ++i;
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++col;
      ++i;
      continue;
    }
    const int tl = line, tc = col;
    const std::size_t begin = i;
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && i + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[i + 1])))) {
      while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      if (i < src.size() && src[i] == '.') {
        ++i;
        while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
          i = j;
          while (i < src.size() && std::isdigit(static_cast<unsigned char>(src[i]))) ++i;
        }
      }
      col += static_cast<int>(i - begin);
      push(Tok::Number, begin, i, tl, tc);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      while (i < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[i])) || src[i] == '_'))
        ++i;
      col += static_cast<int>(i - begin);
      push(Tok::Ident, begin, i, tl, tc);
      continue;
    }
    Tok k;
    switch (c) {
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '/': k = Tok::Slash; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      case ',': k = Tok::Comma; break;
      default:
        throw parse_error(line, col, std::string("unexpected character '") + c + "'");
    }
    ++i;
    ++col;
    push(k, begin, i, tl, tc);
  }
  Token end;
  end.kind = Tok::End;
  end.line = line;
  end.col = col;
  end.offset = static_cast<int>(src.size());
  out.push_back(end);
  return out;
}

inline bool is_unary_fn(const std::string& s) {
  return s == "exp" || s == "log" || s == "tanh" || s == "artanh" || s == "sqrt" || s == "abs";
}
inline bool is_binary_fn(const std::string& s) { return s == "min" || s == "max"; }
inline bool is_point_fn(const std::string& s) { return s == "dist" || s == "sqdist"; }

class Parser {
public:
  explicit Parser(std::string src) : src_(std::move(src)), toks_(lex(src_)) {}

  Expr run() {
    const int root = parse_expr();
    if (peek().kind != Tok::End)
      throw parse_error(peek().line, peek().col,
                        std::string("unexpected ") + tok_name(peek().kind) + " after expression",
                        {"end of input", "operator"});
    return Expr(std::move(nodes_), root, std::move(src_));
  }

private:
  const Token& peek() const { return toks_[pos_]; }
  Token take() { return toks_[pos_++]; }
  bool accept(Tok k) {
    if (peek().kind != k) return false;
    ++pos_;
    return true;
  }
  void expect(Tok k, const char* what) {
    if (!accept(k))
      throw parse_error(peek().line, peek().col, std::string("unexpected ") + tok_name(peek().kind),
                        {what});
  }

  int make(AstNode n) {
    nodes_.push_back(std::move(n));
    return static_cast<int>(nodes_.size()) - 1;
  }

  int parse_expr() {
    int lhs = parse_term();
    for (;;) {
      if (peek().kind == Tok::Plus || peek().kind == Tok::Minus) {
        const Token op = take();
        const int rhs = parse_term();
        AstNode n;
        n.kind = op.kind == Tok::Plus ? NodeKind::Add : NodeKind::Sub;
        n.kids = {lhs, rhs};
        n.offset = op.offset;
        lhs = make(std::move(n));
      } else {
        return lhs;
      }
    }
  }

  int parse_term() {
    int lhs = parse_unary();
    for (;;) {
      if (peek().kind == Tok::Star || peek().kind == Tok::Slash) {
        const Token op = take();
        const int rhs = parse_unary();
        AstNode n;
        n.kind = op.kind == Tok::Star ? NodeKind::Mul : NodeKind::Div;
        n.kids = {lhs, rhs};
        n.offset = op.offset;
        lhs = make(std::move(n));
      } else {
        return lhs;
      }
    }
  }

  int parse_unary() {
    if (peek().kind == Tok::Minus) {
      const Token op = take();
      const int kid = parse_unary();
      AstNode n;
      n.kind = NodeKind::Neg;
      n.kids = {kid};
      n.offset = op.offset;
      return make(std::move(n));
    }
    return parse_power();
  }

  int parse_power() {
    const int base = parse_atom();
    if (accept(Tok::Caret)) {
      const Token& caret = toks_[pos_ - 1];
      const int exp = parse_unary();  // right-associative; allows 2^-3
      AstNode n;
      n.kind = NodeKind::Pow;
      n.kids = {base, exp};
      n.offset = caret.offset;
      return make(std::move(n));
    }
    return base;
  }

  int parse_atom() {
    const Token t = peek();
    switch (t.kind) {
      case Tok::Number: {
        take();
        AstNode n;
        n.kind = NodeKind::Num;
        n.num = t.value;
        n.offset = t.offset;
        return make(std::move(n));
      }
      case Tok::LParen: {
        take();
        const int inner = parse_expr();
        expect(Tok::RParen, "')'");
        return inner;
      }
      case Tok::Ident:
        take();
        return parse_ident_tail(t);
      default:
        throw parse_error(t.line, t.col, std::string("unexpected ") + tok_name(t.kind), {"operand"});
    }
  }

  int parse_ident_tail(const Token& id) {
    if (accept(Tok::LBracket)) {
      const Token idx = peek();
      if (idx.kind != Tok::Number || idx.value != static_cast<int>(idx.value) || idx.value < 0)
        throw parse_error(idx.line, idx.col, std::string("unexpected ") + tok_name(idx.kind),
                          {"non-negative integer coordinate index"});
      take();
      expect(Tok::RBracket, "']'");
      AstNode n;
      n.kind = NodeKind::Coord;
      n.name = id.text;
      n.index = static_cast<int>(idx.value);
      n.offset = id.offset;
      return make(std::move(n));
    }
    if (accept(Tok::LParen)) {
      if (is_point_fn(id.text)) {
        const int a = parse_point_arg();
        expect(Tok::Comma, "','");
        const int b = parse_point_arg();
        expect(Tok::RParen, "')'");
        AstNode n;
        n.kind = NodeKind::Call;
        n.name = id.text;
        n.kids = {a, b};
        n.offset = id.offset;
        return make(std::move(n));
      }
      if (is_unary_fn(id.text)) {
        const int a = parse_expr();
        expect(Tok::RParen, "')'");
        AstNode n;
        n.kind = NodeKind::Call;
        n.name = id.text;
        n.kids = {a};
        n.offset = id.offset;
        return make(std::move(n));
      }
      if (is_binary_fn(id.text)) {
        const int a = parse_expr();
        expect(Tok::Comma, "','");
        const int b = parse_expr();
        expect(Tok::RParen, "')'");
        AstNode n;
        n.kind = NodeKind::Call;
        n.name = id.text;
        n.kids = {a, b};
        n.offset = id.offset;
        return make(std::move(n));
      }
      throw parse_error(id.line, id.col, "unknown function '" + id.text + "'",
                        {"exp", "log", "tanh", "artanh", "sqrt", "abs", "min", "max", "dist", "sqdist"});
    }
    AstNode n;
    n.kind = NodeKind::Var;
    n.name = id.text;
    n.offset = id.offset;
    return make(std::move(n));
  }

  /// Argument of dist/sqdist: a point-valued identifier or a point literal.
  int parse_point_arg() {
    const Token t = peek();
    if (t.kind == Tok::Ident) {
      take();
      AstNode n;
      n.kind = NodeKind::PointVar;
      n.name = t.text;
      n.offset = t.offset;
      return make(std::move(n));
    }
    if (t.kind == Tok::LBracket) {
      take();
      AstNode n;
      n.kind = NodeKind::PointLit;
      n.offset = t.offset;
      n.kids.push_back(parse_expr());
      while (accept(Tok::Comma)) n.kids.push_back(parse_expr());
      expect(Tok::RBracket, "']'");
      return make(std::move(n));
    }
    throw parse_error(t.line, t.col, std::string("unexpected ") + tok_name(t.kind),
                      {"point name", "point literal '[...]'"});
  }

  std::string src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  std::vector<AstNode> nodes_;
};

}  // namespace detail

inline Expr parse(const std::string& source) { return detail::Parser(source).run(); }

}  // namespace geovex
