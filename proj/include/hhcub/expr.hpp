#pragma once

/*
 * Bivariate real expressions in x and y.
 *
 * Grammar (whitespace between tokens is ignored):
 *
 *   expr   := term (('+'|'-') term)*
 *   term   := factor (('*'|'/') factor)*
 *   factor := '-' factor | power
 *   power  := atom ('^' factor)?
 *   atom   := NUMBER | 'x' | 'y' | 'pi' | 'e' | FUNC '(' expr ')' | '(' expr ')'
 *   FUNC   := 'exp' | 'log' | 'sin' | 'cos' | 'sqrt' | 'abs'
 *
 * A power whose exponent is not a non-negative integer literal is accepted
 * only when its base is syntactically positive: exp(...), sqrt(...), pi, e
 * or a positive literal. Every model therefore stays real-valued wherever
 * it can be evaluated.
 *
 * Trees are immutable and shared; copying an Expr is a pointer copy.
 */

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <numbers>
#include <string>
#include <string_view>
#include <system_error>
#include <utility>

#include "hhcub/core.hpp"

namespace hhcub {

enum class NodeKind : std::uint8_t {
  Number,
  VarX,
  VarY,
  Pi,
  E,
  Neg,
  Add,
  Sub,
  Mul,
  Div,
  Pow,
  Func,
};

enum class Func : std::uint8_t { Exp, Log, Sin, Cos, Sqrt, Abs };

inline const char* func_name(Func f) noexcept {
  switch (f) {
    case Func::Exp: return "exp";
    case Func::Log: return "log";
    case Func::Sin: return "sin";
    case Func::Cos: return "cos";
    case Func::Sqrt: return "sqrt";
    case Func::Abs: return "abs";
  }
  return "?";
}

enum class Var : std::uint8_t { X, Y };

// ----------------------------------------------------------------------------
// Errors carrying positions
// ----------------------------------------------------------------------------

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, const std::string& message)
      : Error(ErrorCode::SyntaxError,
              message + " at offset " + std::to_string(offset)),
        offset_(offset) {}

  std::size_t offset() const noexcept { return offset_; }

 protected:
  SyntaxError(ErrorCode code, std::size_t offset, const std::string& message)
      : Error(code, message + " at offset " + std::to_string(offset)),
        offset_(offset) {}

 private:
  std::size_t offset_;
};

class UnknownIdentifier : public SyntaxError {
 public:
  UnknownIdentifier(std::size_t offset, std::string name)
      : SyntaxError(ErrorCode::UnknownIdentifier, offset,
                    "unknown identifier '" + name + "'"),
        name_(std::move(name)) {}

  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class DomainError : public Error {
 public:
  DomainError(std::string node, double x, double y, const std::string& why)
      : Error(ErrorCode::DomainError, why + " in '" + node + "' at (" +
                                          format_point(x) + ", " +
                                          format_point(y) + ")"),
        node_(std::move(node)),
        x_(x),
        y_(y) {}

  const std::string& node() const noexcept { return node_; }
  double x() const noexcept { return x_; }
  double y() const noexcept { return y_; }

 private:
  static std::string format_point(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  }

  std::string node_;
  double x_;
  double y_;
};

// ----------------------------------------------------------------------------
// Expr
// ----------------------------------------------------------------------------

class Expr {
  struct Node {
    NodeKind kind;
    Func func = Func::Exp;
    double value = 0.0;
    bool has_x = false;
    bool has_y = false;
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

 public:
  Expr() : Expr(number(0.0)) {}

  static Expr number(double v) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Number;
    n->value = v;
    return Expr(std::move(n));
  }
  static Expr var(Var v) {
    auto n = std::make_shared<Node>();
    n->kind = v == Var::X ? NodeKind::VarX : NodeKind::VarY;
    n->has_x = v == Var::X;
    n->has_y = v == Var::Y;
    return Expr(std::move(n));
  }
  static Expr x() { return var(Var::X); }
  static Expr y() { return var(Var::Y); }
  static Expr pi() { return leaf(NodeKind::Pi); }
  static Expr e() { return leaf(NodeKind::E); }

  static Expr neg(const Expr& u) { return unary(NodeKind::Neg, u); }
  static Expr add(const Expr& l, const Expr& r) { return binary(NodeKind::Add, l, r); }
  static Expr sub(const Expr& l, const Expr& r) { return binary(NodeKind::Sub, l, r); }
  static Expr mul(const Expr& l, const Expr& r) { return binary(NodeKind::Mul, l, r); }
  static Expr div(const Expr& l, const Expr& r) { return binary(NodeKind::Div, l, r); }
  static Expr call(Func f, const Expr& u) {
    auto n = std::make_shared<Node>();
    n->kind = NodeKind::Func;
    n->func = f;
    n->has_x = u.node_->has_x;
    n->has_y = u.node_->has_y;
    n->lhs = u.node_;
    return Expr(std::move(n));
  }

  /// Throws InvalidConfig when the exponent/base pair breaks the power rule.
  static Expr pow(const Expr& base, const Expr& exponent) {
    if (!power_allowed(base, exponent)) {
      throw Error(ErrorCode::InvalidConfig,
                  "non-integer exponent requires a syntactically positive base");
    }
    return binary(NodeKind::Pow, base, exponent);
  }

  static bool power_allowed(const Expr& base, const Expr& exponent) noexcept {
    return exponent.is_nonneg_integer_literal() || base.is_syntactically_positive();
  }

  NodeKind kind() const noexcept { return node_->kind; }
  Func func() const noexcept { return node_->func; }
  double value() const noexcept { return node_->value; }
  Expr lhs() const { return Expr(node_->lhs); }
  Expr rhs() const { return Expr(node_->rhs); }

  bool depends_on(Var v) const noexcept {
    return v == Var::X ? node_->has_x : node_->has_y;
  }
  bool is_number() const noexcept { return node_->kind == NodeKind::Number; }
  bool is_number(double v) const noexcept { return is_number() && node_->value == v; }
  bool is_nonneg_integer_literal() const noexcept {
    return is_number() && node_->value >= 0.0 &&
           std::floor(node_->value) == node_->value && std::isfinite(node_->value);
  }
  bool is_syntactically_positive() const noexcept {
    switch (node_->kind) {
      case NodeKind::Number: return node_->value > 0.0;
      case NodeKind::Pi:
      case NodeKind::E: return true;
      case NodeKind::Func: return node_->func == Func::Exp || node_->func == Func::Sqrt;
      default: return false;
    }
  }

  /// Number of nodes in the tree.
  std::size_t size() const noexcept { return count(node_.get()); }

  friend bool operator==(const Expr& l, const Expr& r) noexcept {
    return equal(l.node_.get(), r.node_.get());
  }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  static Expr leaf(NodeKind k) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    return Expr(std::move(n));
  }
  static Expr unary(NodeKind k, const Expr& u) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->has_x = u.node_->has_x;
    n->has_y = u.node_->has_y;
    n->lhs = u.node_;
    return Expr(std::move(n));
  }
  static Expr binary(NodeKind k, const Expr& l, const Expr& r) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->has_x = l.node_->has_x || r.node_->has_x;
    n->has_y = l.node_->has_y || r.node_->has_y;
    n->lhs = l.node_;
    n->rhs = r.node_;
    return Expr(std::move(n));
  }

  static std::size_t count(const Node* n) noexcept {
    if (n == nullptr) return 0;
    return 1 + count(n->lhs.get()) + count(n->rhs.get());
  }

  static bool equal(const Node* l, const Node* r) noexcept {
    if (l == r) return true;
    if (l == nullptr || r == nullptr) return false;
    if (l->kind != r->kind) return false;
    if (l->kind == NodeKind::Number && l->value != r->value) return false;
    if (l->kind == NodeKind::Func && l->func != r->func) return false;
    return equal(l->lhs.get(), r->lhs.get()) && equal(l->rhs.get(), r->rhs.get());
  }

  std::shared_ptr<const Node> node_;
};

// ----------------------------------------------------------------------------
// Printing
// ----------------------------------------------------------------------------

namespace detail {

inline int print_precedence(const Expr& e) noexcept {
  switch (e.kind()) {
    case NodeKind::Add:
    case NodeKind::Sub: return 1;
    case NodeKind::Mul:
    case NodeKind::Div: return 2;
    case NodeKind::Neg: return 3;
    case NodeKind::Pow: return 4;
    default: return 5;
  }
}

inline std::string format_number(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  // Negative literals only arise from folding; "(-k)" parses back to -(k).
  if (v < 0.0 || (v == 0.0 && std::signbit(v))) return "(" + s + ")";
  return s;
}

inline void print_into(const Expr& e, std::string& out);

inline void print_wrapped(const Expr& e, bool wrap, std::string& out) {
  if (wrap) out += '(';
  print_into(e, out);
  if (wrap) out += ')';
}

inline void print_into(const Expr& e, std::string& out) {
  switch (e.kind()) {
    case NodeKind::Number: out += format_number(e.value()); return;
    case NodeKind::VarX: out += 'x'; return;
    case NodeKind::VarY: out += 'y'; return;
    case NodeKind::Pi: out += "pi"; return;
    case NodeKind::E: out += 'e'; return;
    case NodeKind::Neg:
      out += '-';
      print_wrapped(e.lhs(), print_precedence(e.lhs()) < 3, out);
      return;
    case NodeKind::Func:
      out += func_name(e.func());
      out += '(';
      print_into(e.lhs(), out);
      out += ')';
      return;
    case NodeKind::Pow:
      print_wrapped(e.lhs(), print_precedence(e.lhs()) < 5, out);
      out += '^';
      print_wrapped(e.rhs(), print_precedence(e.rhs()) < 3, out);
      return;
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::Div: {
      const int p = print_precedence(e);
      print_wrapped(e.lhs(), print_precedence(e.lhs()) < p, out);
      switch (e.kind()) {
        case NodeKind::Add: out += " + "; break;
        case NodeKind::Sub: out += " - "; break;
        case NodeKind::Mul: out += '*'; break;
        default: out += '/'; break;
      }
      print_wrapped(e.rhs(), print_precedence(e.rhs()) <= p, out);
      return;
    }
  }
}

}  // namespace detail

/// Canonical text form; `parse(to_string(e)) == e` for trees whose literals
/// are non-negative.
inline std::string to_string(const Expr& e) {
  std::string out;
  detail::print_into(e, out);
  return out;
}

// ----------------------------------------------------------------------------
// Parsing
// ----------------------------------------------------------------------------

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Expr parse_all() {
    skip_space();
    if (pos_ == text_.size()) throw SyntaxError(pos_, "empty expression");
    Expr e = parse_expr();
    skip_space();
    if (pos_ != text_.size()) {
      throw SyntaxError(pos_, std::string("unexpected '") + text_[pos_] + "'");
    }
    return e;
  }

 private:
  Expr parse_expr() {
    Expr lhs = parse_term();
    for (;;) {
      skip_space();
      if (accept('+')) {
        lhs = Expr::add(lhs, parse_term());
      } else if (accept('-')) {
        lhs = Expr::sub(lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_term() {
    Expr lhs = parse_factor();
    for (;;) {
      skip_space();
      if (accept('*')) {
        lhs = Expr::mul(lhs, parse_factor());
      } else if (accept('/')) {
        lhs = Expr::div(lhs, parse_factor());
      } else {
        return lhs;
      }
    }
  }

  Expr parse_factor() {
    skip_space();
    if (accept('-')) return Expr::neg(parse_factor());
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    skip_space();
    const std::size_t caret = pos_;
    if (!accept('^')) return base;
    Expr exponent = parse_factor();
    if (!Expr::power_allowed(base, exponent)) {
      throw SyntaxError(caret,
                        "exponent must be a non-negative integer literal unless "
                        "the base is exp(...), sqrt(...), pi, e or a positive "
                        "literal");
    }
    return Expr::pow(base, exponent);
  }

  Expr parse_atom() {
    skip_space();
    if (pos_ == text_.size()) throw SyntaxError(pos_, "unexpected end of input");
    const char ch = text_[pos_];
    if (is_digit(ch) || ch == '.') return parse_number();
    if (is_ident_start(ch)) return parse_identifier();
    if (accept('(')) {
      Expr inner = parse_expr();
      skip_space();
      expect(')');
      return inner;
    }
    throw SyntaxError(pos_, std::string("unexpected '") + ch + "'");
  }

  Expr parse_number() {
    const std::size_t start = pos_;
    std::size_t digits = 0;
    while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_, ++digits;
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_, ++digits;
    }
    if (digits == 0) throw SyntaxError(start, "malformed number");
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t look = pos_ + 1;
      if (look < text_.size() && (text_[look] == '+' || text_[look] == '-')) ++look;
      if (look < text_.size() && is_digit(text_[look])) {
        pos_ = look;
        while (pos_ < text_.size() && is_digit(text_[pos_])) ++pos_;
      }
    }
    double v = 0.0;
    const char* first = text_.data() + start;
    const char* last = text_.data() + pos_;
    auto res = std::from_chars(first, last, v);
    if (res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
      throw SyntaxError(start, "malformed number");
    }
    return Expr::number(v);
  }

  Expr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    const std::string_view name = text_.substr(start, pos_ - start);
    if (name == "x") return Expr::x();
    if (name == "y") return Expr::y();
    if (name == "pi") return Expr::pi();
    if (name == "e") return Expr::e();
    Func f{};
    if (name == "exp") {
      f = Func::Exp;
    } else if (name == "log") {
      f = Func::Log;
    } else if (name == "sin") {
      f = Func::Sin;
    } else if (name == "cos") {
      f = Func::Cos;
    } else if (name == "sqrt") {
      f = Func::Sqrt;
    } else if (name == "abs") {
      f = Func::Abs;
    } else {
      throw UnknownIdentifier(start, std::string(name));
    }
    skip_space();
    expect('(');
    Expr arg = parse_expr();
    skip_space();
    expect(')');
    return Expr::call(f, arg);
  }

  void skip_space() noexcept {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' ||
                                   text_[pos_] == '\n' || text_[pos_] == '\r')) {
      ++pos_;
    }
  }

  bool accept(char ch) noexcept {
    if (pos_ < text_.size() && text_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char ch) {
    if (!accept(ch)) {
      if (pos_ == text_.size()) {
        throw SyntaxError(pos_, std::string("expected '") + ch + "', got end of input");
      }
      throw SyntaxError(pos_, std::string("expected '") + ch + "', got '" +
                                  text_[pos_] + "'");
    }
  }

  static bool is_digit(char ch) noexcept { return ch >= '0' && ch <= '9'; }
  static bool is_ident_start(char ch) noexcept {
    return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch == '_';
  }
  static bool is_ident_char(char ch) noexcept { return is_ident_start(ch) || is_digit(ch); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse(std::string_view text) { return detail::Parser(text).parse_all(); }

// ----------------------------------------------------------------------------
// Evaluation
// ----------------------------------------------------------------------------

namespace detail {

template <typename Real>
Real eval_node(const Expr& e, Real x, Real y) {
  auto fail = [&](const char* why) -> Real {
    throw DomainError(to_string(e), static_cast<double>(x), static_cast<double>(y), why);
  };
  Real out{};
  switch (e.kind()) {
    case NodeKind::Number: return static_cast<Real>(e.value());
    case NodeKind::VarX: return x;
    case NodeKind::VarY: return y;
    case NodeKind::Pi: return std::numbers::pi_v<Real>;
    case NodeKind::E: return std::numbers::e_v<Real>;
    case NodeKind::Neg: return -eval_node(e.lhs(), x, y);
    case NodeKind::Add: out = eval_node(e.lhs(), x, y) + eval_node(e.rhs(), x, y); break;
    case NodeKind::Sub: out = eval_node(e.lhs(), x, y) - eval_node(e.rhs(), x, y); break;
    case NodeKind::Mul: out = eval_node(e.lhs(), x, y) * eval_node(e.rhs(), x, y); break;
    case NodeKind::Div: {
      const Real num = eval_node(e.lhs(), x, y);
      const Real den = eval_node(e.rhs(), x, y);
      if (den == Real(0)) return fail("division by zero");
      out = num / den;
      break;
    }
    case NodeKind::Pow: {
      const Real base = eval_node(e.lhs(), x, y);
      const Real ex = eval_node(e.rhs(), x, y);
      if (base < Real(0) && std::floor(ex) != ex) return fail("negative base with non-integer exponent");
      if (base == Real(0) && ex < Real(0)) return fail("zero base with negative exponent");
      out = std::pow(base, ex);
      break;
    }
    case NodeKind::Func: {
      const Real u = eval_node(e.lhs(), x, y);
      switch (e.func()) {
        case Func::Exp: out = std::exp(u); break;
        case Func::Log:
          if (!(u > Real(0))) return fail("log of non-positive argument");
          out = std::log(u);
          break;
        case Func::Sin: out = std::sin(u); break;
        case Func::Cos: out = std::cos(u); break;
        case Func::Sqrt:
          if (u < Real(0)) return fail("sqrt of negative argument");
          out = std::sqrt(u);
          break;
        case Func::Abs: out = std::abs(u); break;
      }
      break;
    }
  }
  if (!std::isfinite(out)) return fail("non-finite result");
  return out;
}

}  // namespace detail

/// Evaluates `e` at (x, y). Throws DomainError outside the real domain
/// (log of non-positive, sqrt of negative, division by zero, overflow).
template <typename Real = double>
Real eval(const Expr& e, Real x, Real y) {
  return detail::eval_node<Real>(e, x, y);
}

// ----------------------------------------------------------------------------
// Simplifying constructors (constant folding and 0/1 identities only)
// ----------------------------------------------------------------------------

namespace simplify {

inline Expr fold_or(double v, Expr otherwise) {
  return std::isfinite(v) ? Expr::number(v) : std::move(otherwise);
}

inline Expr neg(const Expr& u) {
  if (u.is_number()) return Expr::number(-u.value());
  if (u.kind() == NodeKind::Neg) return u.lhs();
  return Expr::neg(u);
}

inline Expr add(const Expr& l, const Expr& r) {
  if (l.is_number() && r.is_number()) return fold_or(l.value() + r.value(), Expr::add(l, r));
  if (l.is_number(0.0)) return r;
  if (r.is_number(0.0)) return l;
  return Expr::add(l, r);
}

inline Expr sub(const Expr& l, const Expr& r) {
  if (l.is_number() && r.is_number()) return fold_or(l.value() - r.value(), Expr::sub(l, r));
  if (r.is_number(0.0)) return l;
  if (l.is_number(0.0)) return neg(r);
  return Expr::sub(l, r);
}

inline Expr mul(const Expr& l, const Expr& r) {
  if (l.is_number(0.0) || r.is_number(0.0)) return Expr::number(0.0);
  if (l.is_number() && r.is_number()) return fold_or(l.value() * r.value(), Expr::mul(l, r));
  if (l.is_number(1.0)) return r;
  if (r.is_number(1.0)) return l;
  return Expr::mul(l, r);
}

inline Expr div(const Expr& l, const Expr& r) {
  if (l.is_number(0.0)) return Expr::number(0.0);
  if (r.is_number(1.0)) return l;
  if (l.is_number() && r.is_number() && r.value() != 0.0) {
    return fold_or(l.value() / r.value(), Expr::div(l, r));
  }
  return Expr::div(l, r);
}

inline Expr pow(const Expr& base, const Expr& exponent) {
  if (exponent.is_number(0.0)) return Expr::number(1.0);
  if (exponent.is_number(1.0)) return base;
  if (base.is_number() && exponent.is_number() && Expr::power_allowed(base, exponent)) {
    return fold_or(std::pow(base.value(), exponent.value()), Expr::pow(base, exponent));
  }
  return Expr::pow(base, exponent);
}

inline Expr call(Func f, const Expr& u) { return Expr::call(f, u); }

}  // namespace simplify

// ----------------------------------------------------------------------------
// Differentiation
// ----------------------------------------------------------------------------

class NotDifferentiable : public Error {
 public:
  explicit NotDifferentiable(const std::string& message)
      : Error(ErrorCode::NotDifferentiable, message) {}
};

/// Symbolic partial derivative with respect to `v`. `abs(u)` differentiates
/// to u*u'/abs(u), which is undefined where u = 0.
inline Expr differentiate(const Expr& e, Var v) {
  namespace s = simplify;
  if (!e.depends_on(v)) return Expr::number(0.0);
  switch (e.kind()) {
    case NodeKind::VarX:
    case NodeKind::VarY: return Expr::number(1.0);
    case NodeKind::Neg: return s::neg(differentiate(e.lhs(), v));
    case NodeKind::Add: return s::add(differentiate(e.lhs(), v), differentiate(e.rhs(), v));
    case NodeKind::Sub: return s::sub(differentiate(e.lhs(), v), differentiate(e.rhs(), v));
    case NodeKind::Mul: {
      const Expr u = e.lhs();
      const Expr w = e.rhs();
      return s::add(s::mul(differentiate(u, v), w), s::mul(u, differentiate(w, v)));
    }
    case NodeKind::Div: {
      const Expr u = e.lhs();
      const Expr w = e.rhs();
      const Expr du = differentiate(u, v);
      const Expr dw = differentiate(w, v);
      if (dw.is_number(0.0)) return s::div(du, w);
      return s::div(s::sub(s::mul(du, w), s::mul(u, dw)), s::pow(w, Expr::number(2.0)));
    }
    case NodeKind::Pow: {
      const Expr u = e.lhs();
      const Expr g = e.rhs();
      if (g.is_nonneg_integer_literal()) {
        const double n = g.value();
        return s::mul(s::mul(Expr::number(n), s::pow(u, Expr::number(n - 1.0))),
                      differentiate(u, v));
      }
      // u^g = exp(g log u) with u > 0 guaranteed by the power rule.
      const Expr du = differentiate(u, v);
      const Expr dg = differentiate(g, v);
      const Expr inner = s::add(s::mul(dg, s::call(Func::Log, u)), s::div(s::mul(g, du), u));
      return s::mul(e, inner);
    }
    case NodeKind::Func: {
      const Expr u = e.lhs();
      const Expr du = differentiate(u, v);
      switch (e.func()) {
        case Func::Exp: return s::mul(e, du);
        case Func::Log: return s::div(du, u);
        case Func::Sin: return s::mul(s::call(Func::Cos, u), du);
        case Func::Cos: return s::neg(s::mul(s::call(Func::Sin, u), du));
        case Func::Sqrt: return s::div(du, s::mul(Expr::number(2.0), e));
        case Func::Abs: return s::div(s::mul(u, du), e);
      }
      break;
    }
    default: break;
  }
  return Expr::number(0.0);
}

namespace detail {

inline bool has_coupled_abs(const Expr& e) {
  if (e.kind() == NodeKind::Func && e.func() == Func::Abs && e.depends_on(Var::X) &&
      e.depends_on(Var::Y)) {
    return true;
  }
  switch (e.kind()) {
    case NodeKind::Neg:
    case NodeKind::Func: return has_coupled_abs(e.lhs());
    case NodeKind::Add:
    case NodeKind::Sub:
    case NodeKind::Mul:
    case NodeKind::Div:
    case NodeKind::Pow: return has_coupled_abs(e.lhs()) || has_coupled_abs(e.rhs());
    default: return false;
  }
}

}  // namespace detail

/// The mixed partial d/dy (d/dx e). Throws NotDifferentiable when an abs
/// node depends on both x and y.
inline Expr differentiate_xy(const Expr& e) {
  if (detail::has_coupled_abs(e)) {
    throw NotDifferentiable("abs(...) of an argument depending on both x and y "
                            "is not twice differentiable: " +
                            to_string(e));
  }
  return differentiate(differentiate(e, Var::X), Var::Y);
}

// ----------------------------------------------------------------------------
// FunctionModel
// ----------------------------------------------------------------------------

/// A parsed integrand together with its symbolic mixed partial.
struct FunctionModel {
  Expr f;
  Expr fxy;
  std::string source_text;

  static FunctionModel from_text(std::string_view text) {
    Expr f = parse(text);
    Expr fxy = differentiate_xy(f);
    return {std::move(f), std::move(fxy), std::string(text)};
  }

  static FunctionModel from_expr(const Expr& f) {
    return {f, differentiate_xy(f), to_string(f)};
  }

  double operator()(double x, double y) const { return eval(f, x, y); }
  double mixed(double x, double y) const { return eval(fxy, x, y); }
};

}  // namespace hhcub
