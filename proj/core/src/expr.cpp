#include "mvtlab/expr.hpp"

#include <cmath>
#include <cstdio>
#include <optional>
#include <utility>

namespace mvtlab {

struct Expr::Node {
  Kind kind = Kind::Constant;
  double value = 0.0;
  UnaryOp uop = UnaryOp::Neg;
  BinaryOp bop = BinaryOp::Add;
  std::optional<Expr> a;
  std::optional<Expr> b;
};

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string excerpt(const Expr& e) {
  std::string s = to_string(e);
  if (s.size() > 80) s = s.substr(0, 77) + "...";
  return s;
}

[[noreturn]] void domain_fail(const std::string& what, const Expr& node) {
  throw DomainError(what + " in '" + excerpt(node) + "'");
}

double checked(double v, const Expr& node) {
  if (!std::isfinite(v)) domain_fail("non-finite value", node);
  return v;
}

double apply_unary(UnaryOp op, double u, const Expr& node) {
  switch (op) {
    case UnaryOp::Neg: return -u;
    case UnaryOp::Sin: return std::sin(u);
    case UnaryOp::Cos: return std::cos(u);
    case UnaryOp::Exp: return checked(std::exp(u), node);
    case UnaryOp::Log:
      if (!(u > 0.0)) domain_fail("log of non-positive argument " + format_double(u), node);
      return std::log(u);
    case UnaryOp::Sqrt:
      if (u < 0.0) domain_fail("sqrt of negative argument " + format_double(u), node);
      return std::sqrt(u);
    case UnaryOp::Sinh: return checked(std::sinh(u), node);
    case UnaryOp::Cosh: return checked(std::cosh(u), node);
    case UnaryOp::Tanh: return std::tanh(u);
  }
  return 0.0;
}

double apply_binary(BinaryOp op, double l, double r, const Expr& node) {
  switch (op) {
    case BinaryOp::Add: return checked(l + r, node);
    case BinaryOp::Sub: return checked(l - r, node);
    case BinaryOp::Mul: return checked(l * r, node);
    case BinaryOp::Div:
      if (r == 0.0) domain_fail("division by zero", node);
      return checked(l / r, node);
    case BinaryOp::Pow:
      if (l == 0.0 && r < 0.0) domain_fail("division by zero (0 to a negative power)", node);
      if (l < 0.0 && r != std::trunc(r))
        domain_fail("negative base " + format_double(l) + " to non-integer power", node);
      return checked(std::pow(l, r), node);
  }
  return 0.0;
}

bool has_variable(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant: return false;
    case Expr::Kind::Variable: return true;
    case Expr::Kind::Unary: return has_variable(e.child());
    case Expr::Kind::Binary: return has_variable(e.lhs()) || has_variable(e.rhs());
  }
  return true;
}

// Folds a variable-free tree to a constant when it evaluates cleanly.
Expr fold_if_constant(Expr e) {
  if (e.is_constant() || has_variable(e)) return e;
  try {
    return Expr::constant(eval(e, 0.0));
  } catch (const DomainError&) {
    return e;
  }
}

}  // namespace

std::string_view name(UnaryOp op) noexcept {
  switch (op) {
    case UnaryOp::Neg: return "neg";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Log: return "log";
    case UnaryOp::Sqrt: return "sqrt";
    case UnaryOp::Sinh: return "sinh";
    case UnaryOp::Cosh: return "cosh";
    case UnaryOp::Tanh: return "tanh";
  }
  return "?";
}

std::string_view name(BinaryOp op) noexcept {
  switch (op) {
    case BinaryOp::Add: return "add";
    case BinaryOp::Sub: return "sub";
    case BinaryOp::Mul: return "mul";
    case BinaryOp::Div: return "div";
    case BinaryOp::Pow: return "pow";
  }
  return "?";
}

ParseError::ParseError(const std::string& message, std::size_t offset)
    : std::runtime_error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

Expr::Expr() {
  static const std::shared_ptr<const Node> zero = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Constant;
    n->value = 0.0;
    return std::shared_ptr<const Node>(std::move(n));
  }();
  node_ = zero;
}

Expr::Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Expr Expr::constant(double value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::variable() {
  static const Expr x = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::Variable;
    return Expr(std::move(n));
  }();
  return x;
}

Expr Expr::unary(UnaryOp op, Expr child) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Unary;
  n->uop = op;
  n->a = std::move(child);
  return Expr(std::move(n));
}

Expr Expr::binary(BinaryOp op, Expr lhs, Expr rhs) {
  if (op == BinaryOp::Pow && !rhs.is_constant())
    throw std::invalid_argument("pow exponent must be a constant");
  auto n = std::make_shared<Node>();
  n->kind = Kind::Binary;
  n->bop = op;
  n->a = std::move(lhs);
  n->b = std::move(rhs);
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const noexcept { return node_->kind; }
bool Expr::is_constant(double v) const noexcept {
  return node_->kind == Kind::Constant && node_->value == v;
}
double Expr::value() const noexcept { return node_->value; }
UnaryOp Expr::unary_op() const noexcept { return node_->uop; }
BinaryOp Expr::binary_op() const noexcept { return node_->bop; }
const Expr& Expr::child() const noexcept { return *node_->a; }
const Expr& Expr::lhs() const noexcept { return *node_->a; }
const Expr& Expr::rhs() const noexcept { return *node_->b; }

std::size_t Expr::size() const noexcept {
  switch (kind()) {
    case Kind::Constant:
    case Kind::Variable: return 1;
    case Kind::Unary: return 1 + child().size();
    case Kind::Binary: return 1 + lhs().size() + rhs().size();
  }
  return 1;
}

double Expr::operator()(double x) const { return eval(*this, x); }

double eval(const Expr& e, double x) {
  switch (e.kind()) {
    case Expr::Kind::Constant: return e.value();
    case Expr::Kind::Variable: return x;
    case Expr::Kind::Unary: return apply_unary(e.unary_op(), eval(e.child(), x), e);
    case Expr::Kind::Binary: {
      const double l = eval(e.lhs(), x);
      const double r = eval(e.rhs(), x);
      return apply_binary(e.binary_op(), l, r, e);
    }
  }
  return 0.0;
}

std::string to_string(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant:
      return e.value() < 0.0 ? "(-" + format_double(-e.value()) + ")" : format_double(e.value());
    case Expr::Kind::Variable: return "x";
    case Expr::Kind::Unary:
      if (e.unary_op() == UnaryOp::Neg) return "(-" + to_string(e.child()) + ")";
      return std::string(name(e.unary_op())) + "(" + to_string(e.child()) + ")";
    case Expr::Kind::Binary: {
      static constexpr std::string_view symbols[] = {" + ", " - ", " * ", " / ", "^"};
      return "(" + to_string(e.lhs()) + std::string(symbols[static_cast<int>(e.binary_op())]) +
             to_string(e.rhs()) + ")";
    }
  }
  return {};
}

// ---------------------------------------------------------------------------
// Folding builders

Expr operator-(const Expr& a) {
  if (a.is_constant()) return Expr::constant(-a.value());
  if (a.kind() == Expr::Kind::Unary && a.unary_op() == UnaryOp::Neg) return a.child();
  return Expr::unary(UnaryOp::Neg, a);
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() + b.value());
  if (a.is_constant(0.0)) return b;
  if (b.is_constant(0.0)) return a;
  return Expr::binary(BinaryOp::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() - b.value());
  if (b.is_constant(0.0)) return a;
  if (a.is_constant(0.0)) return -b;
  return Expr::binary(BinaryOp::Sub, a, b);
}

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant(0.0) || b.is_constant(0.0)) return Expr::constant(0.0);
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() * b.value());
  if (a.is_constant(1.0)) return b;
  if (b.is_constant(1.0)) return a;
  if (a.is_constant(-1.0)) return -b;
  if (b.is_constant(-1.0)) return -a;
  return Expr::binary(BinaryOp::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (b.is_constant(1.0)) return a;
  if (b.is_constant() && b.value() != 0.0) {
    if (a.is_constant()) return Expr::constant(a.value() / b.value());
  }
  if (a.is_constant(0.0) && !b.is_constant(0.0)) return Expr::constant(0.0);
  return Expr::binary(BinaryOp::Div, a, b);
}

Expr operator+(double a, const Expr& b) { return Expr::constant(a) + b; }
Expr operator+(const Expr& a, double b) { return a + Expr::constant(b); }
Expr operator-(double a, const Expr& b) { return Expr::constant(a) - b; }
Expr operator-(const Expr& a, double b) { return a - Expr::constant(b); }
Expr operator*(double a, const Expr& b) { return Expr::constant(a) * b; }
Expr operator*(const Expr& a, double b) { return a * Expr::constant(b); }
Expr operator/(const Expr& a, double b) { return a / Expr::constant(b); }

Expr pow(const Expr& base, double exponent) {
  if (exponent == 0.0) return Expr::constant(1.0);
  if (exponent == 1.0) return base;
  if (base.is_constant()) {
    Expr folded = fold_if_constant(Expr::binary(BinaryOp::Pow, base, Expr::constant(exponent)));
    if (folded.is_constant()) return folded;
  }
  return Expr::binary(BinaryOp::Pow, base, Expr::constant(exponent));
}

namespace {
Expr unary_folded(UnaryOp op, const Expr& e) {
  Expr node = Expr::unary(op, e);
  return e.is_constant() ? fold_if_constant(node) : node;
}
}  // namespace

Expr sin(const Expr& e) { return unary_folded(UnaryOp::Sin, e); }
Expr cos(const Expr& e) { return unary_folded(UnaryOp::Cos, e); }
Expr exp(const Expr& e) { return unary_folded(UnaryOp::Exp, e); }
Expr log(const Expr& e) { return unary_folded(UnaryOp::Log, e); }
Expr sqrt(const Expr& e) { return unary_folded(UnaryOp::Sqrt, e); }
Expr sinh(const Expr& e) { return unary_folded(UnaryOp::Sinh, e); }
Expr cosh(const Expr& e) { return unary_folded(UnaryOp::Cosh, e); }
Expr tanh(const Expr& e) { return unary_folded(UnaryOp::Tanh, e); }

// ---------------------------------------------------------------------------

Expr differentiate(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Constant: return Expr::constant(0.0);
    case Expr::Kind::Variable: return Expr::constant(1.0);
    case Expr::Kind::Unary: {
      const Expr& u = e.child();
      const Expr du = differentiate(u);
      switch (e.unary_op()) {
        case UnaryOp::Neg: return -du;
        case UnaryOp::Sin: return cos(u) * du;
        case UnaryOp::Cos: return -(sin(u) * du);
        case UnaryOp::Exp: return e * du;
        case UnaryOp::Log: return du / u;
        case UnaryOp::Sqrt: return du / (2.0 * e);
        case UnaryOp::Sinh: return cosh(u) * du;
        case UnaryOp::Cosh: return sinh(u) * du;
        case UnaryOp::Tanh: return (1.0 - pow(e, 2.0)) * du;
      }
      break;
    }
    case Expr::Kind::Binary: {
      const Expr& u = e.lhs();
      const Expr& v = e.rhs();
      const Expr du = differentiate(u);
      switch (e.binary_op()) {
        case BinaryOp::Add: return du + differentiate(v);
        case BinaryOp::Sub: return du - differentiate(v);
        case BinaryOp::Mul: return du * v + u * differentiate(v);
        case BinaryOp::Div: {
          const Expr dv = differentiate(v);
          if (dv.is_constant(0.0)) return du / v;
          return (du * v - u * dv) / pow(v, 2.0);
        }
        case BinaryOp::Pow: {
          const double c = v.value();
          return (c * pow(u, c - 1.0)) * du;
        }
      }
      break;
    }
  }
  return Expr::constant(0.0);
}

// ---------------------------------------------------------------------------

SmoothFn::SmoothFn(Expr e, std::string label) : label_(std::move(label)) {
  layers_[0] = std::move(e);
  for (int k = 1; k < 4; ++k) layers_[k] = differentiate(layers_[k - 1]);
  if (label_.empty()) label_ = to_string(layers_[0]);
}

SmoothFn SmoothFn::parse(std::string_view source) {
  return SmoothFn(mvtlab::parse(source), std::string(source));
}

const Expr& SmoothFn::layer(int order) const {
  if (order < 0 || order > 3) throw std::out_of_range("SmoothFn layer must be 0..3");
  return layers_[order];
}

SmoothFn SmoothFn::derivative() const {
  SmoothFn out = *this;
  for (int k = 0; k < 3; ++k) out.layers_[k] = layers_[k + 1];
  out.layers_[3] = differentiate(layers_[3]);
  out.label_ = label_ + "'";
  return out;
}

}  // namespace mvtlab
