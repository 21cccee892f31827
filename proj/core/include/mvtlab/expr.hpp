#pragma once

// Closed-form expressions of a single real variable x: parsing, evaluation,
// symbolic differentiation and printing.
//
// Expr is an immutable tree with shared structure; copies are cheap and all
// operations are pure, so values can be shared freely across threads.

#include <array>
#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mvtlab {

enum class UnaryOp { Neg, Sin, Cos, Exp, Log, Sqrt, Sinh, Cosh, Tanh };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

std::string_view name(UnaryOp op) noexcept;
std::string_view name(BinaryOp op) noexcept;

/// Malformed source text. offset() is the byte offset of the offending token.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation outside the domain of some node (log/sqrt of a negative,
/// division by zero, overflow to a non-finite value).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class Expr {
 public:
  enum class Kind { Constant, Variable, Unary, Binary };

  /// The constant 0.
  Expr();

  static Expr constant(double value);
  static Expr variable();
  static Expr unary(UnaryOp op, Expr child);
  /// Throws std::invalid_argument for Pow with a non-constant exponent.
  static Expr binary(BinaryOp op, Expr lhs, Expr rhs);

  Kind kind() const noexcept;
  bool is_constant() const noexcept { return kind() == Kind::Constant; }
  bool is_constant(double v) const noexcept;

  /// Only meaningful for the matching kind.
  double value() const noexcept;
  UnaryOp unary_op() const noexcept;
  BinaryOp binary_op() const noexcept;
  const Expr& child() const noexcept;
  const Expr& lhs() const noexcept;
  const Expr& rhs() const noexcept;

  /// Number of nodes in the tree.
  std::size_t size() const noexcept;

  double operator()(double x) const;

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node);
  std::shared_ptr<const Node> node_;
};

Expr parse(std::string_view source);

/// Finite value of e at x. Throws DomainError naming the offending node.
double eval(const Expr& e, double x);

/// Symbolic derivative with respect to x. Only trivial constant folding is
/// applied to the result (0*e, 1*e, e+0, constant subtrees).
Expr differentiate(const Expr& e);

/// Fully parenthesised text that parses back to an equivalent tree.
/// Constants are printed with 17 significant digits.
std::string to_string(const Expr& e);

// Builders with constant folding.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator+(double a, const Expr& b);
Expr operator+(const Expr& a, double b);
Expr operator-(double a, const Expr& b);
Expr operator-(const Expr& a, double b);
Expr operator*(double a, const Expr& b);
Expr operator*(const Expr& a, double b);
Expr operator/(const Expr& a, double b);
Expr pow(const Expr& base, double exponent);
Expr sin(const Expr& e);
Expr cos(const Expr& e);
Expr exp(const Expr& e);
Expr log(const Expr& e);
Expr sqrt(const Expr& e);
Expr sinh(const Expr& e);
Expr cosh(const Expr& e);
Expr tanh(const Expr& e);

/// A function bundled with its first three symbolic derivatives.
/// Layer k is the k-th derivative; layer k+1 is always differentiate(layer k).
class SmoothFn {
 public:
  SmoothFn() : SmoothFn(Expr{}) {}
  explicit SmoothFn(Expr e, std::string label = {});

  static SmoothFn parse(std::string_view source);

  const Expr& d0() const noexcept { return layers_[0]; }
  const Expr& d1() const noexcept { return layers_[1]; }
  const Expr& d2() const noexcept { return layers_[2]; }
  const Expr& d3() const noexcept { return layers_[3]; }
  const Expr& layer(int order) const;
  const std::string& label() const noexcept { return label_; }

  double operator()(double x) const { return mvtlab::eval(layers_[0], x); }
  double eval(int order, double x) const { return mvtlab::eval(layer(order), x); }

  /// The derivative as a SmoothFn (shifts the layers, differentiating once more).
  SmoothFn derivative() const;

 private:
  std::array<Expr, 4> layers_;
  std::string label_;
};

inline SmoothFn smooth(const Expr& e, std::string label = {}) {
  return SmoothFn(e, std::move(label));
}

}  // namespace mvtlab
