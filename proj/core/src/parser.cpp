// Recursive-descent parser for one-variable expressions.
//
//   expr     := term (('+'|'-') term)*
//   term     := unary (('*'|'/') unary)*
//   unary    := '-' unary | power
//   power    := atom ('^' exponent)?
//   exponent := '-' exponent | power          (must fold to a constant)
//   atom     := number | 'x' | 'pi' | 'e' | ident '(' expr ')' | '(' expr ')'
//
// '^' binds tighter than unary minus and is right-associative, so -x^2 is
// -(x^2) and 2^3^2 is 2^(3^2).

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <string>

#include "mvtlab/expr.hpp"

namespace mvtlab {
namespace {

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  Expr run() {
    Expr e = expr();
    skip_ws();
    if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
    throw ParseError(msg, at);
  }

  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= src_.size()) fail(std::string("expected '") + c + "' but input ended");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr expr() {
    Expr lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = Expr::binary(BinaryOp::Add, lhs, term());
      } else if (accept('-')) {
        lhs = Expr::binary(BinaryOp::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  Expr term() {
    Expr lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = Expr::binary(BinaryOp::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = Expr::binary(BinaryOp::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  Expr unary() {
    if (accept('-')) return Expr::unary(UnaryOp::Neg, unary());
    return power();
  }

  Expr power() {
    Expr base = atom();
    if (!accept('^')) return base;
    skip_ws();
    const std::size_t at = pos_;
    const std::size_t x_before = x_count_;
    Expr ex = exponent();
    if (x_count_ != x_before) fail_at("non-constant exponent", at);
    if (!ex.is_constant()) {
      try {
        ex = Expr::constant(eval(ex, 0.0));
      } catch (const DomainError& err) {
        fail_at(std::string("invalid constant exponent: ") + err.what(), at);
      }
    }
    return Expr::binary(BinaryOp::Pow, base, ex);
  }

  Expr exponent() {
    if (accept('-')) return Expr::unary(UnaryOp::Neg, exponent());
    return power();
  }

  Expr atom() {
    skip_ws();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const std::size_t start = pos_;
    const char c = src_[pos_];

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();

    if (accept('(')) {
      Expr inner = expr();
      expect(')');
      return inner;
    }

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t end = pos_;
      while (end < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[end])) || src_[end] == '_'))
        ++end;
      const std::string_view ident = src_.substr(pos_, end - pos_);
      pos_ = end;

      if (ident == "x") {
        ++x_count_;
        return Expr::variable();
      }
      if (ident == "pi") return Expr::constant(std::numbers::pi);
      if (ident == "e") return Expr::constant(std::numbers::e);

      UnaryOp op{};
      if (ident == "sin") op = UnaryOp::Sin;
      else if (ident == "cos") op = UnaryOp::Cos;
      else if (ident == "exp") op = UnaryOp::Exp;
      else if (ident == "log") op = UnaryOp::Log;
      else if (ident == "sqrt") op = UnaryOp::Sqrt;
      else if (ident == "sinh") op = UnaryOp::Sinh;
      else if (ident == "cosh") op = UnaryOp::Cosh;
      else if (ident == "tanh") op = UnaryOp::Tanh;
      else fail_at("unknown identifier '" + std::string(ident) + "'", start);

      expect('(');
      Expr arg = expr();
      expect(')');
      return Expr::unary(op, arg);
    }

    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    std::size_t end = pos_;
    bool digits = false;
    while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) {
      ++end;
      digits = true;
    }
    if (end < src_.size() && src_[end] == '.') {
      ++end;
      while (end < src_.size() && std::isdigit(static_cast<unsigned char>(src_[end]))) {
        ++end;
        digits = true;
      }
    }
    if (!digits) fail_at("malformed number", start);
    // Exponent part only when followed by digits; a bare 'e' is Euler's number
    // and would be a syntax error here anyway.
    if (end < src_.size() && (src_[end] == 'e' || src_[end] == 'E')) {
      std::size_t k = end + 1;
      if (k < src_.size() && (src_[k] == '+' || src_[k] == '-')) ++k;
      if (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) {
        while (k < src_.size() && std::isdigit(static_cast<unsigned char>(src_[k]))) ++k;
        end = k;
      }
    }
    const std::string text(src_.substr(start, end - start));
    const double v = std::strtod(text.c_str(), nullptr);
    if (!std::isfinite(v)) fail_at("number out of range", start);
    pos_ = end;
    return Expr::constant(v);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t x_count_ = 0;
};

}  // namespace

Expr parse(std::string_view source) { return Parser(source).run(); }

}  // namespace mvtlab
