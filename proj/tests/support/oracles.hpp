#pragma once

// Reference computations used only by the tests. They share no code with the
// library: plain trapezoid sums, Richardson-extrapolated difference quotients,
// brute-force grid maxima and bisection, all on std::function callables.

#include <cmath>
#include <functional>
#include <random>
#include <string>
#include <utility>
#include <vector>

namespace mvtlab::testing {

using Fn = std::function<double(double)>;

/// Composite trapezoid with n panels.
inline double trapezoid(const Fn& f, double a, double b, int n) {
  const double h = (b - a) / n;
  double sum = 0.5 * (f(a) + f(b));
  for (int i = 1; i < n; ++i) sum += f(a + i * h);
  return sum * h;
}

/// Trapezoid at n and 2n panels combined by one Richardson step (error O(h^4)).
inline double trapezoid_richardson(const Fn& f, double a, double b, int n = 4000) {
  const double coarse = trapezoid(f, a, b, n);
  const double fine = trapezoid(f, a, b, 2 * n);
  return (4.0 * fine - coarse) / 3.0;
}

/// Central difference of order 1, 2 or 3 with step h, refined by `levels`
/// Richardson steps over h, h/2, ... (each step removes the next even power).
inline double derivative(const Fn& f, double x, int order, double h, int levels = 1) {
  auto stencil = [&](double s) {
    switch (order) {
      case 1: return (f(x + s) - f(x - s)) / (2 * s);
      case 2: return (f(x + s) - 2 * f(x) + f(x - s)) / (s * s);
      default: return (f(x + 2 * s) - 2 * f(x + s) + 2 * f(x - s) - f(x - 2 * s)) / (2 * s * s * s);
    }
  };
  std::vector<double> row;
  for (int k = 0; k <= levels; ++k) row.push_back(stencil(h / (1 << k)));
  for (int level = 1; level <= levels; ++level) {
    const double w = std::pow(4.0, level);
    for (std::size_t k = 0; k + level < row.size(); ++k) row[k] = (w * row[k + 1] - row[k]) / (w - 1);
  }
  return row[0];
}

struct GridMax {
  double max_abs = 0.0;
  double a = 0.0;
  double b = 0.0;
};

/// Maximum of |r(a, b)| over a < b drawn from n equally spaced points.
inline GridMax grid_max(const std::function<double(double, double)>& r, double lo, double hi, int n) {
  GridMax out;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double a = lo + (hi - lo) * i / (n - 1);
      const double b = lo + (hi - lo) * j / (n - 1);
      const double v = std::abs(r(a, b));
      if (v > out.max_abs) out = {v, a, b};
    }
  }
  return out;
}

/// Root of f in [lo, hi] given a sign change.
inline double bisect(const Fn& f, double lo, double hi, int steps = 200) {
  double flo = f(lo);
  for (int i = 0; i < steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

/// Random expression source over x that evaluates finitely on [-2, 2]:
/// log and sqrt only see arguments bounded away from zero, divisions only
/// see denominators >= 1, and exponentials see damped arguments.
class ExprSourceGenerator {
 public:
  explicit ExprSourceGenerator(std::uint64_t seed) : rng_(seed) {}

  std::string operator()(int depth = 3) { return node(depth); }

 private:
  double constant() { return std::uniform_real_distribution<double>(-2.0, 2.0)(rng_); }
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  std::string num() {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", std::abs(constant()) + 0.1);
    return buf;
  }

  std::string bounded(int depth) { return "sin(" + node(depth) + ")"; }

  std::string node(int depth) {
    if (depth <= 0) return pick(2) == 0 ? "x" : num();
    const int d = depth - 1;
    switch (pick(12)) {
      case 0: return "(" + node(d) + " + " + node(d) + ")";
      case 1: return "(" + node(d) + " - " + node(d) + ")";
      case 2: return "(" + node(d) + " * " + node(d) + ")";
      case 3: return "(" + node(d) + " / (2 + " + bounded(d) + "))";
      case 4: return "sin(" + node(d) + ")";
      case 5: return "cos(" + node(d) + ")";
      case 6: return "exp(0.3 * " + bounded(d) + ")";
      case 7: return "log(2 + " + bounded(d) + ")";
      case 8: return "sqrt(1.5 + " + bounded(d) + ")";
      case 9: return "tanh(" + node(d) + ")";
      case 10: return "sinh(" + bounded(d) + ")";
      default: return "(" + node(d) + ")^" + std::to_string(2 + pick(2));
    }
  }

  std::mt19937_64 rng_;
};

}  // namespace mvtlab::testing
