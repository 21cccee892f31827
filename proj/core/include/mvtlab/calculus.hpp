#pragma once

// Numerical substrate: adaptive quadrature, central finite differences,
// Chebyshev sampling and localisation of the set where a function vanishes.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mvtlab/expr.hpp"

namespace mvtlab {

using RealFunction = std::function<double(double)>;

/// Bounded interval [lo, hi] with per-end openness flags. lo < hi, both finite.
struct Interval {
  double lo = 0.0;
  double hi = 1.0;
  bool open_lo = false;
  bool open_hi = false;

  Interval() = default;
  Interval(double lo, double hi, bool open_lo = false, bool open_hi = false);

  static Interval open(double lo, double hi) { return {lo, hi, true, true}; }

  double width() const noexcept { return hi - lo; }
  double midpoint() const noexcept { return 0.5 * (lo + hi); }
  /// Closed containment; openness only matters for reporting.
  bool contains(double x) const noexcept { return x >= lo && x <= hi; }
};

/// The default box standing in for the real line.
inline Interval default_domain() { return Interval(-5.0, 5.0); }

struct QuadratureSpec {
  double abs_tol = 1e-10;
  int max_depth = 30;
};

/// Adaptive Simpson ran out of depth on [lo, hi].
class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(double lo, double hi);
  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// Adaptive Simpson with Richardson acceptance. Antisymmetric in (a, b);
/// returns exactly 0 when a == b.
double integrate(const RealFunction& fn, double a, double b, const QuadratureSpec& spec = {});
double integrate(const Expr& fn, double a, double b, const QuadratureSpec& spec = {});

/// Second-order central stencils for derivative orders 1, 2, 3.
double central_diff(const RealFunction& fn, double x, int order, double h);
double central_diff(const Expr& fn, double x, int order, double h);

/// n Chebyshev points of the first kind mapped into the interval, ascending.
std::vector<double> chebyshev_points(const Interval& interval, int n);

/// Maximal sub-intervals of a domain where |g| stays above a relative threshold.
struct ZeroSetDecomposition {
  std::vector<Interval> nonvanishing;
  double zero_threshold = 0.0;
  int grid_points = 0;

  bool empty() const noexcept { return nonvanishing.empty(); }
};

/// Intervals narrower than this are dropped from a decomposition.
inline constexpr double kMinComponentWidth = 1e-3;
/// Relative zero threshold: this factor times max |g| over the grid.
inline constexpr double kRelativeZeroThreshold = 1e-9;

ZeroSetDecomposition zero_set(const RealFunction& g, const Interval& domain, int grid_points = 512);
ZeroSetDecomposition zero_set(const SmoothFn& g, const Interval& domain, int grid_points = 512);

}  // namespace mvtlab
