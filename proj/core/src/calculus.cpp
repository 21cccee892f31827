#include "mvtlab/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace mvtlab {

Interval::Interval(double lo_, double hi_, bool open_lo_, bool open_hi_)
    : lo(lo_), hi(hi_), open_lo(open_lo_), open_hi(open_hi_) {
  if (!std::isfinite(lo) || !std::isfinite(hi)) throw std::invalid_argument("interval ends must be finite");
  if (!(lo < hi)) throw std::invalid_argument("interval requires lo < hi");
}

namespace {
std::string describe(double lo, double hi) {
  std::ostringstream os;
  os.precision(17);
  os << "adaptive quadrature exhausted its depth on [" << lo << ", " << hi << "]";
  return os.str();
}
}  // namespace

QuadratureError::QuadratureError(double lo, double hi)
    : std::runtime_error(describe(lo, hi)), lo_(lo), hi_(hi) {}

namespace {

struct Simpson {
  const RealFunction& fn;
  int max_depth;

  double recurse(double a, double b, double fa, double fm, double fb, double whole, double eps,
                 int depth) const {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = fn(lm);
    const double frm = fn(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (std::abs(delta) <= 15.0 * eps) return left + right + delta / 15.0;
    if (depth >= max_depth) throw QuadratureError(a, b);
    return recurse(a, m, fa, flm, fm, left, 0.5 * eps, depth + 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * eps, depth + 1);
  }
};

}  // namespace

double integrate(const RealFunction& fn, double a, double b, const QuadratureSpec& spec) {
  if (!(spec.abs_tol > 0.0)) throw std::invalid_argument("quadrature abs_tol must be positive");
  if (spec.max_depth < 1) throw std::invalid_argument("quadrature max_depth must be positive");
  if (a == b) return 0.0;
  if (a > b) return -integrate(fn, b, a, spec);
  // Four initial panels keep a single Simpson rule from being fooled by an
  // integrand that happens to vanish at a, (a+b)/2 and b.
  constexpr int kPanels = 4;
  const Simpson s{fn, spec.max_depth};
  const double width = (b - a) / kPanels;
  double total = 0.0;
  double left = a;
  double f_left = fn(a);
  for (int k = 0; k < kPanels; ++k) {
    const double right = (k + 1 == kPanels) ? b : a + (k + 1) * width;
    const double mid = 0.5 * (left + right);
    const double f_mid = fn(mid);
    const double f_right = fn(right);
    const double whole = (right - left) / 6.0 * (f_left + 4.0 * f_mid + f_right);
    total += s.recurse(left, right, f_left, f_mid, f_right, whole, spec.abs_tol / kPanels, 0);
    left = right;
    f_left = f_right;
  }
  return total;
}

double integrate(const Expr& fn, double a, double b, const QuadratureSpec& spec) {
  return integrate(RealFunction([&fn](double t) { return eval(fn, t); }), a, b, spec);
}

double central_diff(const RealFunction& fn, double x, int order, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("central_diff step must be positive");
  switch (order) {
    case 1: return (fn(x + h) - fn(x - h)) / (2.0 * h);
    case 2: return (fn(x + h) - 2.0 * fn(x) + fn(x - h)) / (h * h);
    case 3:
      return (fn(x + 2.0 * h) - 2.0 * fn(x + h) + 2.0 * fn(x - h) - fn(x - 2.0 * h)) /
             (2.0 * h * h * h);
    default: throw std::invalid_argument("central_diff order must be 1, 2 or 3");
  }
}

double central_diff(const Expr& fn, double x, int order, double h) {
  return central_diff(RealFunction([&fn](double t) { return eval(fn, t); }), x, order, h);
}

std::vector<double> chebyshev_points(const Interval& interval, int n) {
  if (n < 1) throw std::invalid_argument("chebyshev_points needs n >= 1");
  std::vector<double> xs(static_cast<std::size_t>(n));
  const double mid = interval.midpoint();
  const double half = 0.5 * interval.width();
  for (int k = 0; k < n; ++k) {
    // k = 0 gives the largest node; fill from the back so the result ascends.
    const double t = std::cos(std::numbers::pi * (2.0 * k + 1.0) / (2.0 * n));
    xs[static_cast<std::size_t>(n - 1 - k)] = mid + half * t;
  }
  return xs;
}

// ---------------------------------------------------------------------------
// Zero set

namespace {

constexpr int kBisectionSteps = 50;

// Boundary between x_in (where `good` holds) and x_out (where it fails),
// returned on the good side.
template <class Pred>
double bisect_boundary(const Pred& good, double x_in, double x_out) {
  for (int i = 0; i < kBisectionSteps; ++i) {
    const double mid = 0.5 * (x_in + x_out);
    if (mid == x_in || mid == x_out) break;
    if (good(mid)) x_in = mid;
    else x_out = mid;
  }
  return x_in;
}

}  // namespace

ZeroSetDecomposition zero_set(const RealFunction& g, const Interval& domain, int grid_points) {
  if (grid_points < 16) throw std::invalid_argument("zero_set needs at least 16 grid points");

  const auto n = static_cast<std::size_t>(grid_points);
  std::vector<double> xs(n);
  std::vector<double> gs(n);
  const double step = domain.width() / static_cast<double>(n - 1);
  double gmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = (i + 1 == n) ? domain.hi : domain.lo + static_cast<double>(i) * step;
    gs[i] = g(xs[i]);
    gmax = std::max(gmax, std::abs(gs[i]));
  }

  ZeroSetDecomposition out;
  out.grid_points = grid_points;
  out.zero_threshold = kRelativeZeroThreshold * gmax;
  if (gmax == 0.0) return out;

  const double thr = out.zero_threshold;
  auto sign_of = [thr](double v) { return v > thr ? 1 : (v < -thr ? -1 : 0); };

  std::size_t i = 0;
  while (i < n) {
    const int s = sign_of(gs[i]);
    if (s == 0) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j + 1 < n && sign_of(gs[j + 1]) == s) ++j;

    auto good = [&g, s, thr](double x) {
      const double v = g(x);
      return s > 0 ? v > thr : v < -thr;
    };

    double lo = xs[i];
    bool open_lo = domain.open_lo;
    if (i > 0) {
      lo = bisect_boundary(good, xs[i], xs[i - 1]);
      open_lo = true;
    }
    double hi = xs[j];
    bool open_hi = domain.open_hi;
    if (j + 1 < n) {
      hi = bisect_boundary(good, xs[j], xs[j + 1]);
      open_hi = true;
    }
    if (hi - lo >= kMinComponentWidth) out.nonvanishing.emplace_back(lo, hi, open_lo, open_hi);
    i = j + 1;
  }
  return out;
}

ZeroSetDecomposition zero_set(const SmoothFn& g, const Interval& domain, int grid_points) {
  const Expr& e = g.d0();
  return zero_set(RealFunction([&e](double x) { return eval(e, x); }), domain, grid_points);
}

}  // namespace mvtlab
