#pragma once

// Residuals of the fixed-mean Lagrange and Cauchy mean value equations
//
//   F(b) - F(a) = f(c) (b - a)
//   [F(b) - F(a)] g(c) = [G(b) - G(a)] f(c),      c = alpha a + beta b,
//
// together with the derived identities used to characterise their solutions:
// the Wronskian f'g - fg', the construction of f from g and the integral
// criterion for the symmetric (midpoint) case, and vertical symmetry of G.
//
// Every residual is reported raw together with a scale. A residual is
// treated as zero when |residual| <= tau * scale, tau = kDefaultTau.

#include <cmath>
#include <memory>
#include <span>
#include <vector>

#include "mvtlab/calculus.hpp"
#include "mvtlab/expr.hpp"

namespace mvtlab {

inline constexpr double kDefaultTau = 1e-8;

/// Fixed weights of the mean point c = alpha a + beta b, beta = 1 - alpha.
class MeanSpec {
 public:
  explicit MeanSpec(double alpha = 0.5);
  static MeanSpec midpoint() { return MeanSpec(0.5); }

  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return 1.0 - alpha_; }
  double mean(double a, double b) const noexcept { return alpha_ * a + beta() * b; }
  bool symmetric() const noexcept { return alpha_ == 0.5; }

 private:
  double alpha_;
};

struct ResidualValue {
  double residual = 0.0;
  double scale = 1.0;

  bool vanishes(double tau = kDefaultTau) const noexcept {
    return std::abs(residual) <= tau * scale;
  }
};

struct ResidualSample {
  double a = 0.0;
  double b = 0.0;
  double residual = 0.0;
  double scale = 1.0;
};

struct ResidualReport {
  std::vector<ResidualSample> samples;
  double max_abs = 0.0;
  double argmax_a = 0.0;
  double argmax_b = 0.0;
  /// Largest per-sample scale; the report passes when max_abs <= tau * scale.
  double scale = 1.0;
  /// Grid cells skipped because evaluation left the domain of some function.
  std::size_t domain_errors = 0;

  bool passes(double tau = kDefaultTau) const noexcept { return max_abs <= tau * scale; }
  void add(const ResidualSample& s);
};

// -- pointwise residuals ---------------------------------------------------

/// F(b) - F(a) - f(c)(b - a). Scale: max(1, |F(b)-F(a)|, |f(c)(b-a)|).
ResidualValue lagrange_terms(const SmoothFn& F, const MeanSpec& m, double a, double b);
double lagrange_residual(const SmoothFn& F, const MeanSpec& m, double a, double b);

/// beta f(x + beta h) + alpha f(x - alpha h) - f(x), the h-derivative of the
/// Lagrange equation written around the mean point.
double lagrange_derivative_identity(const SmoothFn& F, const MeanSpec& m, double x, double h);

/// [F(b)-F(a)] g(c) - [G(b)-G(a)] f(c).
/// Scale: max(1, |F(b)-F(a)| |g(c)|, |G(b)-G(a)| |f(c)|).
ResidualValue cauchy_terms(const SmoothFn& F, const SmoothFn& G, const MeanSpec& m, double a,
                           double b);
double cauchy_residual(const SmoothFn& F, const SmoothFn& G, const MeanSpec& m, double a,
                       double b);

/// Function values and first derivatives supplied as plain callables, for
/// pairs that are only known numerically (e.g. antiderivatives by quadrature).
struct NumericPair {
  RealFunction F;
  RealFunction f;
  RealFunction G;
  RealFunction g;
};
ResidualValue cauchy_terms(const NumericPair& pair, const MeanSpec& m, double a, double b);

/// f'(x) g(x) - f(x) g'(x), constant on intervals for midpoint solutions.
double wronskian(const SmoothFn& F, const SmoothFn& G, double x);

/// G(p + h) - G(p - h).
double symmetry_residual(const SmoothFn& G, double p, double h);

// -- construction of f from g ----------------------------------------------

struct ConstructionParams {
  double A = 0.0;
  double K = 0.0;
  double x0 = 0.0;
};

/// x -> integral from x0 to x of dt / g(t)^2 on an interval where g does not
/// vanish. Values at Chebyshev nodes are cached; other points integrate from
/// the nearest node so each call spans a short sub-interval.
class InverseSquareIntegral {
 public:
  InverseSquareIntegral(Expr g, const Interval& interval, double x0, int nodes = 64,
                        QuadratureSpec spec = {});

  double operator()(double x) const;

  const Interval& interval() const noexcept { return interval_; }
  double x0() const noexcept { return x0_; }
  /// |g| at or below this is treated as a zero of g.
  double zero_threshold() const noexcept { return zero_threshold_; }
  const Expr& g() const noexcept { return g_; }

  /// 1 / g(t)^2 with the near-zero guard.
  double integrand(double t) const;

 private:
  Expr g_;
  Interval interval_;
  double x0_;
  QuadratureSpec spec_;
  double zero_threshold_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> values_;
};

/// x -> (A + K * integral from x0 to x of dt / g^2) * g(x). With K = 0 this
/// is exactly A * g(x).
class ConstructedDerivative {
 public:
  ConstructedDerivative(const SmoothFn& g, ConstructionParams params, const Interval& interval);

  double operator()(double x) const;

  const ConstructionParams& params() const noexcept { return params_; }
  /// Null when K = 0.
  const InverseSquareIntegral* inverse_square() const noexcept { return integral_.get(); }

 private:
  Expr g_;
  ConstructionParams params_;
  Interval interval_;
  std::shared_ptr<const InverseSquareIntegral> integral_;
};

ConstructedDerivative construct_f(const SmoothFn& g, ConstructionParams params,
                                  const Interval& interval);

/// LHS - RHS of the integral criterion
///   int_{x-h}^{x+h} g(t) I(t) dt  =  (int_{x-h}^{x+h} g(t) dt) I(x),
/// with I(t) = int_{x0}^{t} du / g(u)^2. Scale: max(1, |LHS|, |RHS|).
ResidualValue integral_condition_terms(const InverseSquareIntegral& inv, double x, double h,
                                       const QuadratureSpec& spec = {});
double integral_condition_residual(const SmoothFn& g, double x0, double x, double h,
                                   const Interval& interval);

// -- sweeps ------------------------------------------------------------------

enum class Equation { Lagrange, Cauchy };

/// Grid points t_0 < ... < t_{n-1} spanning the region; every pair
/// (t_i, t_j) with i < j is evaluated. Deterministic for fixed inputs.
/// Cells that raise DomainError are counted and left out of the maximum.
ResidualReport sweep(Equation equation, std::span<const SmoothFn> fns, const MeanSpec& m,
                     const Interval& region, int n);
ResidualReport sweep_lagrange(const SmoothFn& F, const MeanSpec& m, const Interval& region, int n);
ResidualReport sweep_cauchy(const SmoothFn& F, const SmoothFn& G, const MeanSpec& m,
                            const Interval& region, int n);

/// Same grid driver for any pointwise residual of (a, b).
template <class Residual>
ResidualReport sweep_grid(const Residual& residual, const Interval& region, int n);

/// Equally spaced grid with the region's ends included exactly.
std::vector<double> sweep_grid_points(const Interval& region, int n);

template <class Residual>
ResidualReport sweep_grid(const Residual& residual, const Interval& region, int n) {
  const std::vector<double> ts = sweep_grid_points(region, n);
  ResidualReport report;
  report.samples.reserve(ts.size() * (ts.size() - 1) / 2);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = i + 1; j < ts.size(); ++j) {
      try {
        const ResidualValue v = residual(ts[i], ts[j]);
        report.add({ts[i], ts[j], v.residual, v.scale});
      } catch (const DomainError&) {
        ++report.domain_errors;
      }
    }
  }
  return report;
}

}  // namespace mvtlab
