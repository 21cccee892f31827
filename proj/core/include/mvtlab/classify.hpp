#pragma once

// Sorting solution pairs of the fixed-mean Cauchy equation into the four
// solution families:
//
//   a  {1, F, G} linearly dependent
//   b  F, G in span{1, x, x^2}
//   c  F, G in span{1, e^{mu x}, e^{-mu x}},  mu > 0
//   d  F, G in span{1, sin(mu x), cos(mu x)}, mu > 0
//
// For an asymmetric mean only (a) is possible. For the midpoint the domain is
// split where g = G' vanishes and each piece is tagged on its own before the
// tags are glued into a global verdict.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mvtlab/calculus.hpp"
#include "mvtlab/expr.hpp"
#include "mvtlab/mvt.hpp"

namespace mvtlab {

enum class Verdict { A, B, C, D, Unclassified };
enum class Family { Quadratic, Exponential, Trigonometric };
enum class IntervalTag { LinearRelation, Quadratic, Trigonometric, Exponential, Unclassified };

std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(Family f) noexcept;
std::string_view to_string(IntervalTag t) noexcept;
std::optional<Verdict> verdict_from_string(std::string_view s) noexcept;

Verdict verdict_for(Family f) noexcept;
IntervalTag tag_for(Family f) noexcept;

/// c0 * 1 + c1 * F + c2 * G ~ 0 on the sampled points.
struct DependenceVerdict {
  bool dependent = false;
  /// Unit length. Meaningful when dependent.
  std::array<double, 3> coefficients{};
  /// Smallest over largest singular value of the column-normalised matrix [1, F, G].
  double condition_ratio = 1.0;
  double residual_rms = 0.0;
};

inline constexpr double kDependenceRatio = 1e-8;

/// Chebyshev-sampled rank test of {1, F, G}; invariant under rescaling F or G.
DependenceVerdict dependence_test(const SmoothFn& F, const SmoothFn& G, const Interval& interval,
                                  int samples = 64);

struct LambdaEstimate {
  double lambda = 0.0;
  /// max - min over the probes that were used.
  double spread = 0.0;
  double max_abs_probe = 0.0;
  int probes_used = 0;
};

/// Median of 4 g''(x) / g(x) over Chebyshev probes where g is not
/// numerically zero. g is the function itself (its d0), not an antiderivative.
/// Throws DomainError when every probe hits a near-zero value of g.
LambdaEstimate lambda_estimate(const SmoothFn& g, const Interval& interval, int probes = 33);

struct FamilyFit {
  Family family = Family::Quadratic;
  /// sqrt(|lambda|) / 2; zero for the quadratic family.
  double mu = 0.0;
  std::array<double, 3> coeffs_F{};
  std::array<double, 3> coeffs_G{};
  double rms_residual = 0.0;
  /// Joint RMS of the sampled F and G values.
  double scale = 0.0;

  bool holds(double rel_tol) const noexcept { return rms_residual <= rel_tol * scale; }
};

inline constexpr double kFitTolerance = 1e-6;
inline constexpr double kQuadraticBand = 1e-6;

/// Basis value for a family: index 0 is the constant.
double basis_value(Family family, double mu, int index, double x) noexcept;

/// c0 + c1 * basis_1 + c2 * basis_2 as an expression.
Expr family_expression(Family family, double mu, const std::array<double, 3>& coeffs);

/// Least-squares fit of F and G on the family selected by the sign of lambda.
/// |lambda| <= quadratic_band picks the quadratic family.
FamilyFit family_fit(const SmoothFn& F, const SmoothFn& G, const Interval& interval, double lambda,
                     double quadratic_band = kQuadraticBand, int samples = 64);

struct TaggedInterval {
  Interval interval;
  IntervalTag tag = IntervalTag::Unclassified;
  std::optional<FamilyFit> fit;
  std::optional<LambdaEstimate> lambda;
};

struct ClassifyOptions {
  double tau = kDefaultTau;
  int sweep_n = 40;
  int dependence_samples = 64;
  int lambda_probes = 33;
  int zero_grid = 512;
  double fit_tolerance = kFitTolerance;
};

struct Classification {
  Verdict verdict = Verdict::Unclassified;
  std::optional<DependenceVerdict> dependence;
  /// Present for b/c/d; for unclassified pairs it holds the best attempt.
  std::optional<FamilyFit> fit;
  double lambda_estimate = 0.0;
  double lambda_spread = 0.0;
  std::vector<TaggedInterval> per_interval_tags;
  double sweep_max_abs = 0.0;
  double sweep_scale = 1.0;
  bool sweep_passed = false;
  std::string diagnostics;
};

Classification classify_pair(const SmoothFn& F, const SmoothFn& G, const MeanSpec& m,
                             const Interval& domain, const ClassifyOptions& options = {});

}  // namespace mvtlab
