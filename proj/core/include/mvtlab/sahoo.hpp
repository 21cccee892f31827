#pragma once

// The four-function equation
//
//   [F(x) - F(y)] phi((x+y)/2) = [G(x) - G(y)] psi((x+y)/2),
//
// its compatibility condition f phi = g psi, and the side conditions that
// accompany each solution family. phi and psi only need to be evaluable;
// just their d0 layer is consulted.

#include <array>
#include <optional>
#include <string>

#include "mvtlab/calculus.hpp"
#include "mvtlab/classify.hpp"
#include "mvtlab/expr.hpp"
#include "mvtlab/mvt.hpp"

namespace mvtlab {

enum class QuadrupleTag { A, B, C, D };

std::string_view to_string(QuadrupleTag t) noexcept;

/// One of the four solution shapes with its coefficients
/// (A0, A1, A2, B0, B1, B2).
///
///   a  A0 + A1 F + A2 G = 0,  G' (A1 psi + A2 phi) = 0
///   b  F = A0 + A1 s + A2 s^2,            G = B0 + B1 s + B2 s^2
///   c  F = A0 + A1 e^{mu s} + A2 e^{-mu s}, G likewise with B
///   d  F = A0 + A1 sin(mu s) + A2 cos(mu s), G likewise with B
///
/// In case a one function is free: `free_function` is G when A1 != 0 (F is
/// then -(A0 + A2 G) / A1) and F when A1 == 0 (G is then the constant -A0/A2).
struct QuadrupleCase {
  QuadrupleTag tag = QuadrupleTag::B;
  double mu = 0.0;
  std::array<double, 6> coeffs{};
  std::optional<SmoothFn> free_function;

  /// Throws std::invalid_argument when the invariants do not hold.
  void validate() const;
  /// F and G determined by the case.
  std::pair<SmoothFn, SmoothFn> functions() const;
};

/// [F(x) - F(y)] phi(s) - [G(x) - G(y)] psi(s), s = (x + y) / 2.
/// Scale: max(1, |dF phi(s)|, |dG psi(s)|).
ResidualValue sr_terms(const SmoothFn& F, const SmoothFn& G, const SmoothFn& phi,
                       const SmoothFn& psi, double x, double y);
double sr_residual(const SmoothFn& F, const SmoothFn& G, const SmoothFn& phi, const SmoothFn& psi,
                   double x, double y);

/// f(s) phi(s) - g(s) psi(s).
ResidualValue sr_compatibility_terms(const SmoothFn& F, const SmoothFn& G, const SmoothFn& phi,
                                     const SmoothFn& psi, double s);
double sr_compatibility_residual(const SmoothFn& F, const SmoothFn& G, const SmoothFn& phi,
                                 const SmoothFn& psi, double s);

/// The case's displayed side condition at s, e.g. for case d
/// [A1 cos(mu s) - A2 sin(mu s)] phi(s) - [B1 cos(mu s) - B2 sin(mu s)] psi(s).
ResidualValue side_condition_terms(const QuadrupleCase& qc, const SmoothFn& phi,
                                   const SmoothFn& psi, double s);

struct CaseCheckReport {
  /// Side condition at the grid points; sample (a, b) = (s, s).
  ResidualReport side_condition;
  /// Four-function residual on the pairs x < y of the same grid.
  ResidualReport grid;
  bool side_condition_holds = false;
  bool grid_vanishes = false;
  /// Neither phi nor psi stays away from zero on the sampled domain; the
  /// family conclusion then carries no guarantee.
  bool hypothesis_warning = false;
};

CaseCheckReport sr_case_check(const QuadrupleCase& qc, const SmoothFn& phi, const SmoothFn& psi,
                              const Interval& domain, int n = 40, double tau = kDefaultTau);

/// phi != 0 or psi != 0 at every sample of the domain.
bool sr_hypothesis_holds(const SmoothFn& phi, const SmoothFn& psi, const Interval& domain,
                         int n = 512);

}  // namespace mvtlab
