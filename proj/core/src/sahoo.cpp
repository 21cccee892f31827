#include "mvtlab/sahoo.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mvtlab {

std::string_view to_string(QuadrupleTag t) noexcept {
  switch (t) {
    case QuadrupleTag::A: return "a";
    case QuadrupleTag::B: return "b";
    case QuadrupleTag::C: return "c";
    case QuadrupleTag::D: return "d";
  }
  return "?";
}

namespace {

Expr span_expr(QuadrupleTag tag, double mu, double c0, double c1, double c2) {
  switch (tag) {
    case QuadrupleTag::B: return family_expression(Family::Quadratic, 0.0, {c0, c1, c2});
    case QuadrupleTag::C: return family_expression(Family::Exponential, mu, {c0, c1, c2});
    case QuadrupleTag::D: return family_expression(Family::Trigonometric, mu, {c0, c1, c2});
    case QuadrupleTag::A: break;
  }
  throw std::logic_error("case a has no span form");
}

}  // namespace

void QuadrupleCase::validate() const {
  const auto& c = coeffs;
  switch (tag) {
    case QuadrupleTag::A:
      if (c[0] == 0.0 && c[1] == 0.0 && c[2] == 0.0)
        throw std::invalid_argument("case a needs a nonzero (A0, A1, A2)");
      if (c[1] == 0.0 && c[2] == 0.0)
        throw std::invalid_argument("case a with A1 = A2 = 0 forces A0 = 0");
      if (!free_function) throw std::invalid_argument("case a needs its free function");
      break;
    case QuadrupleTag::C:
    case QuadrupleTag::D:
      if (mu == 0.0) throw std::invalid_argument("cases c and d need mu != 0");
      break;
    case QuadrupleTag::B: break;
  }
}

std::pair<SmoothFn, SmoothFn> QuadrupleCase::functions() const {
  validate();
  const auto& c = coeffs;
  if (tag == QuadrupleTag::A) {
    const SmoothFn& free = *free_function;
    if (c[1] != 0.0) {
      const Expr F = (-c[0] - c[2] * free.d0()) / c[1];
      return {SmoothFn(F, "F"), free};
    }
    return {free, SmoothFn(Expr::constant(-c[0] / c[2]), "G")};
  }
  return {SmoothFn(span_expr(tag, mu, c[0], c[1], c[2]), "F"),
          SmoothFn(span_expr(tag, mu, c[3], c[4], c[5]), "G")};
}

ResidualValue sr_terms(const SmoothFn& F, const SmoothFn& G, const SmoothFn& phi,
                       const SmoothFn& psi, double x, double y) {
  const double s = 0.5 * (x + y);
  const double lhs = (F(x) - F(y)) * phi(s);
  const double rhs = (G(x) - G(y)) * psi(s);
  return {lhs - rhs, std::max({1.0, std::abs(lhs), std::abs(rhs)})};
}

double sr_residual(const SmoothFn& F, const SmoothFn& G, const SmoothFn& phi, const SmoothFn& psi,
                   double x, double y) {
  return sr_terms(F, G, phi, psi, x, y).residual;
}

ResidualValue sr_compatibility_terms(const SmoothFn& F, const SmoothFn& G, const SmoothFn& phi,
                                     const SmoothFn& psi, double s) {
  const double lhs = F.eval(1, s) * phi(s);
  const double rhs = G.eval(1, s) * psi(s);
  return {lhs - rhs, std::max({1.0, std::abs(lhs), std::abs(rhs)})};
}

double sr_compatibility_residual(const SmoothFn& F, const SmoothFn& G, const SmoothFn& phi,
                                 const SmoothFn& psi, double s) {
  return sr_compatibility_terms(F, G, phi, psi, s).residual;
}

namespace {

// G is only consulted in case a.
ResidualValue side_condition_with(const QuadrupleCase& qc, const SmoothFn& G, const SmoothFn& phi,
                                  const SmoothFn& psi, double s) {
  const auto& c = qc.coeffs;
  const double ph = phi(s);
  const double ps = psi(s);
  double lhs = 0.0;
  double rhs = 0.0;
  switch (qc.tag) {
    case QuadrupleTag::A: {
      // The relation A0 + A1 F + A2 G = 0 holds by construction; the
      // remaining condition is G'(s) [A1 psi(s) + A2 phi(s)] = 0.
      const double dG = G.eval(1, s);
      lhs = dG * c[1] * ps;
      rhs = -dG * c[2] * ph;
      break;
    }
    case QuadrupleTag::B:
      lhs = (c[1] + 2.0 * c[2] * s) * ph;
      rhs = (c[4] + 2.0 * c[5] * s) * ps;
      break;
    case QuadrupleTag::C: {
      const double ep = std::exp(qc.mu * s);
      const double em = std::exp(-qc.mu * s);
      lhs = (c[1] * ep - c[2] * em) * ph;
      rhs = (c[4] * ep - c[5] * em) * ps;
      break;
    }
    case QuadrupleTag::D: {
      const double co = std::cos(qc.mu * s);
      const double si = std::sin(qc.mu * s);
      lhs = (c[1] * co - c[2] * si) * ph;
      rhs = (c[4] * co - c[5] * si) * ps;
      break;
    }
  }
  return {lhs - rhs, std::max({1.0, std::abs(lhs), std::abs(rhs)})};
}

}  // namespace

ResidualValue side_condition_terms(const QuadrupleCase& qc, const SmoothFn& phi,
                                   const SmoothFn& psi, double s) {
  if (qc.tag == QuadrupleTag::A) return side_condition_with(qc, qc.functions().second, phi, psi, s);
  qc.validate();
  return side_condition_with(qc, SmoothFn{}, phi, psi, s);
}

bool sr_hypothesis_holds(const SmoothFn& phi, const SmoothFn& psi, const Interval& domain, int n) {
  const std::vector<double> xs = sweep_grid_points(domain, n);
  auto nonvanishing = [&xs](const SmoothFn& fn) {
    std::vector<double> v(xs.size());
    double vmax = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      v[i] = fn(xs[i]);
      vmax = std::max(vmax, std::abs(v[i]));
    }
    if (vmax == 0.0) return false;
    const double thr = kRelativeZeroThreshold * vmax;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      if (std::abs(v[i]) <= thr) return false;
      if (i > 0 && (v[i] > 0) != (v[i - 1] > 0)) return false;
    }
    return true;
  };
  return nonvanishing(phi) || nonvanishing(psi);
}

CaseCheckReport sr_case_check(const QuadrupleCase& qc, const SmoothFn& phi, const SmoothFn& psi,
                              const Interval& domain, int n, double tau) {
  const auto [F, G] = qc.functions();
  CaseCheckReport out;
  for (double s : sweep_grid_points(domain, n)) {
    try {
      const ResidualValue v = side_condition_with(qc, G, phi, psi, s);
      out.side_condition.add({s, s, v.residual, v.scale});
    } catch (const DomainError&) {
      ++out.side_condition.domain_errors;
    }
  }
  out.side_condition_holds =
      out.side_condition.domain_errors == 0 && out.side_condition.passes(tau);

  out.grid = sweep_grid([&](double x, double y) { return sr_terms(F, G, phi, psi, x, y); }, domain, n);
  out.grid_vanishes = out.grid.domain_errors == 0 && out.grid.passes(tau);
  out.hypothesis_warning = !sr_hypothesis_holds(phi, psi, domain);
  return out;
}

}  // namespace mvtlab
