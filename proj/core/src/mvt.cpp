#include "mvtlab/mvt.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mvtlab {

MeanSpec::MeanSpec(double alpha) : alpha_(alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("alpha must lie in (0, 1)");
}

void ResidualReport::add(const ResidualSample& s) {
  const double mag = std::abs(s.residual);
  if (samples.empty() || mag > max_abs) {
    max_abs = mag;
    argmax_a = s.a;
    argmax_b = s.b;
  }
  scale = std::max(scale, s.scale);
  samples.push_back(s);
}

namespace {
void require_ordered(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("residual requires a < b");
}
}  // namespace

ResidualValue lagrange_terms(const SmoothFn& F, const MeanSpec& m, double a, double b) {
  require_ordered(a, b);
  const double lhs = F(b) - F(a);
  const double rhs = F.eval(1, m.mean(a, b)) * (b - a);
  return {lhs - rhs, std::max({1.0, std::abs(lhs), std::abs(rhs)})};
}

double lagrange_residual(const SmoothFn& F, const MeanSpec& m, double a, double b) {
  return lagrange_terms(F, m, a, b).residual;
}

double lagrange_derivative_identity(const SmoothFn& F, const MeanSpec& m, double x, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("lagrange_derivative_identity requires h > 0");
  const double alpha = m.alpha();
  const double beta = m.beta();
  return beta * F.eval(1, x + beta * h) + alpha * F.eval(1, x - alpha * h) - F.eval(1, x);
}

namespace {
ResidualValue cauchy_from_values(double dF, double dG, double f_c, double g_c) {
  const double lhs = dF * g_c;
  const double rhs = dG * f_c;
  return {lhs - rhs, std::max({1.0, std::abs(lhs), std::abs(rhs)})};
}
}  // namespace

ResidualValue cauchy_terms(const SmoothFn& F, const SmoothFn& G, const MeanSpec& m, double a,
                           double b) {
  require_ordered(a, b);
  const double c = m.mean(a, b);
  return cauchy_from_values(F(b) - F(a), G(b) - G(a), F.eval(1, c), G.eval(1, c));
}

double cauchy_residual(const SmoothFn& F, const SmoothFn& G, const MeanSpec& m, double a,
                       double b) {
  return cauchy_terms(F, G, m, a, b).residual;
}

ResidualValue cauchy_terms(const NumericPair& pair, const MeanSpec& m, double a, double b) {
  require_ordered(a, b);
  const double c = m.mean(a, b);
  return cauchy_from_values(pair.F(b) - pair.F(a), pair.G(b) - pair.G(a), pair.f(c), pair.g(c));
}

double wronskian(const SmoothFn& F, const SmoothFn& G, double x) {
  return F.eval(2, x) * G.eval(1, x) - F.eval(1, x) * G.eval(2, x);
}

double symmetry_residual(const SmoothFn& G, double p, double h) { return G(p + h) - G(p - h); }

// ---------------------------------------------------------------------------

InverseSquareIntegral::InverseSquareIntegral(Expr g, const Interval& interval, double x0,
                                             int nodes, QuadratureSpec spec)
    : g_(std::move(g)), interval_(interval), x0_(x0), spec_(spec) {
  if (!interval_.contains(x0_)) throw std::invalid_argument("x0 must lie inside the interval");
  if (nodes < 2) throw std::invalid_argument("InverseSquareIntegral needs at least two nodes");

  std::vector<double> cheb = chebyshev_points(interval_, nodes);
  double gmax = 0.0;
  for (double t : cheb) gmax = std::max(gmax, std::abs(eval(g_, t)));
  gmax = std::max(gmax, std::abs(eval(g_, x0_)));
  zero_threshold_ = kRelativeZeroThreshold * gmax;

  // x0 is a node with value 0; accumulate outwards in both directions.
  cheb.push_back(x0_);
  std::sort(cheb.begin(), cheb.end());
  cheb.erase(std::unique(cheb.begin(), cheb.end()), cheb.end());
  nodes_ = std::move(cheb);
  values_.assign(nodes_.size(), 0.0);

  const auto origin = static_cast<std::size_t>(
      std::lower_bound(nodes_.begin(), nodes_.end(), x0_) - nodes_.begin());
  const RealFunction integrand_fn = [this](double t) { return integrand(t); };
  for (std::size_t k = origin + 1; k < nodes_.size(); ++k)
    values_[k] = values_[k - 1] + integrate(integrand_fn, nodes_[k - 1], nodes_[k], spec_);
  for (std::size_t k = origin; k-- > 0;)
    values_[k] = values_[k + 1] - integrate(integrand_fn, nodes_[k], nodes_[k + 1], spec_);
}

double InverseSquareIntegral::integrand(double t) const {
  const double v = eval(g_, t);
  if (std::abs(v) <= zero_threshold_)
    throw DomainError("g is numerically zero at t = " + std::to_string(t) +
                      "; dt/g^2 is not integrable there");
  return 1.0 / (v * v);
}

double InverseSquareIntegral::operator()(double x) const {
  if (x == x0_) return 0.0;
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), x);
  std::size_t k = static_cast<std::size_t>(it - nodes_.begin());
  if (k == nodes_.size()) {
    k = nodes_.size() - 1;
  } else if (k > 0 && (x - nodes_[k - 1]) < (nodes_[k] - x)) {
    k = k - 1;
  }
  if (nodes_[k] == x) return values_[k];
  const RealFunction integrand_fn = [this](double t) { return integrand(t); };
  return values_[k] + integrate(integrand_fn, nodes_[k], x, spec_);
}

ConstructedDerivative::ConstructedDerivative(const SmoothFn& g, ConstructionParams params,
                                             const Interval& interval)
    : g_(g.d0()), params_(params), interval_(interval) {
  if (!interval_.contains(params_.x0)) throw std::invalid_argument("x0 must lie inside the interval");
  if (params_.K != 0.0)
    integral_ = std::make_shared<const InverseSquareIntegral>(g_, interval_, params_.x0);
}

double ConstructedDerivative::operator()(double x) const {
  const double gx = eval(g_, x);
  if (!integral_) return params_.A * gx;
  if (std::abs(gx) <= integral_->zero_threshold())
    throw DomainError("g is numerically zero at x = " + std::to_string(x));
  return (params_.A + params_.K * (*integral_)(x)) * gx;
}

ConstructedDerivative construct_f(const SmoothFn& g, ConstructionParams params,
                                  const Interval& interval) {
  return ConstructedDerivative(g, params, interval);
}

ResidualValue integral_condition_terms(const InverseSquareIntegral& inv, double x, double h,
                                       const QuadratureSpec& spec) {
  if (h == 0.0) return {0.0, 1.0};
  const Expr& g = inv.g();
  const RealFunction weighted = [&](double t) { return eval(g, t) * inv(t); };
  const double lhs = integrate(weighted, x - h, x + h, spec);
  const double rhs = integrate(g, x - h, x + h, spec) * inv(x);
  return {lhs - rhs, std::max({1.0, std::abs(lhs), std::abs(rhs)})};
}

double integral_condition_residual(const SmoothFn& g, double x0, double x, double h,
                                   const Interval& interval) {
  for (double t : {x, x + h, x - h}) {
    if (!interval.contains(t))
      throw std::invalid_argument("x, x + h and x - h must lie inside the interval");
  }
  if (h == 0.0) return 0.0;
  const InverseSquareIntegral inv(g.d0(), interval, x0);
  return integral_condition_terms(inv, x, h).residual;
}

// ---------------------------------------------------------------------------

std::vector<double> sweep_grid_points(const Interval& region, int n) {
  if (n < 2) throw std::invalid_argument("sweep needs n >= 2");
  std::vector<double> ts(static_cast<std::size_t>(n));
  const double step = region.width() / (n - 1);
  for (int i = 0; i < n; ++i) ts[static_cast<std::size_t>(i)] = region.lo + i * step;
  ts.back() = region.hi;
  return ts;
}

ResidualReport sweep_lagrange(const SmoothFn& F, const MeanSpec& m, const Interval& region, int n) {
  return sweep_grid([&](double a, double b) { return lagrange_terms(F, m, a, b); }, region, n);
}

ResidualReport sweep_cauchy(const SmoothFn& F, const SmoothFn& G, const MeanSpec& m,
                            const Interval& region, int n) {
  return sweep_grid([&](double a, double b) { return cauchy_terms(F, G, m, a, b); }, region, n);
}

ResidualReport sweep(Equation equation, std::span<const SmoothFn> fns, const MeanSpec& m,
                     const Interval& region, int n) {
  switch (equation) {
    case Equation::Lagrange:
      if (fns.size() != 1) throw std::invalid_argument("lagrange sweep takes exactly one function");
      return sweep_lagrange(fns[0], m, region, n);
    case Equation::Cauchy:
      if (fns.size() != 2) throw std::invalid_argument("cauchy sweep takes exactly two functions");
      return sweep_cauchy(fns[0], fns[1], m, region, n);
  }
  throw std::invalid_argument("unknown equation");
}

}  // namespace mvtlab
