#include "mvtlab/classify.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace mvtlab {

std::string_view to_string(Verdict v) noexcept {
  switch (v) {
    case Verdict::A: return "a";
    case Verdict::B: return "b";
    case Verdict::C: return "c";
    case Verdict::D: return "d";
    case Verdict::Unclassified: return "unclassified";
  }
  return "unclassified";
}

std::string_view to_string(Family f) noexcept {
  switch (f) {
    case Family::Quadratic: return "quadratic";
    case Family::Exponential: return "exponential";
    case Family::Trigonometric: return "trigonometric";
  }
  return "?";
}

std::string_view to_string(IntervalTag t) noexcept {
  switch (t) {
    case IntervalTag::LinearRelation: return "lr";
    case IntervalTag::Quadratic: return "q";
    case IntervalTag::Trigonometric: return "t";
    case IntervalTag::Exponential: return "e";
    case IntervalTag::Unclassified: return "unclassified";
  }
  return "unclassified";
}

std::optional<Verdict> verdict_from_string(std::string_view s) noexcept {
  if (s == "a") return Verdict::A;
  if (s == "b") return Verdict::B;
  if (s == "c") return Verdict::C;
  if (s == "d") return Verdict::D;
  if (s == "unclassified") return Verdict::Unclassified;
  return std::nullopt;
}

Verdict verdict_for(Family f) noexcept {
  switch (f) {
    case Family::Quadratic: return Verdict::B;
    case Family::Exponential: return Verdict::C;
    case Family::Trigonometric: return Verdict::D;
  }
  return Verdict::Unclassified;
}

IntervalTag tag_for(Family f) noexcept {
  switch (f) {
    case Family::Quadratic: return IntervalTag::Quadratic;
    case Family::Exponential: return IntervalTag::Exponential;
    case Family::Trigonometric: return IntervalTag::Trigonometric;
  }
  return IntervalTag::Unclassified;
}

namespace {

std::array<double, 3> unit(std::array<double, 3> c) {
  const double n = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
  if (n > 0.0)
    for (double& v : c) v /= n;
  return c;
}

double rms(const Eigen::VectorXd& v) { return std::sqrt(v.squaredNorm() / static_cast<double>(v.size())); }

}  // namespace

DependenceVerdict dependence_test(const SmoothFn& F, const SmoothFn& G, const Interval& interval,
                                  int samples) {
  if (samples < 8) throw std::invalid_argument("dependence_test needs at least 8 samples");
  const std::vector<double> xs = chebyshev_points(interval, samples);
  Eigen::MatrixXd M(samples, 3);
  for (int i = 0; i < samples; ++i) {
    const double x = xs[static_cast<std::size_t>(i)];
    M(i, 0) = 1.0;
    M(i, 1) = F(x);
    M(i, 2) = G(x);
  }

  DependenceVerdict out;
  Eigen::Vector3d norms = M.colwise().norm().transpose();
  for (int k = 0; k < 3; ++k) {
    if (norms(k) == 0.0) {
      // An identically zero column is a relation on its own.
      out.dependent = true;
      out.coefficients = {0.0, 0.0, 0.0};
      out.coefficients[static_cast<std::size_t>(k)] = 1.0;
      out.condition_ratio = 0.0;
      return out;
    }
  }

  const Eigen::MatrixXd normalised = M * norms.cwiseInverse().asDiagonal();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(normalised, Eigen::ComputeThinV);
  const Eigen::VectorXd sv = svd.singularValues();
  out.condition_ratio = sv(2) / sv(0);
  out.dependent = out.condition_ratio < kDependenceRatio;

  const Eigen::Vector3d direction = svd.matrixV().col(2).cwiseQuotient(norms);
  out.coefficients = unit({direction(0), direction(1), direction(2)});
  const Eigen::Vector3d c(out.coefficients[0], out.coefficients[1], out.coefficients[2]);
  out.residual_rms = rms(M * c);
  return out;
}

LambdaEstimate lambda_estimate(const SmoothFn& g, const Interval& interval, int probes) {
  if (probes < 1) throw std::invalid_argument("lambda_estimate needs at least one probe");
  const std::vector<double> xs = chebyshev_points(interval, probes);
  std::vector<double> gv(xs.size());
  double gmax = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    gv[i] = g(xs[i]);
    gmax = std::max(gmax, std::abs(gv[i]));
  }
  const double thr = kRelativeZeroThreshold * gmax;

  std::vector<double> ratios;
  ratios.reserve(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (std::abs(gv[i]) <= thr || gv[i] == 0.0) continue;
    ratios.push_back(4.0 * g.eval(2, xs[i]) / gv[i]);
  }
  if (ratios.empty()) throw DomainError("lambda_estimate: every probe hit a near-zero value of g");

  std::sort(ratios.begin(), ratios.end());
  LambdaEstimate out;
  const std::size_t n = ratios.size();
  out.lambda = (n % 2 == 1) ? ratios[n / 2] : 0.5 * (ratios[n / 2 - 1] + ratios[n / 2]);
  out.spread = ratios.back() - ratios.front();
  out.max_abs_probe = std::max(std::abs(ratios.front()), std::abs(ratios.back()));
  out.probes_used = static_cast<int>(n);
  return out;
}

double basis_value(Family family, double mu, int index, double x) noexcept {
  if (index == 0) return 1.0;
  switch (family) {
    case Family::Quadratic: return index == 1 ? x : x * x;
    case Family::Exponential: return index == 1 ? std::exp(mu * x) : std::exp(-mu * x);
    case Family::Trigonometric: return index == 1 ? std::sin(mu * x) : std::cos(mu * x);
  }
  return 0.0;
}

Expr family_expression(Family family, double mu, const std::array<double, 3>& c) {
  const Expr x = Expr::variable();
  switch (family) {
    case Family::Quadratic: return c[0] + c[1] * x + c[2] * pow(x, 2.0);
    case Family::Exponential: return c[0] + c[1] * exp(mu * x) + c[2] * exp(-mu * x);
    case Family::Trigonometric: return c[0] + c[1] * sin(mu * x) + c[2] * cos(mu * x);
  }
  return Expr{};
}

FamilyFit family_fit(const SmoothFn& F, const SmoothFn& G, const Interval& interval, double lambda,
                     double quadratic_band, int samples) {
  FamilyFit fit;
  if (std::abs(lambda) <= quadratic_band) {
    fit.family = Family::Quadratic;
    fit.mu = 0.0;
  } else {
    fit.family = lambda > 0.0 ? Family::Exponential : Family::Trigonometric;
    fit.mu = 0.5 * std::sqrt(std::abs(lambda));
  }

  const std::vector<double> xs = chebyshev_points(interval, samples);
  Eigen::MatrixXd B(samples, 3);
  Eigen::VectorXd yF(samples);
  Eigen::VectorXd yG(samples);
  for (int i = 0; i < samples; ++i) {
    const double x = xs[static_cast<std::size_t>(i)];
    for (int k = 0; k < 3; ++k) B(i, k) = basis_value(fit.family, fit.mu, k, x);
    yF(i) = F(x);
    yG(i) = G(x);
  }

  // Column scaling keeps e^{mu x} and e^{-mu x} comparable on wide intervals.
  const Eigen::Vector3d norms = B.colwise().norm().transpose();
  const Eigen::MatrixXd Bn = B * norms.cwiseInverse().asDiagonal();
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(Bn, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::Vector3d cF = svd.solve(yF).cwiseQuotient(norms);
  const Eigen::Vector3d cG = svd.solve(yG).cwiseQuotient(norms);
  fit.coeffs_F = {cF(0), cF(1), cF(2)};
  fit.coeffs_G = {cG(0), cG(1), cG(2)};

  const double ss = (B * cF - yF).squaredNorm() + (B * cG - yG).squaredNorm();
  fit.rms_residual = std::sqrt(ss / (2.0 * samples));
  fit.scale = std::sqrt((yF.squaredNorm() + yG.squaredNorm()) / (2.0 * samples));
  return fit;
}

// ---------------------------------------------------------------------------

namespace {

struct Classifier {
  const SmoothFn& F;
  const SmoothFn& G;
  const MeanSpec& m;
  const Interval& domain;
  const ClassifyOptions& opt;
  std::ostringstream diag;

  // Best family attempt on the widest interval, reported for near misses.
  void attach_best_attempt(Classification& out, const SmoothFn& g, const Interval& where) {
    try {
      const LambdaEstimate lam = lambda_estimate(g, where, opt.lambda_probes);
      out.lambda_estimate = lam.lambda;
      out.lambda_spread = lam.spread;
      out.fit = family_fit(F, G, where, lam.lambda, kQuadraticBand * (1.0 + lam.max_abs_probe));
      diag << "; best family " << to_string(out.fit->family) << " mu=" << out.fit->mu
           << " rms=" << out.fit->rms_residual << " (scale " << out.fit->scale << ")";
    } catch (const std::exception& e) {
      diag << "; no family attempt (" << e.what() << ")";
    }
  }

  static const Interval& widest(const std::vector<Interval>& parts) {
    return *std::max_element(parts.begin(), parts.end(), [](const Interval& a, const Interval& b) {
      return a.width() < b.width();
    });
  }

  Classification run() {
    Classification out;
    const ResidualReport sweep = sweep_cauchy(F, G, m, domain, opt.sweep_n);
    out.sweep_max_abs = sweep.max_abs;
    out.sweep_scale = sweep.scale;
    out.sweep_passed = sweep.domain_errors == 0 && sweep.passes(opt.tau);

    const SmoothFn g = G.derivative();

    if (sweep.domain_errors != 0) {
      diag << sweep.domain_errors << " sweep cells left the domain of F or G";
      return finish(out);
    }
    if (!out.sweep_passed) {
      diag << "not a solution: sweep max |residual| " << sweep.max_abs << " exceeds tau*scale = "
           << opt.tau * sweep.scale;
      attach_best_attempt(out, g, domain);
      return finish(out);
    }

    if (!m.symmetric()) {
      out.dependence = dependence_test(F, G, domain, opt.dependence_samples);
      if (out.dependence->dependent) {
        out.verdict = Verdict::A;
      } else {
        diag << "asymmetric solution without a linear relation (condition ratio "
             << out.dependence->condition_ratio << ")";
      }
      return finish(out);
    }

    const ZeroSetDecomposition zs = zero_set(g, domain, opt.zero_grid);
    const double xbar = domain.midpoint();

    if (zs.empty()) {
      // g vanishes throughout: G is constant.
      DependenceVerdict dep = dependence_test(F, G, domain, opt.dependence_samples);
      dep.dependent = true;
      dep.coefficients = unit({-G(xbar), 0.0, 1.0});
      out.dependence = dep;
      out.verdict = Verdict::A;
      diag << "g vanishes on the whole domain";
      return finish(out);
    }

    double fmax = 0.0;
    double gmax = 0.0;
    for (const Interval& part : zs.nonvanishing) {
      for (double x : chebyshev_points(part, opt.dependence_samples)) {
        fmax = std::max(fmax, std::abs(F.eval(1, x)));
        gmax = std::max(gmax, std::abs(g(x)));
      }
    }
    if (fmax <= kRelativeZeroThreshold * gmax) {
      // f vanishes where g does not, so F is constant.
      DependenceVerdict dep = dependence_test(F, G, domain, opt.dependence_samples);
      dep.dependent = true;
      dep.coefficients = unit({-F(xbar), 1.0, 0.0});
      out.dependence = dep;
      out.verdict = Verdict::A;
      diag << "f vanishes wherever g does not";
      return finish(out);
    }

    std::size_t lr = 0;
    for (const Interval& part : zs.nonvanishing) {
      TaggedInterval tagged{part, IntervalTag::Unclassified, std::nullopt, std::nullopt};
      const DependenceVerdict dep = dependence_test(F, G, part, opt.dependence_samples);
      if (dep.dependent) {
        tagged.tag = IntervalTag::LinearRelation;
        ++lr;
      } else {
        try {
          const LambdaEstimate lam = lambda_estimate(g, part, opt.lambda_probes);
          const FamilyFit fit =
              family_fit(F, G, part, lam.lambda, kQuadraticBand * (1.0 + lam.max_abs_probe));
          if (fit.holds(opt.fit_tolerance)) tagged.tag = tag_for(fit.family);
          tagged.fit = fit;
          tagged.lambda = lam;
        } catch (const DomainError& e) {
          diag << "interval [" << part.lo << ", " << part.hi << "]: " << e.what() << "; ";
        }
      }
      out.per_interval_tags.push_back(std::move(tagged));
    }

    const std::size_t parts = out.per_interval_tags.size();
    if (lr == parts) {
      out.dependence = dependence_test(F, G, domain, opt.dependence_samples);
      if (out.dependence->dependent) {
        out.verdict = Verdict::A;
      } else {
        diag << "dependent on every interval but not across the domain";
      }
      return finish(out);
    }
    if (lr > 0) {
      diag << "linear relation on " << lr << " of " << parts << " intervals only";
      return finish(out);
    }

    const IntervalTag first = out.per_interval_tags.front().tag;
    const bool uniform =
        first != IntervalTag::Unclassified &&
        std::all_of(out.per_interval_tags.begin(), out.per_interval_tags.end(),
                    [first](const TaggedInterval& t) { return t.tag == first; });
    if (!uniform) {
      diag << "intervals do not share one family";
      attach_best_attempt(out, g, widest(zs.nonvanishing));
      return finish(out);
    }

    // One family on every piece; it must also hold across the zeros of g.
    const TaggedInterval& anchor = *std::max_element(
        out.per_interval_tags.begin(), out.per_interval_tags.end(),
        [](const TaggedInterval& a, const TaggedInterval& b) {
          return a.interval.width() < b.interval.width();
        });
    const LambdaEstimate lam = *anchor.lambda;
    out.lambda_estimate = lam.lambda;
    out.lambda_spread = lam.spread;
    const FamilyFit global =
        family_fit(F, G, domain, lam.lambda, kQuadraticBand * (1.0 + lam.max_abs_probe));
    out.fit = global;
    if (tag_for(global.family) == first && global.holds(opt.fit_tolerance)) {
      out.verdict = verdict_for(global.family);
    } else {
      diag << "per-interval family does not extend over the domain (rms " << global.rms_residual
           << ", scale " << global.scale << ")";
    }
    return finish(out);
  }

  Classification finish(Classification& out) {
    out.diagnostics = diag.str();
    return std::move(out);
  }
};

}  // namespace

Classification classify_pair(const SmoothFn& F, const SmoothFn& G, const MeanSpec& m,
                             const Interval& domain, const ClassifyOptions& options) {
  Classifier c{F, G, m, domain, options, {}};
  try {
    return c.run();
  } catch (const DomainError& e) {
    Classification out;
    out.diagnostics = std::string("evaluation failed: ") + e.what();
    return out;
  } catch (const QuadratureError& e) {
    Classification out;
    out.diagnostics = std::string("quadrature failed: ") + e.what();
    return out;
  }
}

}  // namespace mvtlab
