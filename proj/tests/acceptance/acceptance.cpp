// Acceptance gate. Each criterion prints one line
//
//   PASS|FAIL  <n>  <name>  <measured> (limit ...)  <seconds>s / <budget>s
//
// and the process exits non-zero if any criterion fails. Tolerances and
// time budgets are constants below; a criterion that exceeds its budget fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "mvtlab/calculus.hpp"
#include "mvtlab/classify.hpp"
#include "mvtlab/harness.hpp"
#include "mvtlab/mvt.hpp"
#include "mvtlab/sahoo.hpp"
#include "oracles.hpp"
#include "quadruples.hpp"

using namespace mvtlab;
namespace oracle = mvtlab::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int number;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* format, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, format, a, b);
  return buf;
}

const Interval kWide(-3.0, 3.0);

// -- 1. worked example end to end ---------------------------------------------

constexpr int kExampleGrid = 64;

Outcome worked_example() {
  std::ostringstream out, err;
  const int code = cli::run({"verify-example", "--n", std::to_string(kExampleGrid), "--points", "100"}, out, err);
  Outcome o;
  o.pass = code == cli::kExitPass;
  o.detail = o.pass ? "all five stages within tolerance" : "exit " + std::to_string(code) + " " + err.str();
  return o;
}

// -- 2. midpoint and asymmetric Lagrange --------------------------------------

constexpr double kQuadraticPass = 1e-10;
constexpr double kCubicFail = 1e-2;
constexpr int kLagrangeDraws = 100;
constexpr int kLagrangeGrid = 40;

Outcome lagrange() {
  SplitMix64 rng(derive_seed(2, 0, 0));
  const Expr x = Expr::variable();
  auto coeff = [&] { return rng.uniform(-2.0, 2.0); };
  auto lead = [&] { return rng.uniform_away_from_zero(-2.0, 2.0, 0.1); };
  double worst_quad = 0, min_cubic = INFINITY, worst_linear = 0, min_quad_asym = INFINITY;
  int failures = 0;
  for (int k = 0; k < kLagrangeDraws; ++k) {
    const SmoothFn quad(coeff() + coeff() * x + lead() * pow(x, 2.0));
    const SmoothFn cubic(coeff() + coeff() * x + coeff() * pow(x, 2.0) + lead() * pow(x, 3.0));
    const SmoothFn linear(coeff() + lead() * x);
    const ResidualReport q = sweep_lagrange(quad, MeanSpec::midpoint(), kWide, kLagrangeGrid);
    const ResidualReport c = sweep_lagrange(cubic, MeanSpec::midpoint(), kWide, kLagrangeGrid);
    worst_quad = std::max(worst_quad, q.max_abs / q.scale);
    min_cubic = std::min(min_cubic, c.max_abs / c.scale);
    failures += !(q.max_abs <= kQuadraticPass * q.scale) + !(c.max_abs > kCubicFail * c.scale);
    for (double alpha : {0.2, 0.35, 0.7}) {
      const ResidualReport l = sweep_lagrange(linear, MeanSpec(alpha), kWide, kLagrangeGrid);
      const ResidualReport qa = sweep_lagrange(quad, MeanSpec(alpha), kWide, kLagrangeGrid);
      worst_linear = std::max(worst_linear, l.max_abs / l.scale);
      min_quad_asym = std::min(min_quad_asym, qa.max_abs / qa.scale);
      failures += !l.passes() + qa.passes();
    }
  }
  Outcome o;
  o.pass = failures == 0;
  o.detail = fmt("quadratic max %.2e, cubic min %.2e", worst_quad, min_cubic) +
             fmt("; linear max %.2e, asymmetric quadratic min %.2e", worst_linear, min_quad_asym);
  return o;
}

// -- 3. classification round trip ---------------------------------------------

Outcome round_trip() {
  SuiteConfig config;  // 200 per family a-d, fixed seed, [-3, 3], midpoint
  const SuiteReport r = run_suite(config);
  Outcome o;
  o.pass = r.diagonal_fraction >= 0.99 && r.max_mu_rel_error <= 1e-6 && r.total == 800;
  o.detail = fmt("diagonal %.4f (>= 0.99), max mu rel error %.2e (<= 1e-6)", r.diagonal_fraction,
                 r.max_mu_rel_error);
  return o;
}

// -- 4. asymmetric means admit only dependence --------------------------------

constexpr double kAsymmetricFail = 1e-3;
const Interval kAsymmetricDomain(-2.0, 2.0);

Outcome asymmetric() {
  int failures = 0;
  double worst_dep = 0, min_family = INFINITY;
  for (int k = 0; k < 100; ++k) {
    GeneratorSpec spec;
    spec.family = Verdict::A;
    spec.seed = derive_seed(4, 0, k);
    const GeneratedPair dep = generate_pair(spec);
    for (double alpha : {0.25, 0.4, 0.6}) {
      const ResidualReport r = sweep_cauchy(dep.F, dep.G, MeanSpec(alpha), kAsymmetricDomain, 40);
      worst_dep = std::max(worst_dep, r.max_abs / r.scale);
      failures += !r.passes();
    }
    for (Verdict fam : {Verdict::B, Verdict::C, Verdict::D}) {
      spec.family = fam;
      spec.seed = derive_seed(4, static_cast<std::uint64_t>(fam), k);
      const GeneratedPair p = generate_pair(spec);
      for (double alpha : {0.25, 0.4, 0.6}) {
        const ResidualReport r = sweep_cauchy(p.F, p.G, MeanSpec(alpha), kAsymmetricDomain, 40);
        min_family = std::min(min_family, r.max_abs / r.scale);
        failures += !(r.max_abs > kAsymmetricFail * r.scale);
      }
    }
  }
  Outcome o;
  o.pass = failures == 0;
  o.detail = fmt("dependent max %.2e, family min %.2e (> 1e-3)", worst_dep, min_family);
  return o;
}

// -- 5. integral criterion vs midpoint Cauchy residual ------------------------
//
// With f = (A + K I) g and G' = g the midpoint Cauchy residual at
// (x - h, x + h) equals K g(x) times the integral-criterion residual at (x, h).
// The two are therefore judged on one scale: S for the integral residual and
// |K g(x)| S for the Cauchy residual, S being the integral residual's scale.
// Each residual's own scale differs by that factor, so a nonzero pair close
// to the threshold can straddle it; such points are counted and reported but
// are not discordance.

constexpr double kEquivalenceTau = 1e-7;
constexpr double kIdentityTol = 1e-9;
constexpr int kEquivalencePoints = 200;

struct GInstance {
  SmoothFn g;
  Interval interval;
};

// Ten g inside a family (f and G then solve the midpoint equation and both
// residuals vanish) and ten outside it (both residuals are nonzero).
std::vector<GInstance> g_instances() {
  SplitMix64 rng(derive_seed(5, 0, 0));
  const Expr x = Expr::variable();
  const Interval wide(-1.5, 1.5);
  std::vector<GInstance> out;
  for (int k = 0; k < 4; ++k)
    out.push_back({SmoothFn(rng.uniform(0.5, 2.0) * exp(rng.uniform(0.3, 1.5) * x)), wide});
  for (int k = 0; k < 3; ++k)
    out.push_back({SmoothFn(rng.uniform(0.5, 2.0) * cosh(rng.uniform(0.3, 1.5) * x)), wide});
  // cos(mu x) stays positive on [-1.2, 1.2] for mu < 1.3.
  for (int k = 0; k < 3; ++k)
    out.push_back({SmoothFn(rng.uniform(0.5, 2.0) * cos(rng.uniform(0.3, 1.0) * x)), Interval(-1.2, 1.2)});
  for (int k = 0; k < 5; ++k)
    out.push_back({SmoothFn(rng.uniform(1.0, 2.0) + rng.uniform(0.5, 2.0) * pow(x, 2.0)), wide});
  for (int k = 0; k < 5; ++k)
    out.push_back({SmoothFn(rng.uniform(2.0, 3.0) + sin(rng.uniform(0.5, 2.0) * x)), wide});
  return out;
}

Outcome equivalence() {
  int discordant = 0, both_zero = 0, both_nonzero = 0, straddling = 0, identity_failures = 0;
  double worst_identity = 0;
  SplitMix64 rng(derive_seed(5, 1, 0));
  for (const GInstance& inst : g_instances()) {
    const ConstructionParams params{rng.uniform(-1.0, 1.0), rng.uniform_away_from_zero(-2.0, 2.0, 0.2), 0.0};
    const ConstructedDerivative f = construct_f(inst.g, params, inst.interval);
    const InverseSquareIntegral& inv = *f.inverse_square();
    const RealFunction fr = f;
    const Expr& g = inst.g.d0();
    for (int k = 0; k < kEquivalencePoints; ++k) {
      const double xc = rng.uniform(inst.interval.lo, inst.interval.hi);
      const double reach = std::min(xc - inst.interval.lo, inst.interval.hi - xc);
      const double h = rng.uniform(0.0, reach);
      const double a = xc - h, b = xc + h;
      if (h == 0.0) continue;
      const ResidualValue ic = integral_condition_terms(inv, xc, h);
      // Antiderivative differences by quadrature: F(b) - F(a) and G(b) - G(a).
      const NumericPair pair{[&](double t) { return t == a ? 0.0 : integrate(fr, a, t); }, fr,
                             [&](double t) { return t == a ? 0.0 : integrate(g, a, t); }, inst.g.d0()};
      const ResidualValue cr = cauchy_terms(pair, MeanSpec::midpoint(), a, b);

      const double factor = std::abs(params.K * eval(g, xc));
      const bool z_ic = std::abs(ic.residual) <= kEquivalenceTau * ic.scale;
      const bool z_cr = std::abs(cr.residual) <= kEquivalenceTau * factor * ic.scale;
      discordant += z_ic != z_cr;
      both_zero += z_ic && z_cr;
      both_nonzero += !z_ic && !z_cr;
      straddling += ic.vanishes(kEquivalenceTau) != cr.vanishes(kEquivalenceTau);

      const double gap = std::abs(cr.residual - params.K * eval(g, xc) * ic.residual) / (factor * ic.scale);
      worst_identity = std::max(worst_identity, gap);
      identity_failures += !(gap <= kIdentityTol);
    }
  }
  Outcome o;
  o.pass = discordant == 0 && identity_failures == 0 && both_zero > 0 && both_nonzero > 0;
  o.detail = "discordant " + std::to_string(discordant) + " (both zero " + std::to_string(both_zero) +
             ", both nonzero " + std::to_string(both_nonzero) + ")" +
             fmt(", identity gap %.2e (<= 1e-9)", worst_identity) + ", straddling on own scales " +
             std::to_string(straddling);
  return o;
}

// -- 6. four-function equation ------------------------------------------------

Outcome four_function() {
  int failures = 0;
  double worst = 0;
  const Interval dom(-2.0, 2.0);
  for (QuadrupleTag tag : {QuadrupleTag::A, QuadrupleTag::B, QuadrupleTag::C, QuadrupleTag::D}) {
    SplitMix64 rng(derive_seed(6, static_cast<std::uint64_t>(tag), 0));
    for (int k = 0; k < 50; ++k) {
      const oracle::Quadruple q = oracle::random_quadruple(tag, rng);
      const CaseCheckReport r = sr_case_check(q.qc, q.phi, q.psi, dom, 40);
      worst = std::max(worst, r.grid.max_abs / r.grid.scale);
      failures += !(r.grid.max_abs <= 1e-8 * r.grid.scale);
    }
  }
  double worst_reduction = 0;
  SplitMix64 rng(derive_seed(6, 9, 0));
  for (int k = 0; k < 1000; ++k) {
    GeneratorSpec spec;
    spec.family = static_cast<Verdict>(k % 4);
    spec.seed = derive_seed(6, 10, k / 4);
    const GeneratedPair p = generate_pair(spec);
    const SmoothFn F = perturb(p.F, 0.3, PerturbMode::AddSine);
    double a = rng.uniform(-3.0, 3.0), b = rng.uniform(-3.0, 3.0);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    const ResidualValue cr = cauchy_terms(F, p.G, MeanSpec::midpoint(), a, b);
    const double sr = sr_residual(F, p.G, p.G.derivative(), F.derivative(), b, a);
    const double gap = std::abs(sr - cr.residual) / cr.scale;
    worst_reduction = std::max(worst_reduction, gap);
    failures += !(gap <= 1e-12);
  }
  Outcome o;
  o.pass = failures == 0;
  o.detail = fmt("forward max %.2e (<= 1e-8), reduction gap %.2e (<= 1e-12)", worst, worst_reduction);
  return o;
}

// -- 7. numerical substrate ---------------------------------------------------

Outcome substrate() {
  int failures = 0;
  double worst_fd = 0;
  oracle::ExprSourceGenerator gen(7);
  for (int k = 0; k < 50; ++k) {
    const SmoothFn s = SmoothFn::parse(gen(3));
    const oracle::Fn f = [&](double t) { return s(t); };
    for (double x : {-1.3, -0.2, 0.6, 1.4}) {
      for (int order = 1; order <= 3; ++order) {
        const double sym = s.eval(order, x);
        const double fd = oracle::derivative(f, x, order, order == 3 ? 2e-2 : 1e-2, 2);
        const double rel = std::abs(sym - fd) / (1 + std::abs(sym));
        worst_fd = std::max(worst_fd, rel);
        failures += !(rel <= 1e-6);
      }
    }
  }
  double worst_add = 0;
  SplitMix64 rng(derive_seed(7, 1, 0));
  const QuadratureSpec spec;
  const Expr fns[] = {parse("exp(x)*cos(3*x)"), parse("1/(2 + sin(x))"), parse("x^4 - x"), parse("sqrt(4 + x^2)")};
  for (int k = 0; k < 100; ++k) {
    double p[3] = {rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    std::sort(p, p + 3);
    const Expr& f = fns[k % 4];
    const double gap = std::abs(integrate(f, p[0], p[2], spec) - integrate(f, p[0], p[1], spec) -
                                integrate(f, p[1], p[2], spec));
    worst_add = std::max(worst_add, gap);
    failures += !(gap <= 10 * spec.abs_tol);
  }
  const ZeroSetDecomposition z = zero_set(SmoothFn::parse("sin(pi*x)"), Interval(-2.5, 2.5));
  double worst_zero = 0;
  if (z.nonvanishing.size() != 6) {
    ++failures;
    worst_zero = INFINITY;
  } else {
    for (int k = 0; k < 5; ++k) {
      worst_zero = std::max(worst_zero, std::abs(z.nonvanishing[k].hi - (k - 2)));
      worst_zero = std::max(worst_zero, std::abs(z.nonvanishing[k + 1].lo - (k - 2)));
    }
    failures += !(worst_zero <= 1e-6);
  }
  Outcome o;
  o.pass = failures == 0;
  o.detail = fmt("derivative rel %.2e, additivity %.2e", worst_fd, worst_add) + fmt(", zeros %.2e", worst_zero);
  return o;
}

// -- 8. threshold separation --------------------------------------------------

constexpr double kPerturbation = 1e-3;

Outcome separation() {
  int failures = 0;
  double worst_clean = 0, min_perturbed = INFINITY;
  for (Verdict fam : {Verdict::B, Verdict::C, Verdict::D}) {
    for (int k = 0; k < 30; ++k) {
      GeneratorSpec spec;
      spec.family = fam;
      spec.seed = derive_seed(8, static_cast<std::uint64_t>(fam), k);
      const GeneratedPair p = generate_pair(spec);
      const ResidualReport clean = sweep_cauchy(p.F, p.G, MeanSpec::midpoint(), kWide, 40);
      worst_clean = std::max(worst_clean, clean.max_abs / clean.scale);
      failures += !clean.passes();
      for (PerturbMode mode : {PerturbMode::AddCubic, PerturbMode::AddSine}) {
        const ResidualReport r = sweep_cauchy(perturb(p.F, kPerturbation, mode), p.G, MeanSpec::midpoint(), kWide, 40);
        min_perturbed = std::min(min_perturbed, r.max_abs / r.scale);
        failures += !(r.max_abs > 10 * kDefaultTau * r.scale);
      }
    }
  }
  Outcome o;
  o.pass = failures == 0;
  o.detail = fmt("clean max %.2e, perturbed min %.2e (> 1e-7)", worst_clean, min_perturbed);
  return o;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "worked example end to end", 5, worked_example},
      {2, "midpoint and weighted Lagrange", 10, lagrange},
      {3, "classification round trip", 60, round_trip},
      {4, "weighted means force dependence", 30, asymmetric},
      {5, "integral criterion equivalence", 20, equivalence},
      {6, "four-function equation", 20, four_function},
      {7, "numerical substrate", 10, substrate},
      {8, "threshold separation", 10, separation},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool pass = o.pass && secs <= c.budget_seconds;
    failed += !pass;
    std::printf("%s  %d  %-32s  %s  %.2fs / %.0fs\n", pass ? "PASS" : "FAIL", c.number, c.name, o.detail.c_str(),
                secs, c.budget_seconds);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
