#include "mvtlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace mvtlab {

double SplitMix64::uniform_away_from_zero(double lo, double hi, double floor) {
  if (std::max(std::abs(lo), std::abs(hi)) <= floor)
    throw std::invalid_argument("range lies entirely inside the degeneracy floor");
  for (;;) {
    const double v = uniform(lo, hi);
    if (std::abs(v) >= floor) return v;
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept {
  SplitMix64 rng((seed ^ (stream * 0xD1B54A32D192ED03ULL)) + index * 0x9E3779B97F4A7C15ULL);
  return rng();
}

void GeneratorSpec::validate() const {
  if (family == Verdict::Unclassified) throw std::invalid_argument("generator family must be a-d");
  if (!(coeff_range.first < coeff_range.second)) throw std::invalid_argument("empty coeff_range");
  if (!(mu_range.first < mu_range.second)) throw std::invalid_argument("empty mu_range");
  if (!(mu_range.first > 0.0)) throw std::invalid_argument("mu_range must be positive");
  if (!(degeneracy_floor > 0.0)) throw std::invalid_argument("degeneracy_floor must be positive");
}

namespace {

Family family_of(Verdict v) {
  switch (v) {
    case Verdict::B: return Family::Quadratic;
    case Verdict::C: return Family::Exponential;
    case Verdict::D: return Family::Trigonometric;
    default: break;
  }
  throw std::invalid_argument("verdict has no span family");
}

double leading(Family family, const std::array<double, 3>& c) {
  return family == Family::Quadratic ? std::abs(c[2]) : std::max(std::abs(c[1]), std::abs(c[2]));
}

std::array<double, 3> draw_coeffs(SplitMix64& rng, const GeneratorSpec& spec) {
  return {rng.uniform(spec.coeff_range.first, spec.coeff_range.second),
          rng.uniform(spec.coeff_range.first, spec.coeff_range.second),
          rng.uniform(spec.coeff_range.first, spec.coeff_range.second)};
}

std::array<double, 3> draw_nondegenerate(SplitMix64& rng, const GeneratorSpec& spec, Family family) {
  for (;;) {
    const auto c = draw_coeffs(rng, spec);
    if (leading(family, c) >= spec.degeneracy_floor) return c;
  }
}

double draw_mu(SplitMix64& rng, const GeneratorSpec& spec, Family family) {
  return family == Family::Quadratic ? 0.0 : rng.uniform(spec.mu_range.first, spec.mu_range.second);
}

std::array<double, 3> unit(std::array<double, 3> c) {
  const double n = std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
  for (double& v : c) v /= n;
  return c;
}

}  // namespace

GeneratedPair generate_pair(const GeneratorSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  GeneratedPair out;

  if (spec.family == Verdict::A) {
    static constexpr Family spans[] = {Family::Quadratic, Family::Exponential, Family::Trigonometric};
    const Family family = spans[rng() % 3];
    const double mu = draw_mu(rng, spec, family);
    const auto cG = draw_nondegenerate(rng, spec, family);
    const double c1 = rng.uniform_away_from_zero(spec.coeff_range.first, spec.coeff_range.second,
                                                 spec.degeneracy_floor);
    const double c0 = rng.uniform(spec.coeff_range.first, spec.coeff_range.second);

    const Expr G = family_expression(family, mu, cG);
    out.G = SmoothFn(G, "G");
    out.F = SmoothFn(c1 * G + c0, "F");
    out.span_family = family;
    out.mu = mu;
    out.ground_truth.verdict = Verdict::A;
    DependenceVerdict dep;
    dep.dependent = true;
    dep.condition_ratio = 0.0;
    dep.coefficients = unit({c0, -1.0, c1});
    out.ground_truth.dependence = dep;
    return out;
  }

  const Family family = family_of(spec.family);
  for (;;) {
    const double mu = draw_mu(rng, spec, family);
    const auto cF = draw_nondegenerate(rng, spec, family);
    const auto cG = draw_nondegenerate(rng, spec, family);
    if (std::abs(cF[1] * cG[2] - cF[2] * cG[1]) < spec.degeneracy_floor) continue;

    out.F = SmoothFn(family_expression(family, mu, cF), "F");
    out.G = SmoothFn(family_expression(family, mu, cG), "G");
    out.span_family = family;
    out.mu = mu;
    out.ground_truth.verdict = spec.family;
    FamilyFit fit;
    fit.family = family;
    fit.mu = mu;
    fit.coeffs_F = cF;
    fit.coeffs_G = cG;
    out.ground_truth.fit = fit;
    out.ground_truth.lambda_estimate = (family == Family::Trigonometric ? -4.0 : 4.0) * mu * mu;
    return out;
  }
}

SmoothFn perturb(const SmoothFn& F, double epsilon, PerturbMode mode) {
  if (epsilon < 0.0) throw std::invalid_argument("perturbation size must be non-negative");
  if (epsilon == 0.0) return F;
  const Expr x = Expr::variable();
  const Expr bump = mode == PerturbMode::AddCubic ? pow(x, 3.0) : sin(5.0 * x);
  return SmoothFn(F.d0() + epsilon * bump, F.label() + (mode == PerturbMode::AddCubic ? " + eps*x^3" : " + eps*sin(5x)"));
}

void SuiteConfig::validate() const {
  if (families.empty()) throw std::invalid_argument("suite needs at least one family");
  for (Verdict v : families)
    if (v == Verdict::Unclassified) throw std::invalid_argument("suite families must be a-d");
  if (count < 1) throw std::invalid_argument("suite count must be positive");
  if (sweep_n < 2) throw std::invalid_argument("sweep_n must be at least 2");
  if (!(tau > 0.0)) throw std::invalid_argument("tau must be positive");
  if (threads < 0) throw std::invalid_argument("threads must be non-negative");
  if (!(min_diagonal >= 0.0 && min_diagonal <= 1.0)) throw std::invalid_argument("min_diagonal must lie in [0, 1]");
  if (!(mu_rel_tolerance > 0.0)) throw std::invalid_argument("mu_rel_tolerance must be positive");
  MeanSpec check(alpha);
  (void)check;
}

Verdict expected_verdict(Verdict family, const MeanSpec& m) noexcept {
  if (m.symmetric() || family == Verdict::A) return family;
  return Verdict::Unclassified;
}

namespace {

DrawRecord run_draw(const SuiteConfig& config, Verdict family, int index) {
  DrawRecord rec;
  rec.family = family;
  rec.index = index;
  rec.seed = derive_seed(config.seed, static_cast<std::uint64_t>(family), static_cast<std::uint64_t>(index));
  const MeanSpec m(config.alpha);
  rec.expected = expected_verdict(family, m);
  try {
    GeneratorSpec spec;
    spec.family = family;
    spec.seed = rec.seed;
    spec.coeff_range = config.coeff_range;
    spec.mu_range = config.mu_range;
    spec.degeneracy_floor = config.degeneracy_floor;
    const GeneratedPair pair = generate_pair(spec);
    rec.mu_true = pair.mu;

    ClassifyOptions opt;
    opt.tau = config.tau;
    opt.sweep_n = config.sweep_n;
    const Classification c = classify_pair(pair.F, pair.G, m, config.domain, opt);
    rec.verdict = c.verdict;
    rec.sweep_passed = c.sweep_passed;
    rec.sweep_max_abs = c.sweep_max_abs;
    rec.sweep_scale = c.sweep_scale;
    if (c.fit) rec.mu_found = c.fit->mu;
    rec.correct = rec.verdict == rec.expected;
    if (!rec.correct) rec.error = c.diagnostics;
  } catch (const std::exception& e) {
    rec.error = e.what();
  }
  return rec;
}

}  // namespace

SuiteReport run_suite(const SuiteConfig& config) {
  config.validate();
  SuiteReport report;
  report.config = config;

  std::vector<std::pair<Verdict, int>> jobs;
  for (Verdict f : config.families)
    for (int k = 0; k < config.count; ++k) jobs.emplace_back(f, k);
  report.draws.resize(jobs.size());

  unsigned workers = config.threads > 0 ? static_cast<unsigned>(config.threads)
                                        : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(jobs.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++)
      report.draws[i] = run_draw(config, jobs[i].first, jobs[i].second);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }

  for (const DrawRecord& d : report.draws) {
    ++report.confusion[static_cast<std::size_t>(d.family)][static_cast<std::size_t>(d.verdict)];
    ++report.total;
    if (d.correct) ++report.correct;
    if (d.correct && (d.verdict == Verdict::C || d.verdict == Verdict::D) && d.mu_true > 0.0) {
      report.max_mu_rel_error =
          std::max(report.max_mu_rel_error, std::abs(d.mu_found - d.mu_true) / d.mu_true);
    }
  }
  report.diagonal_fraction =
      report.total > 0 ? static_cast<double>(report.correct) / report.total : 0.0;
  return report;
}

}  // namespace mvtlab
