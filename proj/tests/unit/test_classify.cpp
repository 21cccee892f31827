#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "mvtlab/classify.hpp"
#include "mvtlab/harness.hpp"

using namespace mvtlab;

namespace {

SmoothFn fn(const char* src) { return SmoothFn::parse(src); }

const Interval kDomain(-3.0, 3.0);

double max_abs_diff(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  double d = 0;
  for (int i = 0; i < 3; ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

double max_abs(const std::array<double, 3>& a) {
  return std::max({std::abs(a[0]), std::abs(a[1]), std::abs(a[2])});
}

// Unit vector v is parallel to w when |v . w| = |w|.
double parallel_defect(const std::array<double, 3>& v, std::array<double, 3> w) {
  const double n = std::sqrt(w[0] * w[0] + w[1] * w[1] + w[2] * w[2]);
  for (double& x : w) x /= n;
  return 1.0 - std::abs(v[0] * w[0] + v[1] * w[1] + v[2] * w[2]);
}

}  // namespace

TEST(Verdict, StringRoundTrip) {
  for (Verdict v : {Verdict::A, Verdict::B, Verdict::C, Verdict::D, Verdict::Unclassified})
    EXPECT_EQ(verdict_from_string(to_string(v)), v);
  EXPECT_FALSE(verdict_from_string("e").has_value());
}

TEST(Dependence, Examples) {
  const DependenceVerdict lin = dependence_test(fn("2*sin(x)+5"), fn("sin(x)"), kDomain);
  EXPECT_TRUE(lin.dependent);
  EXPECT_LT(parallel_defect(lin.coefficients, {5.0, -1.0, 2.0}), 1e-12);

  const DependenceVerdict ind = dependence_test(fn("x^2"), fn("x"), kDomain);
  EXPECT_FALSE(ind.dependent);
  EXPECT_GT(ind.condition_ratio, 1e-3);

  const DependenceVerdict shifted = dependence_test(fn("3*x^2-2"), fn("x^2+1"), kDomain);
  EXPECT_TRUE(shifted.dependent);
  EXPECT_LT(parallel_defect(shifted.coefficients, {-5.0, -1.0, 3.0}), 1e-12);
}

TEST(Dependence, CoefficientsAreUnitAndResidualSmall) {
  const DependenceVerdict d = dependence_test(fn("4*exp(x) - 1"), fn("exp(x)"), kDomain);
  ASSERT_TRUE(d.dependent);
  const auto& c = d.coefficients;
  EXPECT_NEAR(c[0] * c[0] + c[1] * c[1] + c[2] * c[2], 1.0, 1e-14);
  EXPECT_LE(d.residual_rms, 1e-7);
}

TEST(Dependence, RejectsTooFewSamples) {
  EXPECT_THROW(dependence_test(fn("x"), fn("x^2"), kDomain, 7), std::invalid_argument);
}

TEST(Lambda, Examples) {
  EXPECT_NEAR(lambda_estimate(fn("exp(x)"), kDomain).lambda, 4.0, 1e-12);
  EXPECT_NEAR(lambda_estimate(fn("sin(x)"), kDomain).lambda, -4.0, 1e-9);
  EXPECT_EQ(lambda_estimate(fn("x + 7"), Interval(0.0, 1.0)).lambda, 0.0);
}

TEST(Lambda, AllProbesAtZeroThrows) {
  EXPECT_THROW(lambda_estimate(fn("0*x"), kDomain), DomainError);
}

TEST(FamilyFit, Examples) {
  const FamilyFit e = family_fit(fn("cosh(x)"), fn("exp(x)"), kDomain, 4.0);
  EXPECT_EQ(e.family, Family::Exponential);
  EXPECT_DOUBLE_EQ(e.mu, 1.0);
  EXPECT_LT(max_abs_diff(e.coeffs_F, {0.0, 0.5, 0.5}), 1e-9);
  EXPECT_LT(max_abs_diff(e.coeffs_G, {0.0, 1.0, 0.0}), 1e-9);
  EXPECT_LE(e.rms_residual, 1e-9);

  const FamilyFit q = family_fit(fn("x^2"), fn("x"), kDomain, 0.0);
  EXPECT_EQ(q.family, Family::Quadratic);
  EXPECT_EQ(q.mu, 0.0);
  EXPECT_LT(max_abs_diff(q.coeffs_F, {0.0, 0.0, 1.0}), 1e-12);
  EXPECT_LT(max_abs_diff(q.coeffs_G, {0.0, 1.0, 0.0}), 1e-12);

  const FamilyFit t = family_fit(fn("sin(2*x)"), fn("cos(2*x)"), kDomain, -16.0);
  EXPECT_EQ(t.family, Family::Trigonometric);
  EXPECT_DOUBLE_EQ(t.mu, 2.0);
  EXPECT_LE(t.rms_residual, 1e-9);
}

TEST(FamilyExpression, MatchesBasis) {
  const std::array<double, 3> c{0.5, -1.25, 2.0};
  for (Family f : {Family::Quadratic, Family::Exponential, Family::Trigonometric}) {
    const Expr e = family_expression(f, 0.7, c);
    for (double x : {-1.5, 0.0, 0.9}) {
      double want = 0;
      for (int i = 0; i < 3; ++i) want += c[i] * basis_value(f, 0.7, i, x);
      EXPECT_NEAR(eval(e, x), want, 1e-14 * (1 + std::abs(want)));
    }
  }
}

TEST(Classify, Examples) {
  const Classification c = classify_pair(fn("cosh(x)"), fn("exp(x)"), MeanSpec::midpoint(), kDomain);
  EXPECT_EQ(c.verdict, Verdict::C);
  ASSERT_TRUE(c.fit.has_value());
  EXPECT_NEAR(c.fit->mu, 1.0, 1e-6);
  EXPECT_TRUE(c.sweep_passed);

  EXPECT_EQ(classify_pair(fn("x^2"), fn("x"), MeanSpec::midpoint(), kDomain).verdict, Verdict::B);

  const Classification u = classify_pair(fn("x^2"), fn("x + 1"), MeanSpec(1.0 / 3.0), kDomain);
  EXPECT_EQ(u.verdict, Verdict::Unclassified);
  EXPECT_FALSE(u.sweep_passed);
  EXPECT_GT(u.sweep_max_abs, kDefaultTau * u.sweep_scale);
  EXPECT_FALSE(u.diagnostics.empty());
}

TEST(Classify, AsymmetricDependentPairIsA) {
  const Classification c = classify_pair(fn("2*sin(x)+5"), fn("sin(x)"), MeanSpec(0.3), kDomain);
  EXPECT_EQ(c.verdict, Verdict::A);
  ASSERT_TRUE(c.dependence.has_value());
  EXPECT_TRUE(c.dependence->dependent);
}

TEST(Classify, ConstantGIsA) {
  const Classification c = classify_pair(fn("x^2"), fn("3"), MeanSpec::midpoint(), kDomain);
  EXPECT_EQ(c.verdict, Verdict::A);
}

TEST(Classify, VerdictInvariants) {
  for (Verdict fam : {Verdict::A, Verdict::B, Verdict::C, Verdict::D}) {
    GeneratorSpec spec;
    spec.family = fam;
    spec.seed = 77;
    const GeneratedPair p = generate_pair(spec);
    const Classification c = classify_pair(p.F, p.G, MeanSpec::midpoint(), kDomain);
    if (c.verdict == Verdict::A) {
      ASSERT_TRUE(c.dependence.has_value());
      EXPECT_TRUE(c.dependence->dependent);
    } else if (c.verdict != Verdict::Unclassified) {
      ASSERT_TRUE(c.fit.has_value());
      EXPECT_EQ(verdict_for(c.fit->family), c.verdict);
    }
    // Tags cover the domain in order without overlap.
    for (std::size_t i = 1; i < c.per_interval_tags.size(); ++i)
      EXPECT_LE(c.per_interval_tags[i - 1].interval.hi, c.per_interval_tags[i].interval.lo);
  }
}

// -- properties ---------------------------------------------------------------

TEST(ClassifyProperty, RoundTripFamilies) {
  for (Verdict fam : {Verdict::B, Verdict::C, Verdict::D}) {
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
      GeneratorSpec spec;
      spec.family = fam;
      spec.seed = derive_seed(99, static_cast<std::uint64_t>(fam), seed);
      const GeneratedPair p = generate_pair(spec);
      const Classification c = classify_pair(p.F, p.G, MeanSpec::midpoint(), kDomain);
      ASSERT_EQ(c.verdict, fam) << to_string(fam) << " seed " << seed << ": " << c.diagnostics;
      const FamilyFit& want = *p.ground_truth.fit;
      const FamilyFit& got = *c.fit;
      if (fam != Verdict::B) {
        EXPECT_LE(std::abs(got.mu - want.mu), 1e-6 * want.mu);
      }
      EXPECT_LE(max_abs_diff(got.coeffs_F, want.coeffs_F), 1e-6 * max_abs(want.coeffs_F));
      EXPECT_LE(max_abs_diff(got.coeffs_G, want.coeffs_G), 1e-6 * max_abs(want.coeffs_G));
    }
  }
}

TEST(ClassifyProperty, RoundTripDependent) {
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    GeneratorSpec spec;
    spec.family = Verdict::A;
    spec.seed = seed;
    const GeneratedPair p = generate_pair(spec);
    for (double alpha : {0.5, 0.3}) {
      const Classification c = classify_pair(p.F, p.G, MeanSpec(alpha), kDomain);
      ASSERT_EQ(c.verdict, Verdict::A) << "seed " << seed << ": " << c.diagnostics;
      EXPECT_LT(parallel_defect(c.dependence->coefficients, p.ground_truth.dependence->coefficients), 1e-9);
    }
  }
}

TEST(ClassifyProperty, DependencePrecedesFamily) {
  EXPECT_EQ(classify_pair(fn("2*x^2"), fn("x^2"), MeanSpec::midpoint(), kDomain).verdict, Verdict::A);
  EXPECT_EQ(classify_pair(fn("3*cos(2*x) + 1"), fn("cos(2*x)"), MeanSpec::midpoint(), kDomain).verdict,
            Verdict::A);
}

TEST(ClassifyProperty, ScaleInvariance) {
  SplitMix64 rng(5);
  for (Verdict fam : {Verdict::A, Verdict::B, Verdict::C, Verdict::D}) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      GeneratorSpec spec;
      spec.family = fam;
      spec.seed = 1000 + seed;
      const GeneratedPair p = generate_pair(spec);
      const double s = rng.uniform(0.1, 10.0);
      const double t = rng.uniform(0.1, 10.0);
      const Classification base = classify_pair(p.F, p.G, MeanSpec::midpoint(), kDomain);
      const Classification scaled =
          classify_pair(smooth(s * p.F.d0()), smooth(t * p.G.d0()), MeanSpec::midpoint(), kDomain);
      EXPECT_EQ(base.verdict, scaled.verdict);
      if (base.fit && scaled.fit && base.verdict != Verdict::A && base.verdict != Verdict::Unclassified) {
        for (int i = 0; i < 3; ++i) {
          EXPECT_NEAR(scaled.fit->coeffs_F[i], s * base.fit->coeffs_F[i], 1e-6 * s * max_abs(base.fit->coeffs_F));
          EXPECT_NEAR(scaled.fit->coeffs_G[i], t * base.fit->coeffs_G[i], 1e-6 * t * max_abs(base.fit->coeffs_G));
        }
      }
    }
  }
}

TEST(ClassifyProperty, LambdaConsistency) {
  for (Verdict fam : {Verdict::C, Verdict::D}) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
      GeneratorSpec spec;
      spec.family = fam;
      spec.seed = 500 + seed;
      const GeneratedPair p = generate_pair(spec);
      const Classification c = classify_pair(p.F, p.G, MeanSpec::midpoint(), kDomain);
      ASSERT_EQ(c.verdict, fam);
      EXPECT_LE(c.lambda_spread, 1e-6 * (1 + std::abs(c.lambda_estimate)));
    }
  }
}

TEST(ClassifyProperty, GluingAcrossZerosOfG) {
  // g = -sin x vanishes at -pi, 0 and pi inside the domain.
  const Interval wide(-3.5, 3.5);
  const Classification c = classify_pair(fn("sin(x)"), fn("cos(x)"), MeanSpec::midpoint(), wide);
  EXPECT_EQ(c.verdict, Verdict::D);
  ASSERT_EQ(c.per_interval_tags.size(), 4u);
  for (const TaggedInterval& t : c.per_interval_tags) EXPECT_EQ(t.tag, IntervalTag::Trigonometric);
  ASSERT_TRUE(c.fit.has_value());
  EXPECT_NEAR(c.fit->mu, 1.0, 1e-6);

  // cosh about 0: g = sinh vanishes at the symmetry point only.
  const Classification e = classify_pair(fn("2*exp(x) - exp(-x)"), fn("cosh(x)"), MeanSpec::midpoint(), wide);
  EXPECT_EQ(e.verdict, Verdict::C);
  ASSERT_EQ(e.per_interval_tags.size(), 2u);
  for (const TaggedInterval& t : e.per_interval_tags) EXPECT_EQ(t.tag, IntervalTag::Exponential);
}
