#include <benchmark/benchmark.h>

#include "mvtlab/calculus.hpp"
#include "mvtlab/classify.hpp"
#include "mvtlab/expr.hpp"
#include "mvtlab/mvt.hpp"

namespace {

using namespace mvtlab;

void BM_Eval(benchmark::State& state) {
  const Expr e = parse("exp(x/3) * sin(2*x) + sqrt(1 + x^2)");
  double x = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(eval(e, x));
    x += 1e-9;
  }
}
BENCHMARK(BM_Eval);

void BM_Differentiate(benchmark::State& state) {
  const Expr e = parse("exp(x/3) * sin(2*x) + sqrt(1 + x^2)");
  for (auto _ : state) benchmark::DoNotOptimize(differentiate(differentiate(e)));
}
BENCHMARK(BM_Differentiate);

void BM_Integrate(benchmark::State& state) {
  const Expr e = parse("1/(1 + x^2)^2");
  for (auto _ : state) benchmark::DoNotOptimize(integrate(e, -3.0, 3.0));
}
BENCHMARK(BM_Integrate);

void BM_SweepCauchy(benchmark::State& state) {
  const SmoothFn F = SmoothFn::parse("cosh(x)");
  const SmoothFn G = SmoothFn::parse("exp(x)");
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state)
    benchmark::DoNotOptimize(sweep_cauchy(F, G, MeanSpec::midpoint(), Interval(-3.0, 3.0), n).max_abs);
  state.SetComplexityN(n);
}
BENCHMARK(BM_SweepCauchy)->Arg(16)->Arg(64)->Arg(256)->Complexity(benchmark::oNSquared);

void BM_ClassifyPair(benchmark::State& state) {
  const SmoothFn F = SmoothFn::parse("0.5*sin(1.7*x) - 1.2*cos(1.7*x) + 0.3");
  const SmoothFn G = SmoothFn::parse("1.1*sin(1.7*x) + 0.4*cos(1.7*x)");
  for (auto _ : state)
    benchmark::DoNotOptimize(classify_pair(F, G, MeanSpec::midpoint(), Interval(-3.0, 3.0)).verdict);
}
BENCHMARK(BM_ClassifyPair);

void BM_ConstructF(benchmark::State& state) {
  const SmoothFn g = SmoothFn::parse("1 + x^2");
  for (auto _ : state) {
    const ConstructedDerivative f = construct_f(g, {0.5, 1.0, 0.0}, Interval(-2.0, 2.0));
    benchmark::DoNotOptimize(f(1.3));
  }
}
BENCHMARK(BM_ConstructF);

}  // namespace

BENCHMARK_MAIN();
