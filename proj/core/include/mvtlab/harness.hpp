#pragma once

// Seeded generators of solution pairs for each family, perturbations that
// break them, and the batch driver behind the round-trip experiments.
//
// Pseudo-random numbers come from SplitMix64 so that a seed reproduces the
// same draws on every platform:
//
//   state += 0x9E3779B97F4A7C15
//   z = state
//   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
//   z = (z ^ (z >> 27)) * 0x94D049BB133111EB
//   return z ^ (z >> 31)
//
// A uniform double in [0, 1) is (next() >> 11) * 2^-53. Draw k of family f in
// a suite uses the seed derive_seed(suite_seed, f, k).

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mvtlab/calculus.hpp"
#include "mvtlab/classify.hpp"
#include "mvtlab/expr.hpp"
#include "mvtlab/mvt.hpp"

namespace mvtlab {

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) noexcept : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept { return std::numeric_limits<result_type>::max(); }

  result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  double uniform01() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }
  /// Uniform on [lo, hi) with |value| >= floor (rejection).
  double uniform_away_from_zero(double lo, double hi, double floor);

 private:
  std::uint64_t state_;
};

/// Per-draw seed: first output of SplitMix64 seeded with
/// (seed ^ stream * 0xD1B54A32D192ED03) + index * 0x9E3779B97F4A7C15.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) noexcept;

struct GeneratorSpec {
  /// A, B, C or D.
  Verdict family = Verdict::B;
  std::uint64_t seed = 0;
  std::pair<double, double> coeff_range{-2.0, 2.0};
  std::pair<double, double> mu_range{0.3, 3.0};
  double degeneracy_floor = 0.1;

  void validate() const;
};

struct GeneratedPair {
  SmoothFn F;
  SmoothFn G;
  Classification ground_truth;
  /// Family of the span that G was drawn from (for case a, G's own family).
  Family span_family = Family::Quadratic;
  double mu = 0.0;
};

/// Deterministic for a fixed spec. Families b-d reject draws whose leading
/// coefficients (x^2 for b, the larger non-constant one for c and d) fall
/// below the floor, and draws whose non-constant parts are nearly parallel
/// (|A1 B2 - A2 B1| < floor), which would make {1, F, G} dependent.
/// Family a draws G from a random span and sets F = c1 G + c0, |c1| >= floor.
GeneratedPair generate_pair(const GeneratorSpec& spec);

enum class PerturbMode { AddCubic, AddSine };

/// F + epsilon x^3 or F + epsilon sin(5x). epsilon = 0 returns F unchanged.
SmoothFn perturb(const SmoothFn& F, double epsilon, PerturbMode mode);

struct SuiteConfig {
  std::vector<Verdict> families{Verdict::A, Verdict::B, Verdict::C, Verdict::D};
  int count = 200;
  std::uint64_t seed = 20140613;
  Interval domain{-3.0, 3.0};
  double alpha = 0.5;
  int sweep_n = 40;
  double tau = kDefaultTau;
  std::pair<double, double> coeff_range{-2.0, 2.0};
  std::pair<double, double> mu_range{0.3, 3.0};
  double degeneracy_floor = 0.1;
  /// 0 picks the hardware concurrency.
  int threads = 0;
  double min_diagonal = 0.99;
  double mu_rel_tolerance = 1e-6;

  void validate() const;
};

struct DrawRecord {
  Verdict family = Verdict::A;
  int index = 0;
  std::uint64_t seed = 0;
  Verdict expected = Verdict::A;
  Verdict verdict = Verdict::Unclassified;
  bool sweep_passed = false;
  double sweep_max_abs = 0.0;
  double sweep_scale = 1.0;
  double mu_true = 0.0;
  double mu_found = 0.0;
  bool correct = false;
  std::string error;
};

inline constexpr int kVerdictCount = 5;

struct SuiteReport {
  SuiteConfig config;
  /// confusion[truth][verdict], indexed by static_cast<int>(Verdict).
  std::array<std::array<int, kVerdictCount>, kVerdictCount> confusion{};
  int total = 0;
  int correct = 0;
  double diagonal_fraction = 0.0;
  /// Over c/d draws classified into their own family.
  double max_mu_rel_error = 0.0;
  std::vector<DrawRecord> draws;

  bool passed() const noexcept {
    return diagonal_fraction >= config.min_diagonal && max_mu_rel_error <= config.mu_rel_tolerance;
  }
};

/// Verdict a pair of the given family must receive under the mean m: the
/// family itself for the midpoint, and only a (or unclassified) otherwise.
Verdict expected_verdict(Verdict family, const MeanSpec& m) noexcept;

/// generate -> sweep -> classify for every requested draw. Individual
/// failures are recorded, never thrown. The report does not depend on the
/// number of threads.
SuiteReport run_suite(const SuiteConfig& config);

}  // namespace mvtlab
