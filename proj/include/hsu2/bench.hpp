#pragma once

// Random-experiment benchmark of the linear and quadratic steppers:
// correct digits against the reference propagator and time per evolve, as
// functions of the partition count n.

#include <cstdint>
#include <utility>
#include <vector>

#include "hsu2/propagator.hpp"

namespace hsu2 {

struct BenchConfig {
  int samples = 1000;
  std::vector<int> nValues{10, 100, 1000};
  double paramRange = 5.0;  // J and amplitude drawn from [-range, range]
  std::uint64_t seed = 20240607;
  double referenceTol = 1e-10;
  unsigned threads = 1;
};

void validate(const BenchConfig& cfg);

struct BenchRecord {
  StepOrder order = StepOrder::Quadratic;
  int n = 0;
  int samples = 0;
  double meanDigits = 0;
  double medianDigits = 0;
  double minDigits = 0;
  double meanTime = 0;    // seconds per evolve
  double medianTime = 0;  // seconds per evolve
  int skipped = 0;
};

/// p = -log10(max |U - Uref|), clamped to [0, 15].
double digits_of_precision(const Matrix2cd& u, const Matrix2cd& uref);

/// (J, amplitude) for a sample; depends only on (seed, index).
std::pair<double, double> draw_sample(std::uint64_t seed, std::uint64_t index, double range);

/// One record per (order, n): linear rows first, each in the order of cfg.nValues.
std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg);

}  // namespace hsu2
