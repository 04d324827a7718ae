#include "hsu2/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>

#include "hsu2/parallel.hpp"

namespace hsu2 {

namespace {

constexpr double kMaxDigits = 15.0;

double uniform(std::mt19937_64& rng, double lo, double hi) {
  // 53 random mantissa bits; std::uniform_real_distribution is not portable across libraries.
  const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
  return lo + (hi - lo) * u;
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  return 0.5 * (upper + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
}

struct SampleResult {
  bool skipped = false;
  std::vector<double> digits;  // [order][n] flattened
  std::vector<double> seconds;
};

}  // namespace

void validate(const BenchConfig& cfg) {
  if (cfg.samples < 1) throw ValidationError("samples must be >= 1");
  if (cfg.nValues.empty()) throw ValidationError("nValues must not be empty");
  for (int n : cfg.nValues)
    if (n < 1) throw ValidationError("every partition count must be >= 1");
  if (!(cfg.paramRange > 0.0) || !std::isfinite(cfg.paramRange))
    throw ValidationError("paramRange must be positive and finite");
  if (!(cfg.referenceTol > 0.0)) throw ValidationError("referenceTol must be positive");
}

double digits_of_precision(const Matrix2cd& u, const Matrix2cd& uref) {
  const double err = max_abs_diff(u, uref);
  if (err == 0.0) return kMaxDigits;
  return std::clamp(-std::log10(err), 0.0, kMaxDigits);
}

std::pair<double, double> draw_sample(std::uint64_t seed, std::uint64_t index, double range) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
  std::mt19937_64 rng(seq);
  const double j = uniform(rng, -range, range);
  const double a = uniform(rng, -range, range);
  return {j, a};
}

std::vector<BenchRecord> run_benchmark(const BenchConfig& cfg) {
  validate(cfg);
  constexpr StepOrder kOrders[] = {StepOrder::Linear, StepOrder::Quadratic};
  const std::size_t nCount = cfg.nValues.size();
  const std::size_t slots = 2 * nCount;

  std::vector<SampleResult> results(static_cast<std::size_t>(cfg.samples));
  parallel_for(results.size(), cfg.threads, [&](std::size_t s) {
    const auto [jeff, ampl] = draw_sample(cfg.seed, s, cfg.paramRange);
    const BlockParams block = effective_block(jeff, 1);
    const FieldProfile field = FieldProfile::half_sine(ampl);
    SampleResult& r = results[s];
    Matrix2cd uref;
    try {
      ReferenceOptions opts;
      opts.tol = cfg.referenceTol;
      uref = reference(block, field, false, opts);
    } catch (const ConvergenceError&) {
      r.skipped = true;
      return;
    }
    r.digits.resize(slots);
    r.seconds.resize(slots);
    for (std::size_t o = 0; o < 2; ++o) {
      for (std::size_t k = 0; k < nCount; ++k) {
        const EvolutionSpec spec{block, field, cfg.nValues[k], kOrders[o], false, false};
        const auto t0 = std::chrono::steady_clock::now();
        const Matrix2cd u = evolve(spec);
        const auto t1 = std::chrono::steady_clock::now();
        r.digits[o * nCount + k] = digits_of_precision(u, uref);
        r.seconds[o * nCount + k] = std::chrono::duration<double>(t1 - t0).count();
      }
    }
  });

  const int skipped = static_cast<int>(std::count_if(results.begin(), results.end(),
                                                     [](const SampleResult& r) { return r.skipped; }));
  std::vector<BenchRecord> records;
  for (std::size_t o = 0; o < 2; ++o) {
    for (std::size_t k = 0; k < nCount; ++k) {
      std::vector<double> digits, seconds;
      for (const auto& r : results) {
        if (r.skipped) continue;
        digits.push_back(r.digits[o * nCount + k]);
        seconds.push_back(r.seconds[o * nCount + k]);
      }
      BenchRecord rec;
      rec.order = kOrders[o];
      rec.n = cfg.nValues[k];
      rec.samples = static_cast<int>(digits.size());
      rec.skipped = skipped;
      if (!digits.empty()) {
        const double count = static_cast<double>(digits.size());
        // Fixed summation order keeps the statistics independent of the thread count.
        rec.meanDigits = std::accumulate(digits.begin(), digits.end(), 0.0) / count;
        rec.medianDigits = median(digits);
        rec.minDigits = *std::min_element(digits.begin(), digits.end());
        rec.meanTime = std::accumulate(seconds.begin(), seconds.end(), 0.0) / count;
        rec.medianTime = median(seconds);
      }
      records.push_back(rec);
    }
  }
  return records;
}

}  // namespace hsu2
