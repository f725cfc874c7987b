#pragma once

// Engine benchmark. Every engine runs on the same seeded symmetric integer
// input per (d, N), so all three engines apply and their values can be
// compared. Timings come from an uncontrolled machine and are qualitative.
//
// What is timed per engine:
//   naive           hdet_naive(A)
//   levicivita      contraction with a Levi-Civita power built before timing
//   symmetric-fast  hvec_1N(A) read from the monotone slots plus the
//                   contraction with a warm contractor; symmetry of A is a
//                   precondition here, not re-verified inside the timed call
//
// Each sample repeats the call until it lasts at least kMinSampleNanos and
// reports nanoseconds per call; the row holds the median of kSamples samples
// taken after one warmup sample.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "hyperdet/engines.hpp"

namespace hyperdet::cli {

inline constexpr int kSamples = 5;
inline constexpr std::uint64_t kMinSampleNanos = 2'000'000;
// Cross-engine agreement: |a - b| <= kAgreementTolerance * max(1, |a|, |b|).
inline constexpr double kAgreementTolerance = 1e-10;

struct BenchConfig {
  std::size_t d = 2;
  std::vector<std::size_t> orders{2, 4, 6, 8, 10, 12};
  std::vector<Engine> engines{Engine::naive, Engine::levicivita, Engine::symmetric_fast};
  Backend backend = Backend::float64;
  Budget budget;
  std::uint64_t seed = 1;
  std::optional<std::filesystem::path> cache_dir;
};

struct BenchRow {
  Engine engine = Engine::naive;
  std::size_t d = 0;
  std::size_t order = 0;
  bool skipped = false;
  std::string skip_reason;
  std::uint64_t work = 0;  // terms, nonzeros or contractor entries
  double nanos = 0.0;
  std::string value;
  bool agreed = true;
  double ratio = 0.0;       // complexity_ratio(d, N)
  double prior_art = 0.0;   // 2^(d(N-1)) d^(N-1)
};

struct BenchReport {
  std::vector<BenchRow> rows;
  // Least-squares slope of log(nanos) against log(N) for symmetric-fast over
  // the largest three timed N; empty when fewer than three were timed.
  std::optional<double> symmetric_slope;
  std::vector<std::size_t> slope_orders;
};

BenchReport run_bench(const BenchConfig& config);

// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

void print_table(std::ostream& out, const BenchReport& report);
void print_jsonl(std::ostream& out, const BenchReport& report);

}  // namespace hyperdet::cli
