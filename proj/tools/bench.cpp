#include "bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "hyperdet/cache.hpp"
#include "hyperdet/checked.hpp"
#include "sampling.hpp"

namespace hyperdet::cli {

namespace {

template <class V>
inline void keep(const V& v) {
  asm volatile("" : : "g"(&v) : "memory");
}

// Median nanoseconds per call of f.
template <class F>
double time_call(F&& f) {
  using clock = std::chrono::steady_clock;
  auto sample = [&] {
    std::uint64_t reps = 0;
    const auto start = clock::now();
    std::uint64_t elapsed = 0;
    do {
      keep(f());
      ++reps;
      elapsed = static_cast<std::uint64_t>(
          std::chrono::duration_cast<std::chrono::nanoseconds>(clock::now() - start).count());
    } while (elapsed < kMinSampleNanos);
    return static_cast<double>(elapsed) / static_cast<double>(reps);
  };
  sample();  // warmup
  std::vector<double> runs;
  for (int k = 0; k < kSamples; ++k) runs.push_back(sample());
  std::sort(runs.begin(), runs.end());
  return runs[runs.size() / 2];
}

template <Scalar T>
double magnitude(const T& v) {
  if constexpr (std::is_same_v<T, Rational>) {
    return std::fabs(v.get_d());
  } else {
    return std::abs(v);
  }
}

template <Scalar T>
bool agree(const T& a, const T& b) {
  if constexpr (ScalarTraits<T>::exact) {
    return a == b;
  } else {
    const double scale = std::max({1.0, magnitude(a), magnitude(b)});
    return ScalarTraits<T>::distance(a, b) <= kAgreementTolerance * scale;
  }
}

std::optional<std::uint64_t> counted(std::uint64_t (*count)(std::size_t, std::size_t),
                                     std::size_t d, std::size_t order) {
  try {
    return count(d, order);
  } catch (const OverflowError&) {
    return std::nullopt;
  }
}

template <Scalar T>
void bench_order(const BenchConfig& cfg, std::size_t order, ContractorSource<T>* cache,
                 std::vector<BenchRow>& rows) {
  const std::size_t d = cfg.d;
  sampling::Rng rng(cfg.seed * 1000003ULL + d * 1009ULL + order);
  const auto a = sampling::random_symmetric_integer<T>(rng, d, order, -3, 3);

  std::optional<T> reference;
  std::vector<std::pair<std::size_t, T>> values;
  for (Engine engine : cfg.engines) {
    BenchRow row;
    row.engine = engine;
    row.d = d;
    row.order = order;
    row.ratio = complexity_ratio(d, order);
    row.prior_art = std::pow(2.0, static_cast<double>(d * (order - 1))) *
                    std::pow(static_cast<double>(d), static_cast<double>(order - 1));
    const auto nnz = counted(epsilon_power_nnz, d, order);
    T value{};
    if (engine == Engine::naive) {
      const auto terms = counted(naive_term_count, d, order);
      if (!terms || *terms > cfg.budget.max_epsilon_nonzeros) {
        row.skipped = true;
        row.skip_reason = "term count over budget";
      } else {
        row.work = *terms;
        value = hdet_naive(a);
        row.nanos = time_call([&] { return hdet_naive(a); });
      }
    } else if (engine == Engine::levicivita) {
      if (!nnz || *nnz > cfg.budget.max_epsilon_nonzeros) {
        row.skipped = true;
        row.skip_reason = "Levi-Civita power over budget";
      } else {
        row.work = *nnz;
        const auto power = epsilon_kron_power<T>(d, order, cfg.budget.max_epsilon_nonzeros);
        value = hdet_levicivita(a, power);
        row.nanos = time_call([&] { return hdet_levicivita(a, power); });
      }
    } else if (engine == Engine::symmetric_fast) {
      const auto entries = counted(contractor_entries, d, order);
      if (!entries || *entries > cfg.budget.max_contractor_entries || !nnz ||
          *nnz > cfg.budget.max_epsilon_nonzeros) {
        row.skipped = true;
        row.skip_reason = "contractor over budget";
      } else {
        row.work = *entries;
        const auto e = cache->contractor(d, order);
        value = hdet_symmetric(a, *e, default_symmetry_tolerance<T>(), SymmetryCheck::verify);
        row.nanos = time_call([&] { return hdet_symmetric(a, *e, 0.0, SymmetryCheck::assume); });
      }
    } else {
      continue;
    }
    if (!row.skipped) {
      row.value = format_scalar(value);
      if (!reference) reference = value;
      values.emplace_back(rows.size(), value);
    }
    rows.push_back(std::move(row));
  }
  for (const auto& [pos, v] : values) rows[pos].agreed = agree(*reference, v);
}

// Contractor source for runs without a cache directory: builds once per
// (d, N) before timing starts.
template <Scalar T>
class MemorySource : public ContractorSource<T> {
 public:
  explicit MemorySource(Budget budget) : budget_(budget) {}
  std::shared_ptr<const Contractor<T>> contractor(std::size_t d, std::size_t order) override {
    auto& slot = memo_[{d, order}];
    if (!slot) slot = std::make_shared<const Contractor<T>>(build_contractor<T>(d, order, budget_));
    return slot;
  }

 private:
  Budget budget_;
  std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const Contractor<T>>> memo_;
};

template <Scalar T>
std::vector<BenchRow> bench_all(const BenchConfig& cfg) {
  std::unique_ptr<ContractorSource<T>> source;
  if (cfg.cache_dir) {
    source = std::make_unique<cache::ContractorCache<T>>(*cfg.cache_dir, cfg.budget);
  } else {
    source = std::make_unique<MemorySource<T>>(cfg.budget);
  }
  std::vector<BenchRow> rows;
  for (std::size_t order : cfg.orders) bench_order<T>(cfg, order, source.get(), rows);
  return rows;
}

}  // namespace

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double mx = 0, my = 0;
  for (std::size_t k = 0; k < n; ++k) {
    mx += std::log(x[k]);
    my += std::log(y[k]);
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < n; ++k) {
    const double dx = std::log(x[k]) - mx;
    sxy += dx * (std::log(y[k]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

BenchReport run_bench(const BenchConfig& config) {
  if (config.d < 2) throw ArgumentError("bench needs d >= 2");
  for (std::size_t n : config.orders) {
    if (n < 2) throw ArgumentError("bench needs N >= 2");
  }
  BenchReport report;
  switch (config.backend) {
    case Backend::rational:
      report.rows = bench_all<Rational>(config);
      break;
    case Backend::float64:
      report.rows = bench_all<double>(config);
      break;
    case Backend::complex128:
      report.rows = bench_all<Complex>(config);
      break;
  }
  std::vector<std::pair<std::size_t, double>> timed;
  for (const auto& r : report.rows) {
    if (r.engine == Engine::symmetric_fast && !r.skipped) timed.emplace_back(r.order, r.nanos);
  }
  std::sort(timed.begin(), timed.end());
  if (timed.size() >= 3) {
    std::vector<double> x, y;
    for (std::size_t k = timed.size() - 3; k < timed.size(); ++k) {
      x.push_back(static_cast<double>(timed[k].first));
      y.push_back(timed[k].second);
      report.slope_orders.push_back(timed[k].first);
    }
    report.symmetric_slope = loglog_slope(x, y);
  }
  return report;
}

void print_table(std::ostream& out, const BenchReport& report) {
  char line[512];
  std::snprintf(line, sizeof line, "%-15s %3s %3s %14s %14s %6s %16s %5s %12s  %s\n", "engine", "d",
                "N", "work", "nanos", "agreed", "complexity_ratio", "sign", "prior_art", "value");
  out << line;
  for (const auto& r : report.rows) {
    const char* sign = r.ratio < 0 ? "-" : (r.ratio > 0 ? "+" : "0");
    if (r.skipped) {
      std::snprintf(line, sizeof line, "%-15s %3zu %3zu %14s %14s %6s %16.4f %5s %12.4g  skipped: %s\n",
                    std::string(engine_name(r.engine)).c_str(), r.d, r.order, "-", "-", "-", r.ratio,
                    sign, r.prior_art, r.skip_reason.c_str());
    } else {
      std::snprintf(line, sizeof line, "%-15s %3zu %3zu %14llu %14.1f %6s %16.4f %5s %12.4g  %s\n",
                    std::string(engine_name(r.engine)).c_str(), r.d, r.order,
                    static_cast<unsigned long long>(r.work), r.nanos, r.agreed ? "yes" : "NO",
                    r.ratio, sign, r.prior_art, r.value.c_str());
    }
    out << line;
  }
  if (report.symmetric_slope) {
    out << "symmetric-fast log-log slope over N =";
    for (std::size_t n : report.slope_orders) out << ' ' << n;
    std::snprintf(line, sizeof line, ": %.3f\n", *report.symmetric_slope);
    out << line;
  }
  out << "complexity_ratio: ln of (Levi-Civita pipeline cost / prior-art bound); prior_art: "
         "2^(d(N-1)) d^(N-1), reported analytically\n"
         "timings come from an uncontrolled machine and are qualitative\n";
}

void print_jsonl(std::ostream& out, const BenchReport& report) {
  for (const auto& r : report.rows) {
    nlohmann::json j;
    j["engine"] = engine_name(r.engine);
    j["d"] = r.d;
    j["N"] = r.order;
    if (r.skipped) {
      j["nanos"] = nullptr;
      j["value"] = nullptr;
      j["agreed"] = nullptr;
      j["skipped"] = r.skip_reason;
    } else {
      j["nanos"] = r.nanos;
      j["value"] = r.value;
      j["agreed"] = r.agreed;
    }
    j["work"] = r.work;
    j["complexity_ratio"] = r.ratio;
    j["prior_art"] = r.prior_art;
    out << j.dump() << '\n';
  }
}

}  // namespace hyperdet::cli
