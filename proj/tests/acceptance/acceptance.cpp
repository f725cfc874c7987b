// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance        run all criteria, exit 1 if any failed
//   acceptance K      run criterion K only

#include <chrono>
#include <cmath>
#include <algorithm>
#include <cstring>
#include <numeric>
#include <unistd.h>
#include <filesystem>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "bench.hpp"
#include "hyperdet/cache.hpp"
#include "hyperdet/engines.hpp"
#include "hyperdet/quantum.hpp"
#include "sampling.hpp"

using namespace hyperdet;
namespace fs = std::filesystem;
using Q = Rational;
using Sizes = std::vector<std::pair<std::size_t, std::size_t>>;

namespace {

constexpr std::uint64_t kSeed = 20261019;

// Runtime ceilings, seconds.
constexpr double kC1Seconds = 60.0;
constexpr double kC2Seconds = 120.0;
constexpr double kC9Seconds = 1.0;

// Quantum tolerances.
constexpr double kQuantumTol = 1e-10;
constexpr double kUnitaryTol = 1e-9;

// Scaling thresholds.
constexpr double kMaxSlope = 3.0;
constexpr double kMinNaiveSpeedup = 10.0;

struct Outcome {
  bool passed = true;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string size_label(std::size_t d, std::size_t n) {
  return "(d=" + std::to_string(d) + ", N=" + std::to_string(n) + ")";
}

Outcome c1() {
  sampling::Rng rng(kSeed + 1);
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t cases = 0;
  for (const auto& [d, n] : Sizes{{2, 2}, {2, 4}, {3, 2}, {2, 6}, {3, 4}}) {
    const auto power = epsilon_kron_power<Q>(d, n);
    for (int t = 0; t < 50; ++t, ++cases) {
      const auto a = sampling::random_integer<Q>(rng, d, n);
      const Q x = hdet_levicivita(a, power);
      const Q y = hdet_naive(a);
      if (x != y) {
        return {false, "mismatch at " + size_label(d, n) + ": " + format_scalar(x) + " vs " + format_scalar(y)};
      }
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream s;
  s << cases << " cases in " << secs << " s (limit " << kC1Seconds << " s)";
  return {secs < kC1Seconds, s.str()};
}

Outcome c2() {
  sampling::Rng rng(kSeed + 2);
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t cases = 0;
  for (const auto& [d, n] : Sizes{{2, 2}, {2, 4}, {2, 6}, {2, 8}, {3, 2}, {3, 4}}) {
    const auto e = build_contractor<Q>(d, n);
    for (int t = 0; t < 50; ++t, ++cases) {
      const auto a = sampling::random_symmetric_integer<Q>(rng, d, n);
      const Q x = hdet_symmetric(a, e);
      const Q y = hdet_naive(a);
      if (x != y) {
        return {false, "mismatch at " + size_label(d, n) + ": " + format_scalar(x) + " vs " + format_scalar(y)};
      }
    }
  }
  const double secs = seconds_since(t0);
  std::ostringstream s;
  s << cases << " cases in " << secs << " s (limit " << kC2Seconds << " s)";
  return {secs < kC2Seconds, s.str()};
}

Outcome c3() {
  sampling::Rng rng(kSeed + 3);
  std::size_t cases = 0;
  for (const auto& [d, n] : Sizes{{2, 2}, {2, 3}, {2, 4}, {3, 2}, {3, 3}}) {
    const auto l = elimination_matrix<Q>(d, n);
    const auto dup = duplication_matrix<Q>(d, n);
    if (sparse_matmul(l, dup) != sparse_identity<Q>(count_monotone(d, n))) {
      return {false, "L D != I at " + size_label(d, n)};
    }
    for (int t = 0; t < 100; ++t, ++cases) {
      const auto a = sampling::random_symmetric_integer<Q>(rng, d, n);
      const auto h = hvec(a);
      const auto half = hvec_1N(a);
      if (sparse_matvec(l, std::span<const Q>(h)) != half) {
        return {false, "L hvec(A) != hvec_1N(A) at " + size_label(d, n)};
      }
      if (sparse_matvec(dup, std::span<const Q>(half)) != h) {
        return {false, "D hvec_1N(A) != hvec(A) at " + size_label(d, n)};
      }
    }
  }
  return {true, std::to_string(cases) + " symmetric instances, L D = I on 5 sizes"};
}

Outcome c4() {
  sampling::Rng rng(kSeed + 4);
  std::size_t cases = 0;
  for (const auto& [d, n] : Sizes{{2, 3}, {3, 3}, {2, 5}}) {
    const auto e = build_contractor<Q>(d, n);
    for (int t = 0; t < 20; ++t, ++cases) {
      const auto a = sampling::random_integer<Q>(rng, d, n);
      const auto s = sampling::random_symmetric_integer<Q>(rng, d, n);
      const std::vector<Q> values{hdet_naive(a), hdet_levicivita(a), hdet(a).value,
                                  hdet_naive(s), hdet_levicivita(s), hdet_symmetric(s, e)};
      for (const auto& v : values) {
        if (v != 0) return {false, "nonzero value " + format_scalar(v) + " at " + size_label(d, n)};
      }
    }
  }
  return {true, std::to_string(cases) + " general and symmetric inputs, all engines exactly 0"};
}

Q leibniz(const Hypermatrix<Q>& m) {
  const std::size_t d = m.shape().extent(0);
  std::vector<std::size_t> p(d);
  std::iota(p.begin(), p.end(), 1);
  Q total = 0;
  do {
    Q term = permutation_sign(p);
    for (std::size_t r = 0; r < d; ++r) term *= m({r + 1, p[r]});
    total += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return total;
}

Outcome c5() {
  sampling::Rng rng(kSeed + 5);
  for (int t = 0; t < 100; ++t) {
    const std::size_t d = 1 + static_cast<std::size_t>(t % 4);
    auto m = Hypermatrix<Q>::cubical(d, 2);
    for (std::size_t k = 0; k < m.size(); ++k) {
      m[k] = Q(static_cast<long>(sampling::uniform_int(rng, -20, 20)),
               static_cast<long>(sampling::uniform_int(rng, 1, 9)));
      m[k].canonicalize();
    }
    const Q want = leibniz(m);
    for (const Q& got : {hdet_naive(m), hdet_levicivita(m), hdet(m).value}) {
      if (got != want) return {false, "d=" + std::to_string(d) + ": " + format_scalar(got) + " vs " + format_scalar(want)};
    }
  }
  return {true, "100 rational matrices, d = 1..4"};
}

Outcome c6() {
  sampling::Rng rng(kSeed + 6);
  for (std::size_t d = 1; d <= 4; ++d) {
    for (std::size_t n = 1; n <= 4; ++n) {
      auto total = Hypermatrix<Q>::cubical(d, n);
      auto i = MonotoneIndex::first(d, n);
      do {
        const auto t = sym_T<Q>(i);
        for (std::size_t k = 0; k < t.nnz(); ++k) total[t.linear_offset(k)] += t.value(k);
      } while (i.advance());
      for (const auto& v : total.values()) {
        if (v != 1) return {false, "sum of sym_T is not all ones at " + size_label(d, n)};
      }
      // binomial by the multiplicative formula, independent of count_monotone
      std::uint64_t c = 1;
      for (std::size_t k = 1; k <= n; ++k) c = c * (d + k - 1) / k;
      const auto a = sampling::random_symmetric_integer<Q>(rng, d, n);
      if (hvec_1N(a).size() != c || count_monotone(d, n) != c) {
        return {false, "hvec_1N length differs from C(d+N-1, N) at " + size_label(d, n)};
      }
    }
  }
  return {true, "all (d, N) with d, N <= 4"};
}

Outcome c7() {
  using namespace quantum;
  sampling::Rng rng(kSeed + 7);
  auto naive = [](const QuditState& s) { return 2.0 * std::abs(hdet_naive(state_to_hypermatrix(s))); };
  std::ostringstream s;
  s.precision(3);

  for (const auto& [name, state] : {std::pair{"Bell", bell_state()}, std::pair{"GHZ_4", ghz_state(4)}}) {
    const double oracle = naive(state);
    const double got = concurrence(state).value;
    if (std::fabs(oracle - 1.0) > kQuantumTol || std::fabs(got - 1.0) > kQuantumTol) {
      s << name << ": concurrence " << got << ", naive " << oracle;
      return {false, s.str()};
    }
  }
  double worst_product = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t n = 2 + 2 * static_cast<std::size_t>(t % 3);
    const auto p = sampling::random_product_state(rng, 2, n);
    worst_product = std::max({worst_product, naive(p), concurrence(p).value});
  }
  if (worst_product > kQuantumTol) {
    s << "product state concurrence " << worst_product;
    return {false, s.str()};
  }
  double worst_unitary = 0.0;
  for (int t = 0; t < 20; ++t) {
    const auto st = sampling::random_state(rng, 2, 2);
    const auto u = sampling::random_unitary(rng, 2);
    const auto v = sampling::random_unitary(rng, 2);
    const std::vector<Hypermatrix<Complex>> factors{transpose(u, Permutation{2, 1}), transpose(v, Permutation{2, 1})};
    const auto moved = hypermatrix_to_state(multilinear_multiply<Complex>(state_to_hypermatrix(st), factors));
    const double before = naive(st);
    worst_unitary = std::max({worst_unitary, std::fabs(naive(moved) - before),
                              std::fabs(concurrence(moved).value - before)});
  }
  s << "max product " << worst_product << ", max local-unitary drift " << worst_unitary;
  return {worst_unitary <= kUnitaryTol, s.str()};
}

Outcome c8() {
  std::vector<std::string> wrong;
  for (std::size_t d = 2; d <= 6; ++d) {
    for (std::size_t n = 2; n <= 10; ++n) {
      const double r = complexity_ratio(d, n);
      const bool expect_negative = d == 2 && n >= 3;
      const bool ok = expect_negative ? r < 0.0 : r >= 0.0;
      if (!ok) {
        std::ostringstream s;
        s << size_label(d, n) << " ratio " << r;
        wrong.push_back(s.str());
      }
    }
  }
  if (wrong.empty()) return {true, "sign pattern holds over d in [2,6], N in [2,10]"};
  std::string detail = "pattern breaks at";
  for (const auto& w : wrong) detail += " " + w;
  return {false, detail};
}

Outcome c9() {
  const fs::path dir = fs::temp_directory_path() / ("hyperdet_accept_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  cli::BenchConfig cfg;
  cfg.d = 2;
  cfg.orders = {8, 10, 12};
  cfg.engines = {Engine::naive, Engine::symmetric_fast};
  cfg.seed = kSeed;
  cfg.cache_dir = dir;
  for (const auto n : cfg.orders) cache::ensure_contractor<double>(2, n, dir);
  const auto report = cli::run_bench(cfg);
  fs::remove_all(dir);

  double naive8 = 0, sym8 = 0, sym12 = 0;
  bool agreed = true;
  for (const auto& row : report.rows) {
    agreed = agreed && row.agreed && !row.skipped;
    if (row.engine == Engine::naive && row.order == 8) naive8 = row.nanos;
    if (row.engine == Engine::symmetric_fast && row.order == 8) sym8 = row.nanos;
    if (row.engine == Engine::symmetric_fast && row.order == 12) sym12 = row.nanos;
  }
  const double slope = report.symmetric_slope.value_or(INFINITY);
  const double speedup = sym8 > 0 ? naive8 / sym8 : 0;
  std::ostringstream s;
  s.precision(3);
  s << "N=12 " << sym12 << " ns/call; slope " << slope << " over N=8,10,12; naive/symmetric at N=8 "
    << speedup << "x; machine uncontrolled, timings qualitative";
  const bool ok = agreed && sym12 * 1e-9 < kC9Seconds && slope <= kMaxSlope && speedup >= kMinNaiveSpeedup;
  return {ok, s.str()};
}

template <Scalar T>
bool bit_equal(const T& a, const T& b) {
  if constexpr (std::is_same_v<T, Rational>) {
    return a == b;
  } else {
    return std::memcmp(&a, &b, sizeof(T)) == 0;
  }
}

template <Scalar T>
bool same_payload(const Contractor<T>& a, const Contractor<T>& b) {
  if (a.tensor.shape() != b.tensor.shape()) return false;
  for (std::size_t k = 0; k < a.tensor.size(); ++k) {
    if (!bit_equal(a.tensor[k], b.tensor[k])) return false;
  }
  return true;
}

Outcome c10() {
  const fs::path dir = fs::temp_directory_path() / ("hyperdet_accept10_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  sampling::Rng rng(kSeed + 10);
  std::size_t compared = 0;
  std::string failure;
  for (const auto& [d, n] : Sizes{{2, 4}, {2, 8}, {3, 2}, {3, 4}}) {
    const auto cold = build_contractor<double>(d, n);
    bool built = false;
    cache::ensure_contractor<double>(d, n, dir, {}, &built);
    const auto warm = cache::ensure_contractor<double>(d, n, dir, {}, &built);
    if (built) failure = "warm load rebuilt at " + size_label(d, n);
    if (!same_payload(cold, warm)) failure = "float64 payload changed at " + size_label(d, n);
    for (int t = 0; t < 20; ++t, ++compared) {
      auto a = sampling::random_symmetric_integer<double>(rng, d, n);
      for (std::size_t k = 0; k < a.size(); ++k) a[k] /= 7.0;
      if (!bit_equal(hdet_symmetric(a, cold), hdet_symmetric(a, warm))) {
        failure = "hdet_symmetric differs at " + size_label(d, n);
      }
    }
    const auto exact = build_contractor<Q>(d, n);
    auto entry = cache::contractor_entry(exact);
    cache::store(entry, dir);
    const auto back = cache::load<Q>(entry.key, dir);
    if (!back || !same_payload(exact, std::get<Contractor<Q>>(back->payload))) {
      failure = "rational payload changed at " + size_label(d, n);
    }
    const auto power = epsilon_kron_power<Q>(d, n);
    auto pentry = cache::epsilon_power_entry(d, n, power);
    cache::store(pentry, dir);
    const auto pback = cache::load<Q>(pentry.key, dir);
    if (!pback || std::get<SparseTensor<Q>>(pback->payload) != power) {
      failure = "epsilon power changed at " + size_label(d, n);
    }
  }
  fs::remove_all(dir);
  if (!failure.empty()) return {false, failure};
  return {true, std::to_string(compared) + " warm/cold evaluations bit-identical; 12 file round trips exact"};
}

const std::vector<std::pair<std::string, std::function<Outcome()>>> kCriteria{
    {"oracle equivalence, levicivita vs naive", c1},
    {"oracle equivalence, symmetric vs naive", c2},
    {"elimination and duplication identities", c3},
    {"odd-order vanishing", c4},
    {"order-2 determinant reduction", c5},
    {"sum of sym_T and half-vector length", c6},
    {"quantum concurrence", c7},
    {"complexity ratio sign pattern", c8},
    {"symmetric-fast scaling", c9},
    {"cache bit-exactness", c10},
};

}  // namespace

int main(int argc, char** argv) {
  std::size_t first = 1, last = kCriteria.size();
  if (argc > 1) {
    const int k = std::atoi(argv[1]);
    if (k < 1 || static_cast<std::size_t>(k) > kCriteria.size()) {
      std::cerr << "usage: acceptance [1-" << kCriteria.size() << "]\n";
      return 2;
    }
    first = last = static_cast<std::size_t>(k);
  }
  bool all = true;
  for (std::size_t k = first; k <= last; ++k) {
    const auto& [name, fn] = kCriteria[k - 1];
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    all = all && o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << k << ": " << name << " - " << o.detail
              << std::endl;
  }
  return all ? 0 : 1;
}
