#include "hyperdet/engines.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>

#include "hyperdet/checked.hpp"

namespace hyperdet {

std::uint64_t contractor_entries(std::size_t d, std::size_t order) {
  return checked_pow(count_monotone(d, order), d, "contractor entry count");
}

std::uint64_t naive_term_count(std::size_t d, std::size_t order) {
  if (order == 0) return 0;
  return checked_pow(factorial(d), order - 1, "naive term count");
}

namespace {

template <Scalar T>
T zero() {
  return ScalarTraits<T>::from_int(0);
}

bool vanishes_identically(std::size_t d, std::size_t order) { return order % 2 == 1 && d >= 2; }

template <Scalar T>
std::size_t require_cubical(const Hypermatrix<T>& a) {
  if (!a.is_cubical()) {
    throw ShapeError("hyperdeterminant needs a cubical hypermatrix, got " + a.shape().str());
  }
  return a.side();
}

}  // namespace

template <Scalar T>
T hdet_naive(const Hypermatrix<T>& a) {
  const std::size_t d = require_cubical(a);
  const std::size_t order = a.order();
  if (vanishes_identically(d, order)) return zero<T>();

  const auto table = signed_permutations(d);
  const std::size_t perms = table.entries.size();
  const auto st = strides(a.shape());
  // offset[k][p * d + i]: contribution of sigma_p(i) on axis k.
  std::vector<std::vector<std::size_t>> offset(order, std::vector<std::size_t>(perms * d));
  for (std::size_t k = 1; k < order; ++k)
    for (std::size_t p = 0; p < perms; ++p)
      for (std::size_t i = 0; i < d; ++i)
        offset[k][p * d + i] = (table.entries[p].images[i] - 1) * st[k];

  T sum = zero<T>();
  std::vector<std::size_t> choice(order, 0);  // choice[0] unused: sigma_1 = id
  std::vector<std::size_t> pos(d);
  while (true) {
    int sign = 1;
    for (std::size_t i = 0; i < d; ++i) pos[i] = i;
    for (std::size_t k = 1; k < order; ++k) {
      sign *= table.entries[choice[k]].sign;
      const std::size_t* row = &offset[k][choice[k] * d];
      for (std::size_t i = 0; i < d; ++i) pos[i] += row[i];
    }
    T prod = a[pos[0]];
    for (std::size_t i = 1; i < d; ++i) prod *= a[pos[i]];
    if (sign > 0) {
      sum += prod;
    } else {
      sum -= prod;
    }

    std::size_t k = order;
    while (k-- > 1) {
      if (++choice[k] < perms) break;
      choice[k] = 0;
    }
    if (k == 0 || order == 1) break;
  }
  return sum;
}

template <Scalar T>
T hdet_levicivita(const Hypermatrix<T>& a, const SparseTensor<T>& epsilon_power) {
  const std::size_t d = require_cubical(a);
  if (epsilon_power.order() != d || epsilon_power.shape().extent(0) != a.size()) {
    throw ArgumentError("Levi-Civita power of shape " + epsilon_power.shape().str() +
                        " does not match a side-" + std::to_string(d) + " order-" +
                        std::to_string(a.order()) + " input");
  }
  const T one = ScalarTraits<T>::from_int(1);
  const auto h = a.data();  // hvec(A) is the data buffer
  T sum = zero<T>();
  for (std::size_t k = 0; k < epsilon_power.nnz(); ++k) {
    const auto c = epsilon_power.coords(k);
    T prod = h[c[0]];
    for (std::size_t l = 1; l < d; ++l) prod *= h[c[l]];
    if (epsilon_power.value(k) == one) {
      sum += prod;
    } else {
      sum -= prod;
    }
  }
  return sum / ScalarTraits<T>::from_int(static_cast<long long>(factorial(d)));
}

template <Scalar T>
T hdet_levicivita(const Hypermatrix<T>& a, const Budget& budget) {
  const std::size_t d = require_cubical(a);
  SparseTensor<T> eps;
  try {
    eps = epsilon_kron_power<T>(d, a.order(), budget.max_epsilon_nonzeros);
  } catch (const ResourceError& e) {
    throw ResourceError(std::string(e.what()) +
                            "; use the symmetric engine for symmetric input or the naive engine",
                        e.required(), e.budget());
  }
  return hdet_levicivita(a, eps);
}

namespace {

// 1-based placement of a weakly decreasing tuple, using a binomial table
// binom[m][k] = C(m, k) for m <= d + N - 1, k <= N.
class PlacementTable {
 public:
  PlacementTable(std::size_t d, std::size_t order)
      : d_(d), order_(order), width_(order + 1), binom_((d + order) * (order + 1), 0) {
    for (std::size_t m = 0; m < d + order; ++m) {
      binom_[m * width_] = 1;
      for (std::size_t k = 1; k <= order && k <= m; ++k) {
        binom_[m * width_ + k] =
            binom_[(m - 1) * width_ + k - 1] + (k <= m - 1 ? binom_[(m - 1) * width_ + k] : 0);
      }
    }
    total_ = binom_[(d + order - 1) * width_ + order];
  }

  std::uint64_t place(std::span<const std::size_t> desc) const {
    std::uint64_t later = 0;
    for (std::size_t k = 1; k <= order_; ++k) {
      later += binom_[(d_ + k - desc[k - 1] - 1) * width_ + k];
    }
    return total_ - later;
  }

 private:
  std::size_t d_, order_, width_;
  std::vector<std::uint64_t> binom_;
  std::uint64_t total_ = 0;
};

}  // namespace

template <Scalar T>
Contractor<T> build_contractor(std::size_t d, std::size_t order, const Budget& budget) {
  if (d == 0 || order == 0) throw ArgumentError("contractor needs d, N >= 1");
  std::uint64_t entries = 0;
  try {
    entries = contractor_entries(d, order);
  } catch (const OverflowError&) {
    throw ResourceError("contractor for d=" + std::to_string(d) + ", N=" + std::to_string(order) +
                            " has more than 2^64 entries",
                        UINT64_MAX, budget.max_contractor_entries);
  }
  const std::uint64_t side = count_monotone(d, order);
  if (entries > budget.max_contractor_entries) {
    throw ResourceError("contractor for d=" + std::to_string(d) + ", N=" + std::to_string(order) +
                            " needs " + std::to_string(side) + "^" + std::to_string(d) + " = " +
                            std::to_string(entries) + " entries, budget is " +
                            std::to_string(budget.max_contractor_entries),
                        entries, budget.max_contractor_entries);
  }
  std::uint64_t terms = 0;
  try {
    terms = epsilon_power_nnz(d, order);
  } catch (const OverflowError&) {
    terms = UINT64_MAX;
  }
  if (terms > budget.max_epsilon_nonzeros) {
    throw ResourceError("contractor build for d=" + std::to_string(d) + ", N=" +
                            std::to_string(order) + " scatters " + std::to_string(terms) +
                            " Levi-Civita nonzeros, budget is " +
                            std::to_string(budget.max_epsilon_nonzeros),
                        terms, budget.max_epsilon_nonzeros);
  }

  const auto table = signed_permutations(d);
  const std::size_t perms = table.entries.size();
  const PlacementTable places(d, order);
  std::vector<std::uint64_t> axis_stride(d, 1);
  for (std::size_t l = 1; l < d; ++l) axis_stride[l] = axis_stride[l - 1] * side;

  std::vector<std::int64_t> counts(entries, 0);
  std::vector<std::size_t> choice(order, 0);
  std::vector<std::size_t> column(order);
  for (std::uint64_t t = 0; t < terms; ++t) {
    int sign = 1;
    for (std::size_t k = 0; k < order; ++k) sign *= table.entries[choice[k]].sign;
    std::uint64_t cell = 0;
    for (std::size_t l = 0; l < d; ++l) {
      // Row of D hit on axis l is the multi-index (sigma_N(l), ..., sigma_1(l));
      // its column is the placement of the sorted tuple.
      for (std::size_t k = 0; k < order; ++k) column[k] = table.entries[choice[k]].images[l];
      std::sort(column.begin(), column.end(), std::greater<>());
      cell += (places.place(column) - 1) * axis_stride[l];
    }
    counts[cell] += sign;
    for (std::size_t k = order; k-- > 0;) {
      if (++choice[k] < perms) break;
      choice[k] = 0;
    }
  }

  const auto d_factorial = static_cast<long long>(factorial(d));
  Contractor<T> out;
  out.d = d;
  out.order = order;
  out.tensor = Hypermatrix<T>(Shape::cubical(side, d));
  out.slots = monotone_offsets(d, order);
  for (std::size_t c = 0; c < counts.size(); ++c) {
    if (counts[c] != 0) out.tensor[c] = ScalarTraits<T>::ratio(counts[c], d_factorial);
  }
  return out;
}

template <Scalar T>
T contract_half_vector(const Contractor<T>& e, std::span<const T> h) {
  const std::size_t s = e.side();
  if (h.size() != s) {
    throw ArgumentError("half vector of length " + std::to_string(h.size()) +
                        " does not match contractor side " + std::to_string(s));
  }
  std::size_t inner = e.tensor.size() / s;
  std::vector<T> buf(inner, zero<T>());
  // Last axis of the dense tensor; most entries of E vanish.
  for (std::size_t q = 0; q < s; ++q) {
    const T& w = h[q];
    if (ScalarTraits<T>::is_zero(w)) continue;
    const T* src = &e.tensor[q * inner];
    for (std::size_t j = 0; j < inner; ++j) {
      if constexpr (ScalarTraits<T>::exact) {
        if (ScalarTraits<T>::is_zero(src[j])) continue;
      }
      buf[j] += src[j] * w;
    }
  }
  // Remaining axes, in place: cell j of the next level only reads cells
  // j, inner + j, 2 inner + j, ..., none of which an earlier j overwrote.
  while (inner > 1) {
    inner /= s;
    for (std::size_t j = 0; j < inner; ++j) {
      T acc = zero<T>();
      for (std::size_t q = 0; q < s; ++q) {
        const T& w = h[q];
        if (ScalarTraits<T>::is_zero(w)) continue;
        acc += buf[q * inner + j] * w;
      }
      buf[j] = std::move(acc);
    }
  }
  return buf[0];
}

template <Scalar T>
T hdet_symmetric(const Hypermatrix<T>& a, const Contractor<T>& e, double tol, SymmetryCheck check) {
  const std::size_t d = require_cubical(a);
  if (e.d != d || e.order != a.order()) {
    throw ArgumentError("contractor for d=" + std::to_string(e.d) + ", N=" +
                        std::to_string(e.order) + " does not match input with d=" +
                        std::to_string(d) + ", N=" + std::to_string(a.order()));
  }
  if (check == SymmetryCheck::verify) {
    const std::vector<T> h = hvec_1N(a, tol);
    return contract_half_vector(e, std::span<const T>(h));
  }
  std::vector<T> h;
  if (e.slots.size() == e.side()) {
    h.reserve(e.slots.size());
    for (std::size_t s : e.slots) h.push_back(a[s]);
  } else {
    h = hvec_1N_unchecked(a);
  }
  return contract_half_vector(e, std::span<const T>(h));
}

std::string_view engine_name(Engine e) {
  switch (e) {
    case Engine::odd_order_short_circuit:
      return "odd-order short-circuit";
    case Engine::naive:
      return "naive";
    case Engine::levicivita:
      return "levicivita";
    case Engine::symmetric_fast:
      return "symmetric-fast";
  }
  return "unknown";
}

EngineChoice parse_engine_choice(std::string_view name) {
  if (name == "auto") return EngineChoice::automatic;
  if (name == "naive") return EngineChoice::naive;
  if (name == "levicivita") return EngineChoice::levicivita;
  if (name == "symmetric" || name == "symmetric-fast") return EngineChoice::symmetric;
  throw ArgumentError("unknown engine '" + std::string(name) + "'");
}

namespace {

bool fits(std::uint64_t (*count)(std::size_t, std::size_t), std::size_t d, std::size_t order,
          std::uint64_t limit) {
  try {
    return count(d, order) <= limit;
  } catch (const OverflowError&) {
    return false;
  }
}

template <Scalar T>
std::shared_ptr<const Contractor<T>> obtain_contractor(std::size_t d, std::size_t order,
                                                       const HdetOptions<T>& options) {
  if (options.contractors) return options.contractors->contractor(d, order);
  return std::make_shared<const Contractor<T>>(build_contractor<T>(d, order, options.budget));
}

}  // namespace

template <Scalar T>
HdetResult<T> hdet(const Hypermatrix<T>& a, const HdetOptions<T>& options) {
  const std::size_t d = require_cubical(a);
  const std::size_t order = a.order();
  switch (options.engine) {
    case EngineChoice::naive:
      return {hdet_naive(a), Engine::naive};
    case EngineChoice::levicivita:
      return {hdet_levicivita(a, options.budget), Engine::levicivita};
    case EngineChoice::symmetric: {
      const auto e = obtain_contractor(d, order, options);
      return {hdet_symmetric(a, *e, options.tolerance), Engine::symmetric_fast};
    }
    case EngineChoice::automatic:
      break;
  }

  if (vanishes_identically(d, order)) return {zero<T>(), Engine::odd_order_short_circuit};

  const bool contractor_fits =
      fits(contractor_entries, d, order, options.budget.max_contractor_entries) &&
      fits(epsilon_power_nnz, d, order, options.budget.max_epsilon_nonzeros);
  if (contractor_fits && is_symmetric(a, options.tolerance)) {
    const auto e = obtain_contractor(d, order, options);
    return {hdet_symmetric(a, *e, options.tolerance, SymmetryCheck::assume), Engine::symmetric_fast};
  }
  if (fits(epsilon_power_nnz, d, order, options.budget.max_epsilon_nonzeros)) {
    return {hdet_levicivita(a, options.budget), Engine::levicivita};
  }
  return {hdet_naive(a), Engine::naive};
}

double complexity_ratio(std::size_t d, std::size_t order) {
  const double dd = static_cast<double>(d);
  const double n = static_cast<double>(order);
  return ((n * dd - (n - 1)) * std::log2(dd) - (n * dd - dd)) * std::numbers::ln2;
}

#define HYPERDET_INSTANTIATE_ENGINES(T)                                                     \
  template T hdet_naive(const Hypermatrix<T>&);                                             \
  template T hdet_levicivita(const Hypermatrix<T>&, const Budget&);                         \
  template T hdet_levicivita(const Hypermatrix<T>&, const SparseTensor<T>&);                \
  template Contractor<T> build_contractor<T>(std::size_t, std::size_t, const Budget&);      \
  template T contract_half_vector(const Contractor<T>&, std::span<const T>);                \
  template T hdet_symmetric(const Hypermatrix<T>&, const Contractor<T>&, double,            \
                            SymmetryCheck);                                                 \
  template HdetResult<T> hdet(const Hypermatrix<T>&, const HdetOptions<T>&);

HYPERDET_INSTANTIATE_ENGINES(Rational)
HYPERDET_INSTANTIATE_ENGINES(double)
HYPERDET_INSTANTIATE_ENGINES(Complex)

}  // namespace hyperdet
