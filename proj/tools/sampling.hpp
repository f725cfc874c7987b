#pragma once

// Seeded random inputs shared by the verify suite, the bench and the tests.

#include <cstdint>
#include <random>
#include <vector>

#include "hyperdet/core.hpp"
#include "hyperdet/quantum.hpp"
#include "hyperdet/vectorize.hpp"

namespace hyperdet::sampling {

using Rng = std::mt19937_64;

inline long long uniform_int(Rng& rng, long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(rng);
}

template <Scalar T>
Hypermatrix<T> random_integer(Rng& rng, std::size_t d, std::size_t order, long long lo = -5,
                              long long hi = 5) {
  auto a = Hypermatrix<T>::cubical(d, order);
  for (std::size_t k = 0; k < a.size(); ++k) a[k] = ScalarTraits<T>::from_int(uniform_int(rng, lo, hi));
  return a;
}

// One random value per weakly decreasing tuple, copied to every rearrangement.
template <Scalar T>
Hypermatrix<T> random_symmetric_integer(Rng& rng, std::size_t d, std::size_t order,
                                        long long lo = -5, long long hi = 5) {
  std::vector<T> slot(count_monotone(d, order));
  for (auto& v : slot) v = ScalarTraits<T>::from_int(uniform_int(rng, lo, hi));
  auto a = Hypermatrix<T>::cubical(d, order);
  for (std::size_t k = 0; k < a.size(); ++k) {
    const auto rep = MonotoneIndex::representative(unravel(k, a.shape()), d);
    a[k] = slot[placement(rep) - 1];
  }
  return a;
}

inline Complex random_gaussian_complex(Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  const double re = g(rng);
  return {re, g(rng)};
}

inline std::vector<Complex> normalized(std::vector<Complex> v) {
  const double n = quantum::norm(v);
  for (auto& x : v) x /= n;
  return v;
}

inline std::vector<Complex> random_unit_vector(Rng& rng, std::size_t len) {
  std::vector<Complex> v(len);
  for (auto& x : v) x = random_gaussian_complex(rng);
  return normalized(std::move(v));
}

inline quantum::QuditState random_state(Rng& rng, std::size_t d, std::size_t n) {
  std::size_t len = 1;
  for (std::size_t k = 0; k < n; ++k) len *= d;
  return quantum::QuditState(d, n, random_unit_vector(rng, len));
}

// Tensor product of n random single-qudit states; amplitude of label
// (i_1..i_n) is prod_k v_k[i_k], laid out in psi order.
inline quantum::QuditState random_product_state(Rng& rng, std::size_t d, std::size_t n) {
  std::vector<Complex> amps{1.0};
  for (std::size_t k = 0; k < n; ++k) {
    const auto v = random_unit_vector(rng, d);
    std::vector<Complex> next;
    next.reserve(amps.size() * d);
    for (std::size_t i = 0; i < d; ++i) {
      for (const auto& a : amps) next.push_back(a * v[i]);
    }
    amps = std::move(next);
  }
  return quantum::QuditState(d, n, normalized(std::move(amps)));
}

// Random state averaged over all particle permutations, then renormalized.
inline quantum::QuditState random_boson(Rng& rng, std::size_t d, std::size_t n) {
  const auto s = random_state(rng, d, n);
  const Shape shape = Shape::cubical(d, n);
  std::vector<Complex> amps(s.amplitudes().size());
  for (std::size_t k = 0; k < amps.size(); ++k) {
    const auto i = unravel(k, shape);
    const auto rep = MonotoneIndex::representative(i, d);
    Complex sum{};
    const auto perms = distinct_permutations(rep);
    for (const auto& p : perms) sum += s.amplitudes()[offset_of(p, shape)];
    amps[k] = sum / static_cast<double>(perms.size());
  }
  return quantum::QuditState(d, n, normalized(std::move(amps)));
}

// Haar-ish random unitary from QR of a Gaussian matrix (Gram-Schmidt).
inline Hypermatrix<Complex> random_unitary(Rng& rng, std::size_t n) {
  std::vector<std::vector<Complex>> cols(n, std::vector<Complex>(n));
  for (auto& c : cols) {
    for (auto& x : c) x = random_gaussian_complex(rng);
  }
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < j; ++k) {
      Complex dot{};
      for (std::size_t i = 0; i < n; ++i) dot += std::conj(cols[k][i]) * cols[j][i];
      for (std::size_t i = 0; i < n; ++i) cols[j][i] -= dot * cols[k][i];
    }
    cols[j] = normalized(std::move(cols[j]));
  }
  Hypermatrix<Complex> u(Shape{n, n});
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) u({i + 1, j + 1}) = cols[j][i];
  }
  return u;
}

}  // namespace hyperdet::sampling
