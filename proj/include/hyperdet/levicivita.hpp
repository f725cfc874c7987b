#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "hyperdet/core.hpp"
#include "hyperdet/sparse.hpp"

namespace hyperdet {

inline constexpr std::uint64_t kDefaultEpsilonBudget = 100'000'000;

struct SignedPermutation {
  MultiIndex images;  // (sigma(1), ..., sigma(d))
  int sign = 1;
};

// All d! permutations of [d] with their signs, sorted by psi position of the
// image tuple (first component fastest).
struct SignedPermutationTable {
  std::size_t side = 0;
  std::vector<SignedPermutation> entries;
};

// Sign of a permutation given by its 1-based images; cycle decomposition.
int permutation_sign(std::span<const std::size_t> images);

SignedPermutationTable signed_permutations(std::size_t d);

// The d-dimensional Levi-Civita symbol: order d, side d, d! nonzeros.
template <Scalar T>
SparseTensor<T> levi_civita(std::size_t d);

// (d!)^N, the nonzero count of the N-fold Kronecker power; OverflowError past 64 bits.
std::uint64_t epsilon_power_nnz(std::size_t d, std::size_t order);

// N-fold tensor Kronecker power of the Levi-Civita symbol: order d, side d^N.
// Nonzeros are generated directly from N-tuples of permutations
// (sigma_1, ..., sigma_N): on axis l the zero-based coordinate is
//   sum_k (sigma_k(l) - 1) d^(N-k)
// (sigma_1 selects the outermost block) and the value is the product of signs.
// ResourceError when (d!)^N exceeds max_nonzeros.
template <Scalar T>
SparseTensor<T> epsilon_kron_power(std::size_t d, std::size_t order,
                                   std::uint64_t max_nonzeros = kDefaultEpsilonBudget);

}  // namespace hyperdet
