#include "hyperdet/levicivita.hpp"

#include <algorithm>
#include <numeric>

#include "hyperdet/checked.hpp"

namespace hyperdet {

int permutation_sign(std::span<const std::size_t> images) {
  const std::size_t n = images.size();
  std::vector<bool> visited(n, false);
  std::size_t transpositions = 0;
  for (std::size_t start = 0; start < n; ++start) {
    if (visited[start]) continue;
    std::size_t len = 0;
    for (std::size_t k = start; !visited[k]; k = images[k] - 1) {
      visited[k] = true;
      ++len;
    }
    transpositions += len - 1;
  }
  return transpositions % 2 == 0 ? 1 : -1;
}

SignedPermutationTable signed_permutations(std::size_t d) {
  if (d == 0) throw ArgumentError("Levi-Civita side must be >= 1");
  SignedPermutationTable table{d, {}};
  std::vector<std::size_t> p(d);
  std::iota(p.begin(), p.end(), 1);
  do {
    table.entries.push_back({MultiIndex(p), permutation_sign(p)});
  } while (std::next_permutation(p.begin(), p.end()));
  // next_permutation walks lexicographic order (first component slowest);
  // psi order wants the last component slowest.
  std::sort(table.entries.begin(), table.entries.end(),
            [](const SignedPermutation& a, const SignedPermutation& b) {
              return std::lexicographical_compare(a.images.components().rbegin(),
                                                  a.images.components().rend(),
                                                  b.images.components().rbegin(),
                                                  b.images.components().rend());
            });
  return table;
}

template <Scalar T>
SparseTensor<T> levi_civita(std::size_t d) {
  const auto table = signed_permutations(d);
  std::vector<std::size_t> coords;
  std::vector<T> values;
  for (const auto& e : table.entries) {
    for (std::size_t c : e.images) coords.push_back(c - 1);
    values.push_back(ScalarTraits<T>::from_int(e.sign));
  }
  return SparseTensor<T>::from_coordinates(Shape::cubical(d, d), std::move(coords),
                                           std::move(values));
}

std::uint64_t epsilon_power_nnz(std::size_t d, std::size_t order) {
  return checked_pow(factorial(d), order, "Levi-Civita power nonzero count");
}

template <Scalar T>
SparseTensor<T> epsilon_kron_power(std::size_t d, std::size_t order, std::uint64_t max_nonzeros) {
  if (order == 0) throw ArgumentError("Kronecker power needs N >= 1");
  std::uint64_t nnz = 0;
  try {
    nnz = epsilon_power_nnz(d, order);
  } catch (const OverflowError&) {
    throw ResourceError("Levi-Civita power for d=" + std::to_string(d) + ", N=" +
                            std::to_string(order) + " has more than 2^64 nonzeros",
                        UINT64_MAX, max_nonzeros);
  }
  if (nnz > max_nonzeros) {
    throw ResourceError("Levi-Civita power for d=" + std::to_string(d) + ", N=" +
                            std::to_string(order) + " needs " + std::to_string(nnz) +
                            " nonzeros, budget is " + std::to_string(max_nonzeros),
                        nnz, max_nonzeros);
  }
  const std::size_t side = checked_pow(d, order, "Levi-Civita power side");
  const auto table = signed_permutations(d);
  const std::size_t perms = table.entries.size();

  // Block weight of factor k (0-based): d^(N-1-k).
  std::vector<std::size_t> weight(order, 1);
  for (std::size_t k = order - 1; k-- > 0;) weight[k] = weight[k + 1] * d;

  std::vector<std::size_t> coords;
  std::vector<T> values;
  coords.reserve(nnz * d);
  values.reserve(nnz);
  std::vector<std::size_t> choice(order, 0);
  for (std::uint64_t t = 0; t < nnz; ++t) {
    int sign = 1;
    for (std::size_t k = 0; k < order; ++k) sign *= table.entries[choice[k]].sign;
    for (std::size_t l = 0; l < d; ++l) {
      std::size_t c = 0;
      for (std::size_t k = 0; k < order; ++k) c += (table.entries[choice[k]].images[l] - 1) * weight[k];
      coords.push_back(c);
    }
    values.push_back(ScalarTraits<T>::from_int(sign));
    for (std::size_t k = order; k-- > 0;) {
      if (++choice[k] < perms) break;
      choice[k] = 0;
    }
  }
  return SparseTensor<T>::from_coordinates(Shape::cubical(side, d), std::move(coords),
                                           std::move(values));
}

#define HYPERDET_INSTANTIATE_LEVICIVITA(T)           \
  template SparseTensor<T> levi_civita<T>(std::size_t); \
  template SparseTensor<T> epsilon_kron_power<T>(std::size_t, std::size_t, std::uint64_t);

HYPERDET_INSTANTIATE_LEVICIVITA(Rational)
HYPERDET_INSTANTIATE_LEVICIVITA(double)
HYPERDET_INSTANTIATE_LEVICIVITA(Complex)

}  // namespace hyperdet
