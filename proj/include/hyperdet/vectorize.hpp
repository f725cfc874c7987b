#pragma once

// Vectorizations of hypermatrices and the generalized elimination /
// duplication matrices for symmetric cubical hypermatrices.
//
// A symmetric order-N hypermatrix of side d is determined by its entries at
// weakly decreasing indices d >= i_1 >= ... >= i_N >= 1. hvec_1N lists those
// entries in reflected lexicographic order (i_1 fastest); there are
// C(d+N-1, N) of them and placement() gives each tuple's 1-based position.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string_view>
#include <vector>

#include "hyperdet/core.hpp"
#include "hyperdet/sparse.hpp"

namespace hyperdet {

inline constexpr double kDefaultSymmetryTolerance = 1e-9;

// Symmetry tolerance used when the caller does not pass one: 0 for exact scalars.
template <Scalar T>
constexpr double default_symmetry_tolerance() {
  return ScalarTraits<T>::exact ? 0.0 : kDefaultSymmetryTolerance;
}

// Weakly decreasing tuple d >= i_1 >= ... >= i_N >= 1.
class MonotoneIndex {
 public:
  // ArgumentError if not weakly decreasing; IndexError if a component is outside [1, side].
  MonotoneIndex(std::vector<std::size_t> components, std::size_t side);

  // (1, ..., 1), the least tuple.
  static MonotoneIndex first(std::size_t side, std::size_t order);

  // Representative of the permutation class of i (components sorted descending).
  static MonotoneIndex representative(const MultiIndex& i, std::size_t side);

  std::size_t side() const noexcept { return side_; }
  std::size_t order() const noexcept { return index_.size(); }
  const MultiIndex& index() const noexcept { return index_; }
  std::size_t operator[](std::size_t pos) const { return index_[pos]; }

  // Steps to the next tuple in reflected lexicographic order. Returns false,
  // leaving the tuple unchanged, when already at (d, ..., d).
  bool advance();

 private:
  MultiIndex index_;
  std::size_t side_;
};

// Canonical vectorization: component psi(i, n) is a_i. Equal to the data buffer.
template <Scalar T>
std::vector<T> hvec(const Hypermatrix<T>& a);

// Number of weakly decreasing N-tuples over [d]: C(d+N-1, N).
std::uint64_t count_monotone(std::size_t d, std::size_t order);

// 1-based position of i in hvec_1N: C(d+N-1, N) - sum_k C(d+k-(i_k+1), k).
std::uint64_t placement(const MonotoneIndex& i);

// Unit vector e_placement(i) of length C(d+N-1, N).
template <Scalar T>
SparseTensor<T> unit_u(const MonotoneIndex& i);

// Zero-based storage offsets of the weakly decreasing tuples of a cubical
// side-d order-N hypermatrix, in hvec_1N order.
std::vector<std::size_t> monotone_offsets(std::size_t d, std::size_t order);

// Half vectorization of a symmetric cubical hypermatrix. Each slot is read
// from its monotone representative. SymmetryError (with a witness pair) if
// the input is not symmetric within tol.
template <Scalar T>
std::vector<T> hvec_1N(const Hypermatrix<T>& a, double tol = default_symmetry_tolerance<T>());

// As hvec_1N but trusts the caller that `a` is symmetric; reads only the
// C(d+N-1, N) monotone slots.
template <Scalar T>
std::vector<T> hvec_1N_unchecked(const Hypermatrix<T>& a);

// E_i: a single 1 at multi-index i in a cubical d^N shape.
template <Scalar T>
SparseTensor<T> basis_E(const MultiIndex& i, std::size_t d, std::size_t order);

// T_i: ones at every distinct rearrangement of i.
template <Scalar T>
SparseTensor<T> sym_T(const MonotoneIndex& i);

// Every distinct rearrangement of i, in next_permutation order.
std::vector<MultiIndex> distinct_permutations(const MonotoneIndex& i);

// L_d^(N), C(d+N-1, N) x d^N: L hvec(A) = hvec_1N(A) for symmetric A.
template <Scalar T>
SparseTensor<T> elimination_matrix(std::size_t d, std::size_t order);

// D_d^(N), d^N x C(d+N-1, N): D hvec_1N(A) = hvec(A) for symmetric A.
template <Scalar T>
SparseTensor<T> duplication_matrix(std::size_t d, std::size_t order);

// Column of the single 1 in the duplication-matrix row for multi-index i,
// zero-based: placement(representative(i)) - 1.
std::size_t duplication_column(const MultiIndex& i, std::size_t d);

// Debug dump: header line "kind d N rows cols nnz", then "row col value" per
// nonzero, 1-based, sorted row-major.
template <Scalar T>
void write_triplets(std::ostream& out, std::string_view kind, std::size_t d, std::size_t order,
                    const SparseTensor<T>& m);

}  // namespace hyperdet
