#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "hyperdet/core.hpp"

namespace hyperdet {

// Coordinate-form tensor. Nonzeros are kept sorted ascending by their psi
// position (last axis most significant), without duplicates or explicit zeros.
// Coordinates are stored 0-based, `order()` per nonzero, row after row.
template <Scalar T>
class SparseTensor {
 public:
  SparseTensor() = default;
  explicit SparseTensor(Shape shape) : shape_(std::move(shape)) {}

  // Sorts into canonical order, drops zeros, rejects out-of-range coordinates
  // (IndexError) and repeated coordinates (ArgumentError).
  static SparseTensor from_coordinates(Shape shape, std::vector<std::size_t> coords,
                                       std::vector<T> values);

  static SparseTensor from_entries(Shape shape,
                                   const std::vector<std::pair<MultiIndex, T>>& entries);

  const Shape& shape() const noexcept { return shape_; }
  std::size_t order() const noexcept { return shape_.order(); }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> coords(std::size_t k) const {
    return {coords_.data() + k * order(), order()};
  }
  const T& value(std::size_t k) const { return values_[k]; }
  std::span<const T> values() const noexcept { return values_; }

  // 1-based multi-index of nonzero k.
  MultiIndex index(std::size_t k) const;

  // psi(index(k)) - 1; OverflowError if the dense size does not fit 64 bits.
  std::uint64_t linear_offset(std::size_t k) const;

  // Value at i (zero when absent).
  T at(const MultiIndex& i) const;

  Hypermatrix<T> to_dense() const;

  bool operator==(const SparseTensor& other) const {
    return shape_ == other.shape_ && coords_ == other.coords_ && values_ == other.values_;
  }

 private:
  Shape shape_;
  std::vector<std::size_t> coords_;
  std::vector<T> values_;
};

// Sparse tensor holding exactly the nonzeros of a dense one.
template <Scalar T>
SparseTensor<T> to_sparse(const Hypermatrix<T>& dense);

// Order-2 helpers.
template <Scalar T>
SparseTensor<T> sparse_identity(std::size_t n);

template <Scalar T>
SparseTensor<T> sparse_matmul(const SparseTensor<T>& a, const SparseTensor<T>& b);

template <Scalar T>
std::vector<T> sparse_matvec(const SparseTensor<T>& a, std::span<const T> x);

}  // namespace hyperdet
