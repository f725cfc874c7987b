#pragma once

// Dense hypermatrices and the basic multilinear operations on them.
//
// Indexing convention: every public operation speaks 1-based multi-indices
// (i_1, ..., i_N) with 1 <= i_k <= n_k. Storage is a flat buffer in
// reflected lexicographic order (first axis fastest), so the entry at i
// lives at offset psi(i, n) - 1 where
//
//   psi(i, n) = i_1 + n_1 (i_2 - 1) + ... + n_1 ... n_{N-1} (i_N - 1).
//
// With this layout the canonical vectorization of a hypermatrix is its data
// buffer. A matrix is an order-2 hypermatrix (column-major as a consequence)
// and a vector is either an order-1 hypermatrix or an n x 1 matrix.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "hyperdet/error.hpp"
#include "hyperdet/scalar.hpp"

namespace hyperdet {

class Shape {
 public:
  Shape() = default;
  explicit Shape(std::vector<std::size_t> extents);
  Shape(std::initializer_list<std::size_t> extents)
      : Shape(std::vector<std::size_t>(extents)) {}

  static Shape cubical(std::size_t side, std::size_t order);

  std::size_t order() const noexcept { return extents_.size(); }
  // Zero-based axis position; extent of axis k + 1 in the 1-based math.
  std::size_t extent(std::size_t axis) const { return extents_.at(axis); }
  const std::vector<std::size_t>& extents() const noexcept { return extents_; }

  // |n| = n_1 ... n_N.
  std::size_t size() const noexcept { return size_; }
  bool is_cubical() const noexcept;

  bool operator==(const Shape&) const = default;
  std::string str() const;

 private:
  std::vector<std::size_t> extents_;
  std::size_t size_ = 0;
};

// 1-based multi-index (i_1, ..., i_N).
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<std::size_t> components) : c_(std::move(components)) {}
  MultiIndex(std::initializer_list<std::size_t> components) : c_(components) {}

  std::size_t size() const noexcept { return c_.size(); }
  std::size_t operator[](std::size_t pos) const { return c_[pos]; }
  std::size_t& operator[](std::size_t pos) { return c_[pos]; }
  auto begin() const noexcept { return c_.begin(); }
  auto end() const noexcept { return c_.end(); }
  const std::vector<std::size_t>& components() const noexcept { return c_; }

  bool operator==(const MultiIndex&) const = default;
  std::string str() const;

 private:
  std::vector<std::size_t> c_;
};

// 1-based flat position of i in shape n. Throws IndexError naming the
// offending axis, or ShapeError when the lengths differ.
std::uint64_t psi(const MultiIndex& i, const Shape& n);

// Zero-based storage offset, psi(i, n) - 1.
inline std::size_t offset_of(const MultiIndex& i, const Shape& n) {
  return static_cast<std::size_t>(psi(i, n) - 1);
}

// Inverse of offset_of.
MultiIndex unravel(std::size_t offset, const Shape& n);

// Strides of the psi layout: stride[k] = n_1 ... n_k (stride[0] = 1).
std::vector<std::size_t> strides(const Shape& n);

template <Scalar T>
class Hypermatrix {
 public:
  Hypermatrix() = default;
  explicit Hypermatrix(Shape shape)
      : shape_(std::move(shape)), data_(shape_.size(), ScalarTraits<T>::from_int(0)) {}
  Hypermatrix(Shape shape, std::vector<T> data) : shape_(std::move(shape)), data_(std::move(data)) {
    if (data_.size() != shape_.size()) {
      throw ShapeError("data length " + std::to_string(data_.size()) + " does not match shape " +
                       shape_.str() + " (expected " + std::to_string(shape_.size()) + ")");
    }
    for (const T& v : data_) {
      if (!ScalarTraits<T>::is_finite(v)) throw ArgumentError("non-finite hypermatrix entry");
    }
  }

  static Hypermatrix cubical(std::size_t side, std::size_t order) {
    return Hypermatrix(Shape::cubical(side, order));
  }

  const Shape& shape() const noexcept { return shape_; }
  std::size_t order() const noexcept { return shape_.order(); }
  std::size_t size() const noexcept { return data_.size(); }
  bool is_cubical() const noexcept { return shape_.is_cubical(); }
  // Side length d of a cubical hypermatrix; ShapeError otherwise.
  std::size_t side() const {
    if (!is_cubical()) throw ShapeError("hypermatrix of shape " + shape_.str() + " is not cubical");
    return shape_.extent(0);
  }

  const T& operator()(const MultiIndex& i) const { return data_[offset_of(i, shape_)]; }
  T& operator()(const MultiIndex& i) { return data_[offset_of(i, shape_)]; }
  const T& operator[](std::size_t offset) const { return data_[offset]; }
  T& operator[](std::size_t offset) { return data_[offset]; }

  std::span<const T> data() const noexcept { return data_; }
  std::span<T> data() noexcept { return data_; }
  const std::vector<T>& values() const noexcept { return data_; }

  bool operator==(const Hypermatrix& other) const {
    return shape_ == other.shape_ && data_ == other.data_;
  }

 private:
  Shape shape_;
  std::vector<T> data_;
};

// Matrix from a list of rows.
template <Scalar T>
Hypermatrix<T> matrix_from_rows(const std::vector<std::vector<T>>& rows);

// n x 1 matrix holding v.
template <Scalar T>
Hypermatrix<T> column(std::vector<T> v);

template <Scalar T>
Hypermatrix<T> operator+(const Hypermatrix<T>& a, const Hypermatrix<T>& b);

template <Scalar T>
Hypermatrix<T> operator*(const T& alpha, const Hypermatrix<T>& a);

// Ordinary matrix product of two order-2 hypermatrices.
template <Scalar T>
Hypermatrix<T> matmul(const Hypermatrix<T>& x, const Hypermatrix<T>& y);

// A * (X^(1), ..., X^(N)): entry (j_1..j_N) is
//   sum_{k_1..k_N} a_{k_1..k_N} x^(1)_{k_1 j_1} ... x^(N)_{k_N j_N}.
// Each factor is an n_k x m_k matrix or an order-1 vector of length n_k (m_k = 1).
template <Scalar T>
Hypermatrix<T> multilinear_multiply(const Hypermatrix<T>& a, std::span<const Hypermatrix<T>> factors);

// Multilinear product with vectors only, returned as a scalar.
template <Scalar T>
T multilinear_form(const Hypermatrix<T>& a, std::span<const Hypermatrix<T>> vectors);

// Tensor Kronecker product: the (i_1..i_N) block of the result is a_{i_1..i_N} B.
template <Scalar T>
Hypermatrix<T> kron(const Hypermatrix<T>& a, const Hypermatrix<T>& b);

// Permutations act on axes and are given as the 1-based image list
// (pi(1), ..., pi(N)). Composition compose(pi, rho) applies rho first:
// (pi o rho)(k) = pi(rho(k)).
using Permutation = std::vector<std::size_t>;

bool is_permutation(const Permutation& p, std::size_t n);
Permutation inverse(const Permutation& p);
Permutation compose(const Permutation& pi, const Permutation& rho);

// pi-transpose: entry at (i_1..i_N) of the result is a_{i_pi(1) .. i_pi(N)}.
// Axis j of the result has extent n_{pi^-1(j)}, which is the only extent
// consistent with that entry rule on non-cubical inputs.
// transpose(a, compose(pi, rho)) == transpose(transpose(a, rho), pi).
template <Scalar T>
Hypermatrix<T> transpose(const Hypermatrix<T>& a, const Permutation& pi);

// transpose with the axis-reversing permutation (1 N)(2 N-1)...
template <Scalar T>
Hypermatrix<T> generalized_transpose(const Hypermatrix<T>& a);

struct AsymmetryWitness {
  MultiIndex first;
  MultiIndex second;
  double difference = 0.0;
};

// First violation of invariance under an adjacent axis swap (k, k+1), if any.
// Adjacent transpositions generate S_N, so none found means fully symmetric.
// Entries count as equal when |a - b| <= tol; the rational backend requires tol == 0.
template <Scalar T>
std::optional<AsymmetryWitness> find_asymmetry(const Hypermatrix<T>& a, double tol);

template <Scalar T>
bool is_symmetric(const Hypermatrix<T>& a, double tol) {
  return !find_asymmetry(a, tol).has_value();
}

}  // namespace hyperdet
