#include "hyperdet/sparse.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "hyperdet/checked.hpp"

namespace hyperdet {

namespace {

// Lexicographic comparison starting at the last axis, i.e. psi order.
bool psi_less(const std::size_t* a, const std::size_t* b, std::size_t order) {
  for (std::size_t k = order; k-- > 0;) {
    if (a[k] != b[k]) return a[k] < b[k];
  }
  return false;
}

}  // namespace

template <Scalar T>
SparseTensor<T> SparseTensor<T>::from_coordinates(Shape shape, std::vector<std::size_t> coords,
                                                  std::vector<T> values) {
  const std::size_t order = shape.order();
  if (coords.size() != values.size() * order) {
    throw ShapeError("coordinate list length does not match value count");
  }
  for (std::size_t p = 0; p < coords.size(); ++p) {
    const std::size_t axis = p % order;
    if (coords[p] >= shape.extent(axis)) {
      throw IndexError("sparse coordinate out of range on axis " + std::to_string(axis + 1), axis + 1);
    }
  }
  std::vector<std::size_t> perm(values.size());
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::size_t x, std::size_t y) {
    return psi_less(&coords[x * order], &coords[y * order], order);
  });

  SparseTensor out(std::move(shape));
  out.coords_.reserve(coords.size());
  out.values_.reserve(values.size());
  for (std::size_t r = 0; r < perm.size(); ++r) {
    const std::size_t src = perm[r];
    if (r > 0 && !psi_less(&coords[perm[r - 1] * order], &coords[src * order], order)) {
      throw ArgumentError("duplicate coordinate in sparse tensor");
    }
    if (ScalarTraits<T>::is_zero(values[src])) continue;
    out.coords_.insert(out.coords_.end(), coords.begin() + src * order,
                       coords.begin() + (src + 1) * order);
    out.values_.push_back(std::move(values[src]));
  }
  return out;
}

template <Scalar T>
SparseTensor<T> SparseTensor<T>::from_entries(Shape shape,
                                              const std::vector<std::pair<MultiIndex, T>>& entries) {
  std::vector<std::size_t> coords;
  std::vector<T> values;
  for (const auto& [idx, v] : entries) {
    psi(idx, shape);  // validates
    for (std::size_t c : idx) coords.push_back(c - 1);
    values.push_back(v);
  }
  return from_coordinates(std::move(shape), std::move(coords), std::move(values));
}

template <Scalar T>
MultiIndex SparseTensor<T>::index(std::size_t k) const {
  std::vector<std::size_t> c(order());
  for (std::size_t a = 0; a < order(); ++a) c[a] = coords_[k * order() + a] + 1;
  return MultiIndex(std::move(c));
}

template <Scalar T>
std::uint64_t SparseTensor<T>::linear_offset(std::size_t k) const {
  std::uint64_t pos = 0;
  std::uint64_t stride = 1;
  for (std::size_t a = 0; a < order(); ++a) {
    pos = checked_add(pos, checked_mul(stride, coords_[k * order() + a], "sparse offset"),
                      "sparse offset");
    if (a + 1 < order()) stride = checked_mul(stride, shape_.extent(a), "sparse offset");
  }
  return pos;
}

template <Scalar T>
T SparseTensor<T>::at(const MultiIndex& i) const {
  psi(i, shape_);
  std::vector<std::size_t> key(order());
  for (std::size_t a = 0; a < order(); ++a) key[a] = i[a] - 1;
  std::size_t lo = 0, hi = nnz();
  while (lo < hi) {
    const std::size_t mid = (lo + hi) / 2;
    if (psi_less(&coords_[mid * order()], key.data(), order())) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < nnz() && std::equal(key.begin(), key.end(), coords_.begin() + lo * order())) {
    return values_[lo];
  }
  return ScalarTraits<T>::from_int(0);
}

template <Scalar T>
Hypermatrix<T> SparseTensor<T>::to_dense() const {
  Hypermatrix<T> out(shape_);
  const auto st = strides(shape_);
  for (std::size_t k = 0; k < nnz(); ++k) {
    std::size_t pos = 0;
    for (std::size_t a = 0; a < order(); ++a) pos += coords_[k * order() + a] * st[a];
    out[pos] = values_[k];
  }
  return out;
}

template <Scalar T>
SparseTensor<T> to_sparse(const Hypermatrix<T>& dense) {
  std::vector<std::size_t> coords;
  std::vector<T> values;
  for (std::size_t p = 0; p < dense.size(); ++p) {
    if (ScalarTraits<T>::is_zero(dense[p])) continue;
    std::size_t rest = p;
    for (std::size_t a = 0; a < dense.order(); ++a) {
      coords.push_back(rest % dense.shape().extent(a));
      rest /= dense.shape().extent(a);
    }
    values.push_back(dense[p]);
  }
  return SparseTensor<T>::from_coordinates(dense.shape(), std::move(coords), std::move(values));
}

template <Scalar T>
SparseTensor<T> sparse_identity(std::size_t n) {
  std::vector<std::size_t> coords;
  std::vector<T> values(n, ScalarTraits<T>::from_int(1));
  for (std::size_t i = 0; i < n; ++i) {
    coords.push_back(i);
    coords.push_back(i);
  }
  return SparseTensor<T>::from_coordinates(Shape{n, n}, std::move(coords), std::move(values));
}

template <Scalar T>
SparseTensor<T> sparse_matmul(const SparseTensor<T>& a, const SparseTensor<T>& b) {
  if (a.order() != 2 || b.order() != 2 || a.shape().extent(1) != b.shape().extent(0)) {
    throw ShapeError("sparse matmul of " + a.shape().str() + " and " + b.shape().str());
  }
  // Row lists of b, keyed by row.
  std::vector<std::vector<std::size_t>> b_rows(b.shape().extent(0));
  for (std::size_t k = 0; k < b.nnz(); ++k) b_rows[b.coords(k)[0]].push_back(k);

  std::map<std::pair<std::size_t, std::size_t>, T> acc;  // (col, row): psi order
  for (std::size_t k = 0; k < a.nnz(); ++k) {
    const std::size_t i = a.coords(k)[0], p = a.coords(k)[1];
    for (std::size_t kb : b_rows[p]) {
      const std::size_t j = b.coords(kb)[1];
      auto [it, inserted] = acc.try_emplace({j, i}, ScalarTraits<T>::from_int(0));
      it->second += a.value(k) * b.value(kb);
    }
  }
  std::vector<std::size_t> coords;
  std::vector<T> values;
  for (auto& [key, v] : acc) {
    coords.push_back(key.second);
    coords.push_back(key.first);
    values.push_back(v);
  }
  return SparseTensor<T>::from_coordinates(Shape{a.shape().extent(0), b.shape().extent(1)},
                                           std::move(coords), std::move(values));
}

template <Scalar T>
std::vector<T> sparse_matvec(const SparseTensor<T>& a, std::span<const T> x) {
  if (a.order() != 2 || a.shape().extent(1) != x.size()) {
    throw ShapeError("sparse matvec of " + a.shape().str() + " with vector of length " +
                     std::to_string(x.size()));
  }
  std::vector<T> y(a.shape().extent(0), ScalarTraits<T>::from_int(0));
  for (std::size_t k = 0; k < a.nnz(); ++k) y[a.coords(k)[0]] += a.value(k) * x[a.coords(k)[1]];
  return y;
}

#define HYPERDET_INSTANTIATE_SPARSE(T)                                                    \
  template class SparseTensor<T>;                                                         \
  template SparseTensor<T> to_sparse(const Hypermatrix<T>&);                              \
  template SparseTensor<T> sparse_identity<T>(std::size_t);                               \
  template SparseTensor<T> sparse_matmul(const SparseTensor<T>&, const SparseTensor<T>&); \
  template std::vector<T> sparse_matvec(const SparseTensor<T>&, std::span<const T>);

HYPERDET_INSTANTIATE_SPARSE(Rational)
HYPERDET_INSTANTIATE_SPARSE(double)
HYPERDET_INSTANTIATE_SPARSE(Complex)

}  // namespace hyperdet
