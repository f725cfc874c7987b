#include "hyperdet/vectorize.hpp"

#include <algorithm>
#include <functional>
#include <ostream>

#include "hyperdet/checked.hpp"

namespace hyperdet {

MonotoneIndex::MonotoneIndex(std::vector<std::size_t> components, std::size_t side)
    : index_(std::move(components)), side_(side) {
  if (index_.size() == 0) throw ArgumentError("monotone index needs order >= 1");
  for (std::size_t k = 0; k < index_.size(); ++k) {
    if (index_[k] < 1 || index_[k] > side_) {
      throw IndexError("component " + std::to_string(k + 1) + " of " + index_.str() +
                           " outside [1, " + std::to_string(side_) + "]",
                       k + 1);
    }
    if (k > 0 && index_[k] > index_[k - 1]) {
      throw ArgumentError("index " + index_.str() + " is not weakly decreasing");
    }
  }
}

MonotoneIndex MonotoneIndex::first(std::size_t side, std::size_t order) {
  if (side == 0 || order == 0) throw ArgumentError("side and order must be >= 1");
  return MonotoneIndex(std::vector<std::size_t>(order, 1), side);
}

MonotoneIndex MonotoneIndex::representative(const MultiIndex& i, std::size_t side) {
  std::vector<std::size_t> c = i.components();
  std::sort(c.begin(), c.end(), std::greater<>());
  return MonotoneIndex(std::move(c), side);
}

bool MonotoneIndex::advance() {
  // Bump the least significant position that can grow; positions before it
  // drop to the new value, the smallest they may take.
  for (std::size_t k = 0; k < index_.size(); ++k) {
    if (index_[k] < side_) {
      const std::size_t v = index_[k] + 1;
      for (std::size_t j = 0; j <= k; ++j) index_[j] = v;
      return true;
    }
  }
  return false;
}

template <Scalar T>
std::vector<T> hvec(const Hypermatrix<T>& a) {
  return a.values();
}

std::uint64_t count_monotone(std::size_t d, std::size_t order) {
  if (d == 0 || order == 0) throw ArgumentError("side and order must be >= 1");
  return binomial(d + order - 1, order);
}

std::uint64_t placement(const MonotoneIndex& i) {
  const std::size_t d = i.side();
  const std::size_t n = i.order();
  std::uint64_t later = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    // Tuples greater than i that first differ at position k.
    later += binomial(d + k - (i[k - 1] + 1), k);
  }
  return count_monotone(d, n) - later;
}

template <Scalar T>
SparseTensor<T> unit_u(const MonotoneIndex& i) {
  const std::size_t len = count_monotone(i.side(), i.order());
  return SparseTensor<T>::from_coordinates(Shape{len}, {placement(i) - 1},
                                           {ScalarTraits<T>::from_int(1)});
}

std::vector<std::size_t> monotone_offsets(std::size_t d, std::size_t order) {
  const auto st = strides(Shape::cubical(d, order));
  std::vector<std::size_t> out;
  out.reserve(count_monotone(d, order));
  // Same walk as MonotoneIndex::advance on zero-based components, keeping
  // the storage offset up to date instead of recomputing it per slot.
  std::vector<std::size_t> idx(order, 0);
  std::size_t pos = 0;
  while (true) {
    out.push_back(pos);
    std::size_t k = 0;
    while (k < order && idx[k] == d - 1) ++k;
    if (k == order) break;
    const std::size_t v = idx[k] + 1;
    for (std::size_t j = 0; j <= k; ++j) {
      pos = pos - idx[j] * st[j] + v * st[j];
      idx[j] = v;
    }
  }
  return out;
}

template <Scalar T>
std::vector<T> hvec_1N_unchecked(const Hypermatrix<T>& a) {
  const auto slots = monotone_offsets(a.side(), a.order());
  std::vector<T> out;
  out.reserve(slots.size());
  for (std::size_t s : slots) out.push_back(a[s]);
  return out;
}

template <Scalar T>
std::vector<T> hvec_1N(const Hypermatrix<T>& a, double tol) {
  if (auto w = find_asymmetry(a, tol)) {
    throw SymmetryError("hypermatrix is not symmetric: entries " + w->first.str() + " and " +
                        w->second.str() + " differ by " + format_scalar(w->difference));
  }
  return hvec_1N_unchecked(a);
}

template <Scalar T>
SparseTensor<T> basis_E(const MultiIndex& i, std::size_t d, std::size_t order) {
  Shape shape = Shape::cubical(d, order);
  return SparseTensor<T>::from_entries(std::move(shape), {{i, ScalarTraits<T>::from_int(1)}});
}

std::vector<MultiIndex> distinct_permutations(const MonotoneIndex& i) {
  std::vector<std::size_t> c = i.index().components();
  std::sort(c.begin(), c.end());
  std::vector<MultiIndex> out;
  do {
    out.emplace_back(c);
  } while (std::next_permutation(c.begin(), c.end()));
  return out;
}

template <Scalar T>
SparseTensor<T> sym_T(const MonotoneIndex& i) {
  std::vector<std::pair<MultiIndex, T>> entries;
  for (auto& p : distinct_permutations(i)) entries.emplace_back(std::move(p), ScalarTraits<T>::from_int(1));
  return SparseTensor<T>::from_entries(Shape::cubical(i.side(), i.order()), entries);
}

namespace {

std::size_t dense_length(std::size_t d, std::size_t order, const char* what) {
  const std::uint64_t n = checked_pow(d, order, what);
  return static_cast<std::size_t>(n);
}

}  // namespace

std::size_t duplication_column(const MultiIndex& i, std::size_t d) {
  return static_cast<std::size_t>(placement(MonotoneIndex::representative(i, d)) - 1);
}

template <Scalar T>
SparseTensor<T> elimination_matrix(std::size_t d, std::size_t order) {
  std::size_t rows = 0, cols = 0;
  try {
    rows = count_monotone(d, order);
    cols = dense_length(d, order, "elimination matrix");
  } catch (const OverflowError&) {
    throw OverflowError("elimination matrix L for d=" + std::to_string(d) + ", N=" +
                        std::to_string(order) + " is C(" + std::to_string(d + order - 1) + ", " +
                        std::to_string(order) + ") x " + std::to_string(d) + "^" +
                        std::to_string(order) + ", beyond 64-bit range");
  }
  const Shape cube = Shape::cubical(d, order);
  std::vector<std::size_t> coords;
  std::vector<T> values;
  MonotoneIndex i = MonotoneIndex::first(d, order);
  do {
    coords.push_back(placement(i) - 1);
    coords.push_back(offset_of(i.index(), cube));
    values.push_back(ScalarTraits<T>::from_int(1));
  } while (i.advance());
  return SparseTensor<T>::from_coordinates(Shape{rows, cols}, std::move(coords), std::move(values));
}

template <Scalar T>
SparseTensor<T> duplication_matrix(std::size_t d, std::size_t order) {
  std::size_t rows = 0, cols = 0;
  try {
    cols = count_monotone(d, order);
    rows = dense_length(d, order, "duplication matrix");
  } catch (const OverflowError&) {
    throw OverflowError("duplication matrix D for d=" + std::to_string(d) + ", N=" +
                        std::to_string(order) + " is " + std::to_string(d) + "^" +
                        std::to_string(order) + " x C(" + std::to_string(d + order - 1) + ", " +
                        std::to_string(order) + "), beyond 64-bit range");
  }
  const Shape cube = Shape::cubical(d, order);
  std::vector<std::size_t> coords;
  std::vector<T> values;
  MonotoneIndex i = MonotoneIndex::first(d, order);
  do {
    const std::size_t col = placement(i) - 1;
    for (const auto& j : distinct_permutations(i)) {
      coords.push_back(offset_of(j, cube));
      coords.push_back(col);
      values.push_back(ScalarTraits<T>::from_int(1));
    }
  } while (i.advance());
  return SparseTensor<T>::from_coordinates(Shape{rows, cols}, std::move(coords), std::move(values));
}

template <Scalar T>
void write_triplets(std::ostream& out, std::string_view kind, std::size_t d, std::size_t order,
                    const SparseTensor<T>& m) {
  if (m.order() != 2) throw ShapeError("triplet dump needs a matrix");
  std::vector<std::size_t> rowmajor(m.nnz());
  for (std::size_t k = 0; k < rowmajor.size(); ++k) rowmajor[k] = k;
  std::sort(rowmajor.begin(), rowmajor.end(), [&](std::size_t x, std::size_t y) {
    const auto cx = m.coords(x), cy = m.coords(y);
    return cx[0] != cy[0] ? cx[0] < cy[0] : cx[1] < cy[1];
  });
  out << kind << ' ' << d << ' ' << order << ' ' << m.shape().extent(0) << ' '
      << m.shape().extent(1) << ' ' << m.nnz() << '\n';
  for (std::size_t k : rowmajor) {
    out << m.coords(k)[0] + 1 << ' ' << m.coords(k)[1] + 1 << ' ' << format_scalar(m.value(k))
        << '\n';
  }
}

#define HYPERDET_INSTANTIATE_VECTORIZE(T)                                                     \
  template std::vector<T> hvec(const Hypermatrix<T>&);                                        \
  template SparseTensor<T> unit_u<T>(const MonotoneIndex&);                                   \
  template std::vector<T> hvec_1N(const Hypermatrix<T>&, double);                             \
  template std::vector<T> hvec_1N_unchecked(const Hypermatrix<T>&);                           \
  template SparseTensor<T> basis_E<T>(const MultiIndex&, std::size_t, std::size_t);           \
  template SparseTensor<T> sym_T<T>(const MonotoneIndex&);                                    \
  template SparseTensor<T> elimination_matrix<T>(std::size_t, std::size_t);                   \
  template SparseTensor<T> duplication_matrix<T>(std::size_t, std::size_t);                   \
  template void write_triplets(std::ostream&, std::string_view, std::size_t, std::size_t,     \
                               const SparseTensor<T>&);

HYPERDET_INSTANTIATE_VECTORIZE(Rational)
HYPERDET_INSTANTIATE_VECTORIZE(double)
HYPERDET_INSTANTIATE_VECTORIZE(Complex)

}  // namespace hyperdet
