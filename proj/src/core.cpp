#include "hyperdet/core.hpp"

#include <algorithm>
#include <numeric>

#include "hyperdet/checked.hpp"

namespace hyperdet {

Shape::Shape(std::vector<std::size_t> extents) : extents_(std::move(extents)) {
  if (extents_.empty()) throw ShapeError("shape must have order >= 1");
  std::uint64_t n = 1;
  for (std::size_t k = 0; k < extents_.size(); ++k) {
    if (extents_[k] == 0) {
      throw ShapeError("extent of axis " + std::to_string(k + 1) + " must be >= 1");
    }
    n = checked_mul(n, extents_[k], "hypermatrix size");
  }
  size_ = static_cast<std::size_t>(n);
}

Shape Shape::cubical(std::size_t side, std::size_t order) {
  return Shape(std::vector<std::size_t>(order, side));
}

bool Shape::is_cubical() const noexcept {
  return std::all_of(extents_.begin(), extents_.end(),
                     [&](std::size_t e) { return e == extents_.front(); });
}

std::string Shape::str() const {
  std::string s = "(";
  for (std::size_t k = 0; k < extents_.size(); ++k) {
    if (k) s += "x";
    s += std::to_string(extents_[k]);
  }
  return s + ")";
}

std::string MultiIndex::str() const {
  std::string s = "(";
  for (std::size_t k = 0; k < c_.size(); ++k) {
    if (k) s += ",";
    s += std::to_string(c_[k]);
  }
  return s + ")";
}

std::uint64_t psi(const MultiIndex& i, const Shape& n) {
  if (i.size() != n.order()) {
    throw ShapeError("multi-index " + i.str() + " has length " + std::to_string(i.size()) +
                     ", shape " + n.str() + " has order " + std::to_string(n.order()));
  }
  std::uint64_t pos = 0;
  std::uint64_t stride = 1;
  for (std::size_t k = 0; k < i.size(); ++k) {
    if (i[k] < 1 || i[k] > n.extent(k)) {
      throw IndexError("index " + i.str() + " out of range on axis " + std::to_string(k + 1) +
                           " (extent " + std::to_string(n.extent(k)) + ")",
                       k + 1);
    }
    pos += stride * (i[k] - 1);
    stride *= n.extent(k);
  }
  return pos + 1;
}

MultiIndex unravel(std::size_t offset, const Shape& n) {
  std::vector<std::size_t> c(n.order());
  for (std::size_t k = 0; k < n.order(); ++k) {
    c[k] = offset % n.extent(k) + 1;
    offset /= n.extent(k);
  }
  return MultiIndex(std::move(c));
}

std::vector<std::size_t> strides(const Shape& n) {
  std::vector<std::size_t> s(n.order(), 1);
  for (std::size_t k = 1; k < n.order(); ++k) s[k] = s[k - 1] * n.extent(k - 1);
  return s;
}

bool is_permutation(const Permutation& p, std::size_t n) {
  if (p.size() != n) return false;
  std::vector<bool> seen(n + 1, false);
  for (std::size_t v : p) {
    if (v < 1 || v > n || seen[v]) return false;
    seen[v] = true;
  }
  return true;
}

Permutation inverse(const Permutation& p) {
  if (!is_permutation(p, p.size())) throw ArgumentError("not a permutation");
  Permutation inv(p.size());
  for (std::size_t k = 0; k < p.size(); ++k) inv[p[k] - 1] = k + 1;
  return inv;
}

Permutation compose(const Permutation& pi, const Permutation& rho) {
  if (pi.size() != rho.size() || !is_permutation(pi, pi.size()) ||
      !is_permutation(rho, rho.size())) {
    throw ArgumentError("compose needs two permutations of the same set");
  }
  Permutation out(pi.size());
  for (std::size_t k = 0; k < pi.size(); ++k) out[k] = pi[rho[k] - 1];
  return out;
}

namespace {

// Advances a 1-based multi-index in psi order; returns false after the last one.
bool next_index(std::vector<std::size_t>& idx, const Shape& n) {
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (idx[k] < n.extent(k)) {
      ++idx[k];
      return true;
    }
    idx[k] = 1;
  }
  return false;
}

struct FactorView {
  std::size_t rows;
  std::size_t cols;
};

template <Scalar T>
FactorView factor_view(const Hypermatrix<T>& x, std::size_t axis, std::size_t expected_rows) {
  FactorView v{};
  if (x.order() == 1) {
    v = {x.shape().extent(0), 1};
  } else if (x.order() == 2) {
    v = {x.shape().extent(0), x.shape().extent(1)};
  } else {
    throw ShapeError("factor " + std::to_string(axis + 1) + " has order " +
                     std::to_string(x.order()) + "; expected a matrix or vector");
  }
  if (v.rows != expected_rows) {
    throw ShapeError("factor " + std::to_string(axis + 1) + " has " + std::to_string(v.rows) +
                     " rows; expected " + std::to_string(expected_rows));
  }
  return v;
}

}  // namespace

template <Scalar T>
Hypermatrix<T> matrix_from_rows(const std::vector<std::vector<T>>& rows) {
  if (rows.empty() || rows.front().empty()) throw ShapeError("empty matrix");
  const std::size_t m = rows.size();
  const std::size_t n = rows.front().size();
  Hypermatrix<T> out(Shape{m, n});
  for (std::size_t i = 0; i < m; ++i) {
    if (rows[i].size() != n) throw ShapeError("ragged matrix rows");
    for (std::size_t j = 0; j < n; ++j) out[i + m * j] = rows[i][j];
  }
  return out;
}

template <Scalar T>
Hypermatrix<T> column(std::vector<T> v) {
  const std::size_t n = v.size();
  return Hypermatrix<T>(Shape{n, 1}, std::move(v));
}

template <Scalar T>
Hypermatrix<T> operator+(const Hypermatrix<T>& a, const Hypermatrix<T>& b) {
  if (a.shape() != b.shape()) {
    throw ShapeError("cannot add " + a.shape().str() + " and " + b.shape().str());
  }
  Hypermatrix<T> out(a.shape());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] + b[k];
  return out;
}

template <Scalar T>
Hypermatrix<T> operator*(const T& alpha, const Hypermatrix<T>& a) {
  Hypermatrix<T> out(a.shape());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = alpha * a[k];
  return out;
}

template <Scalar T>
Hypermatrix<T> matmul(const Hypermatrix<T>& x, const Hypermatrix<T>& y) {
  if (x.order() != 2 || y.order() != 2 || x.shape().extent(1) != y.shape().extent(0)) {
    throw ShapeError("matmul of " + x.shape().str() + " and " + y.shape().str());
  }
  const std::size_t m = x.shape().extent(0), k = x.shape().extent(1), n = y.shape().extent(1);
  Hypermatrix<T> out(Shape{m, n});
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t p = 0; p < k; ++p)
      for (std::size_t i = 0; i < m; ++i) out[i + m * j] += x[i + m * p] * y[p + k * j];
  return out;
}

template <Scalar T>
Hypermatrix<T> multilinear_multiply(const Hypermatrix<T>& a, std::span<const Hypermatrix<T>> factors) {
  if (factors.size() != a.order()) {
    throw ShapeError("multilinear product needs " + std::to_string(a.order()) +
                     " factors, got " + std::to_string(factors.size()));
  }
  std::vector<FactorView> views;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    views.push_back(factor_view(factors[k], k, a.shape().extent(k)));
  }

  // Contract one axis at a time; each pass replaces extent n_k by m_k.
  std::vector<std::size_t> ext = a.shape().extents();
  std::vector<T> cur(a.values());
  for (std::size_t k = 0; k < factors.size(); ++k) {
    std::size_t inner = 1;
    for (std::size_t q = 0; q < k; ++q) inner *= ext[q];
    std::size_t outer = 1;
    for (std::size_t q = k + 1; q < ext.size(); ++q) outer *= ext[q];
    const std::size_t n = views[k].rows, m = views[k].cols;
    const auto& x = factors[k];
    std::vector<T> next(inner * m * outer, ScalarTraits<T>::from_int(0));
    for (std::size_t o = 0; o < outer; ++o)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t q = 0; q < n; ++q) {
          const T& w = x[q + n * j];
          if (ScalarTraits<T>::is_zero(w)) continue;
          const T* src = &cur[(o * n + q) * inner];
          T* dst = &next[(o * m + j) * inner];
          for (std::size_t i = 0; i < inner; ++i) dst[i] += src[i] * w;
        }
    cur = std::move(next);
    ext[k] = m;
  }
  return Hypermatrix<T>(Shape(ext), std::move(cur));
}

template <Scalar T>
T multilinear_form(const Hypermatrix<T>& a, std::span<const Hypermatrix<T>> vectors) {
  Hypermatrix<T> r = multilinear_multiply(a, vectors);
  if (r.size() != 1) throw ShapeError("multilinear_form needs vector factors");
  return r[0];
}

template <Scalar T>
Hypermatrix<T> kron(const Hypermatrix<T>& a, const Hypermatrix<T>& b) {
  if (a.order() != b.order()) {
    throw ShapeError("kron of order " + std::to_string(a.order()) + " and order " +
                     std::to_string(b.order()));
  }
  const std::size_t order = a.order();
  std::vector<std::size_t> ext(order);
  for (std::size_t k = 0; k < order; ++k) ext[k] = a.shape().extent(k) * b.shape().extent(k);
  const Shape out_shape(ext);
  const auto out_strides = strides(out_shape);
  Hypermatrix<T> out(out_shape);

  std::vector<std::size_t> ia(order, 1);
  std::size_t oa = 0;
  do {
    const T& alpha = a[oa++];
    std::size_t block = 0;
    for (std::size_t k = 0; k < order; ++k) {
      block += (ia[k] - 1) * b.shape().extent(k) * out_strides[k];
    }
    std::vector<std::size_t> ib(order, 1);
    std::size_t ob = 0;
    do {
      std::size_t pos = block;
      for (std::size_t k = 0; k < order; ++k) pos += (ib[k] - 1) * out_strides[k];
      out[pos] = alpha * b[ob++];
    } while (next_index(ib, b.shape()));
  } while (next_index(ia, a.shape()));
  return out;
}

template <Scalar T>
Hypermatrix<T> transpose(const Hypermatrix<T>& a, const Permutation& pi) {
  const std::size_t order = a.order();
  if (!is_permutation(pi, order)) {
    throw ArgumentError("transpose needs a permutation of {1.." + std::to_string(order) + "}");
  }
  const Permutation inv = inverse(pi);
  std::vector<std::size_t> ext(order);
  for (std::size_t j = 0; j < order; ++j) ext[j] = a.shape().extent(inv[j] - 1);
  const Shape out_shape(ext);
  const auto src_strides = strides(a.shape());
  Hypermatrix<T> out(out_shape);

  std::vector<std::size_t> idx(order, 1);
  std::size_t pos = 0;
  do {
    // Source index component k is idx[pi(k)].
    std::size_t src = 0;
    for (std::size_t k = 0; k < order; ++k) src += (idx[pi[k] - 1] - 1) * src_strides[k];
    out[pos++] = a[src];
  } while (next_index(idx, out_shape));
  return out;
}

template <Scalar T>
Hypermatrix<T> generalized_transpose(const Hypermatrix<T>& a) {
  Permutation rev(a.order());
  for (std::size_t k = 0; k < rev.size(); ++k) rev[k] = rev.size() - k;
  return transpose(a, rev);
}

template <Scalar T>
std::optional<AsymmetryWitness> find_asymmetry(const Hypermatrix<T>& a, double tol) {
  if (!a.is_cubical()) {
    throw ShapeError("symmetry needs a cubical hypermatrix, got " + a.shape().str());
  }
  if (tol < 0) throw ArgumentError("symmetry tolerance must be nonnegative");
  if (ScalarTraits<T>::exact && tol != 0) {
    throw ArgumentError("the rational backend compares exactly; tolerance must be 0");
  }
  const auto st = strides(a.shape());
  const std::size_t order = a.order();
  std::vector<std::size_t> idx(order, 1);
  std::size_t pos = 0;
  do {
    for (std::size_t k = 0; k + 1 < order; ++k) {
      if (idx[k] <= idx[k + 1]) continue;  // each unordered pair checked once
      const std::size_t delta = idx[k] - idx[k + 1];
      const std::size_t swapped = pos - delta * st[k] + delta * st[k + 1];
      const bool equal = ScalarTraits<T>::exact
                             ? a[pos] == a[swapped]
                             : ScalarTraits<T>::distance(a[pos], a[swapped]) <= tol;
      if (!equal) {
        MultiIndex first(idx);
        MultiIndex second(idx);
        std::swap(second[k], second[k + 1]);
        return AsymmetryWitness{std::move(first), std::move(second),
                                ScalarTraits<T>::distance(a[pos], a[swapped])};
      }
    }
    ++pos;
  } while (next_index(idx, a.shape()));
  return std::nullopt;
}

#define HYPERDET_INSTANTIATE_CORE(T)                                                          \
  template Hypermatrix<T> matrix_from_rows(const std::vector<std::vector<T>>&);                \
  template Hypermatrix<T> column(std::vector<T>);                                              \
  template Hypermatrix<T> operator+(const Hypermatrix<T>&, const Hypermatrix<T>&);             \
  template Hypermatrix<T> operator*(const T&, const Hypermatrix<T>&);                          \
  template Hypermatrix<T> matmul(const Hypermatrix<T>&, const Hypermatrix<T>&);                \
  template Hypermatrix<T> multilinear_multiply(const Hypermatrix<T>&,                          \
                                               std::span<const Hypermatrix<T>>);               \
  template T multilinear_form(const Hypermatrix<T>&, std::span<const Hypermatrix<T>>);         \
  template Hypermatrix<T> kron(const Hypermatrix<T>&, const Hypermatrix<T>&);                  \
  template Hypermatrix<T> transpose(const Hypermatrix<T>&, const Permutation&);                \
  template Hypermatrix<T> generalized_transpose(const Hypermatrix<T>&);                        \
  template std::optional<AsymmetryWitness> find_asymmetry(const Hypermatrix<T>&, double);

HYPERDET_INSTANTIATE_CORE(Rational)
HYPERDET_INSTANTIATE_CORE(double)
HYPERDET_INSTANTIATE_CORE(Complex)

}  // namespace hyperdet
