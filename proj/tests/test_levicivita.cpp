#include <doctest.h>

#include "hyperdet/levicivita.hpp"
#include "oracles.hpp"

using namespace hyperdet;
using Q = Rational;

TEST_SUITE("levicivita") {

TEST_CASE("permutation sign matches inversion parity") {
  for (std::size_t d = 1; d <= 6; ++d) {
    for (const auto& p : oracle::all_permutations(d)) {
      CHECK(permutation_sign(p) == oracle::inversion_sign(p));
    }
  }
}

TEST_CASE("signed permutation table") {
  const auto t = signed_permutations(4);
  CHECK(t.side == 4);
  REQUIRE(t.entries.size() == 24);
  const Shape cube = Shape::cubical(4, 4);
  for (std::size_t k = 1; k < t.entries.size(); ++k) {
    CHECK(psi(t.entries[k - 1].images, cube) < psi(t.entries[k].images, cube));
  }
}

TEST_CASE("levi_civita examples") {
  const auto e2 = levi_civita<Q>(2);
  CHECK(e2.nnz() == 2);
  CHECK(e2.at({1, 2}) == 1);
  CHECK(e2.at({2, 1}) == -1);
  const auto e3 = levi_civita<Q>(3);
  CHECK(e3.nnz() == 6);
  CHECK(e3.at({1, 2, 3}) == 1);
  CHECK(e3.at({1, 3, 2}) == -1);
  CHECK(e3.at({2, 3, 1}) == 1);
  CHECK(e3.at({1, 1, 2}) == 0);
  const auto e1 = levi_civita<Q>(1);
  CHECK(e1.nnz() == 1);
  CHECK(e1.at({1}) == 1);
  for (std::size_t d = 1; d <= 4; ++d) CHECK(levi_civita<Q>(d).to_dense() == oracle::dense_levi_civita<Q>(d));
}

TEST_CASE("swapping two axes negates the symbol") {
  for (std::size_t d = 2; d <= 3; ++d) {
    const auto e = levi_civita<Q>(d).to_dense();
    for (std::size_t a = 1; a <= d; ++a) {
      for (std::size_t b = a + 1; b <= d; ++b) {
        Permutation swap(d);
        for (std::size_t k = 0; k < d; ++k) swap[k] = k + 1;
        std::swap(swap[a - 1], swap[b - 1]);
        CHECK(transpose(e, swap) == Q(-1) * e);
      }
    }
  }
  // d = 4 on coordinates
  const auto e4 = levi_civita<Q>(4);
  for (std::size_t k = 0; k < e4.nnz(); ++k) {
    auto i = e4.index(k);
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = a + 1; b < 4; ++b) {
        auto j = i;
        std::swap(j[a], j[b]);
        CHECK(e4.at(j) == -e4.value(k));
      }
    }
  }
}

TEST_CASE("Kronecker power: counts and values") {
  for (std::size_t d = 1; d <= 3; ++d) {
    for (std::size_t n = 1; n <= 4; ++n) {
      const auto p = epsilon_kron_power<Q>(d, n);
      CHECK(p.nnz() == epsilon_power_nnz(d, n));
      CHECK(p.order() == d);
      CHECK(p.shape().extent(0) == static_cast<std::size_t>(std::pow(d, n)));
      for (const auto& v : p.values()) CHECK((v == 1 || v == -1));
    }
  }
  CHECK(epsilon_kron_power<Q>(3, 1) == levi_civita<Q>(3));
  CHECK(epsilon_power_nnz(2, 3) == 8);
  CHECK_THROWS_AS(epsilon_power_nnz(20, 20), OverflowError);
}

TEST_CASE("Kronecker power agrees with the dense block rule") {
  auto dense_power = [](std::size_t d, std::size_t n) {
    const auto e = oracle::dense_levi_civita<Q>(d);
    auto acc = e;
    for (std::size_t k = 1; k < n; ++k) acc = oracle::kron(acc, e);
    return acc;
  };
  CHECK(epsilon_kron_power<Q>(2, 2).to_dense() == dense_power(2, 2));
  CHECK(epsilon_kron_power<Q>(2, 3).to_dense() == dense_power(2, 3));
  CHECK(epsilon_kron_power<Q>(3, 2).to_dense() == dense_power(3, 2));
  const auto p = epsilon_kron_power<Q>(2, 3);
  CHECK(p.to_dense() == kron(kron(levi_civita<Q>(2).to_dense(), levi_civita<Q>(2).to_dense()),
                             levi_civita<Q>(2).to_dense()));
}

TEST_CASE("Kronecker power refuses budgets it would exceed") {
  try {
    epsilon_kron_power<Q>(3, 4, 1000);
    FAIL("expected ResourceError");
  } catch (const ResourceError& e) {
    CHECK(e.required() == 1296);
    CHECK(e.budget() == 1000);
  }
}

}  // TEST_SUITE
