#pragma once

// Cayley's first hyperdeterminant of a cubical order-N, side-d hypermatrix:
//
//   hdet(A) = (1/d!) sum_{sigma_1..sigma_N in S_d} prod_k sgn(sigma_k)
//                                               prod_i a_{sigma_1(i) .. sigma_N(i)}
//
// Three engines compute it:
//   naive          even N: the sum with sigma_1 fixed to the identity, (d!)^(N-1) terms.
//   levicivita     (1/d!) (eps x ... x eps) * (hvec A, ..., hvec A), contracting the
//                  (d!)^N sparse nonzeros of the Levi-Civita Kronecker power.
//   symmetric-fast symmetric A only: E * (h, ..., h) with h = hvec_1N(A) and the
//                  precomputed order-d contractor E = (1/d!) (x^N eps) * (D, ..., D).
//
// For odd N and d >= 2 the value is identically zero.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string_view>

#include "hyperdet/core.hpp"
#include "hyperdet/levicivita.hpp"
#include "hyperdet/sparse.hpp"
#include "hyperdet/vectorize.hpp"

namespace hyperdet {

struct Budget {
  // Nonzeros of the Levi-Civita power, also the term count of a contractor build.
  std::uint64_t max_epsilon_nonzeros = kDefaultEpsilonBudget;
  // Dense entries C(d+N-1, N)^d of a contractor.
  std::uint64_t max_contractor_entries = 100'000'000;
};

inline constexpr std::uint64_t kContractorFormatVersion = 1;

// E_d^(N): dense cubical tensor of order d and side C(d+N-1, N).
template <Scalar T>
struct Contractor {
  std::size_t d = 0;
  std::size_t order = 0;  // N
  Hypermatrix<T> tensor;
  std::uint64_t version = kContractorFormatVersion;
  // monotone_offsets(d, N): where hvec_1N reads an order-N side-d input.
  std::vector<std::size_t> slots;

  static constexpr Backend backend() { return ScalarTraits<T>::backend; }
  std::size_t side() const { return tensor.shape().extent(0); }
};

// C(d+N-1, N)^d, with overflow reported as OverflowError.
std::uint64_t contractor_entries(std::size_t d, std::size_t order);

// (d!)^(N-1), the term count of the naive engine for even N.
std::uint64_t naive_term_count(std::size_t d, std::size_t order);

template <Scalar T>
T hdet_naive(const Hypermatrix<T>& a);

template <Scalar T>
T hdet_levicivita(const Hypermatrix<T>& a, const Budget& budget = {});

// Same, reusing a precomputed Levi-Civita power for (d, N).
template <Scalar T>
T hdet_levicivita(const Hypermatrix<T>& a, const SparseTensor<T>& epsilon_power);

// Scatters each nonzero of the Levi-Civita power through the duplication
// matrix: D has a single 1 per row, so a nonzero with axis coordinates
// (r_1..r_d) adds sign/d! to the cell (col(r_1), ..., col(r_d)). Signs are
// accumulated as integers and divided once, so cells are exact multiples
// of 1/d! in every backend.
template <Scalar T>
Contractor<T> build_contractor(std::size_t d, std::size_t order, const Budget& budget = {});

// E * (h, ..., h), d copies of h. Contracts the last axis first; every call
// sums in the same fixed order.
template <Scalar T>
T contract_half_vector(const Contractor<T>& e, std::span<const T> h);

enum class SymmetryCheck { verify, assume };

// Half-vector path. With SymmetryCheck::assume the caller vouches that `a` is
// symmetric and only the monotone slots are read.
template <Scalar T>
T hdet_symmetric(const Hypermatrix<T>& a, const Contractor<T>& e,
                 double tol = default_symmetry_tolerance<T>(),
                 SymmetryCheck check = SymmetryCheck::verify);

enum class EngineChoice { automatic, naive, levicivita, symmetric };
enum class Engine { odd_order_short_circuit, naive, levicivita, symmetric_fast };

std::string_view engine_name(Engine e);
EngineChoice parse_engine_choice(std::string_view name);

// Supplies contractors to the dispatcher (e.g. a disk cache). May throw
// ResourceError when the contractor cannot be produced.
template <Scalar T>
class ContractorSource {
 public:
  virtual ~ContractorSource() = default;
  virtual std::shared_ptr<const Contractor<T>> contractor(std::size_t d, std::size_t order) = 0;
};

template <Scalar T>
struct HdetOptions {
  EngineChoice engine = EngineChoice::automatic;
  Budget budget;
  double tolerance = default_symmetry_tolerance<T>();
  ContractorSource<T>* contractors = nullptr;
};

template <Scalar T>
struct HdetResult {
  T value;
  Engine engine;
};

// Automatic policy: odd N (d >= 2) returns 0 at once; a symmetric input whose
// contractor fits the budget takes symmetric-fast; otherwise levicivita when
// the Levi-Civita power fits; otherwise naive.
template <Scalar T>
HdetResult<T> hdet(const Hypermatrix<T>& a, const HdetOptions<T>& options = {});

// ln of the ratio between the precomputed Levi-Civita pipeline cost d^(Nd)
// and the 2^(d(N-1)) d^(N-1) bound of the best earlier algorithm:
//   ((Nd - (N-1)) log2(d) - (Nd - d)) ln 2.
double complexity_ratio(std::size_t d, std::size_t order);

}  // namespace hyperdet
