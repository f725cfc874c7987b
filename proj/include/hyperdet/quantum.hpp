#pragma once

// n-qudit pure states and their hypermatrix form. A state
//   |psi> = sum psi_{i_1..i_n} |i_1 ... i_n>,  i_k in {0, ..., d-1}
// maps to the order-n, side-d hypermatrix with entry (i_1+1, ..., i_n+1) = psi_{i_1..i_n}.
// Amplitudes are stored in the same psi order as hypermatrix data, so the
// map is a relabelling of the buffer.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "hyperdet/core.hpp"
#include "hyperdet/engines.hpp"

namespace hyperdet::quantum {

inline constexpr double kNormTolerance = 1e-9;

class QuditState {
 public:
  // ArgumentError on d < 2, n < 2 or a length other than d^n;
  // NormalizationError when |sum |psi|^2 - 1| > kNormTolerance.
  QuditState(std::size_t d, std::size_t n, std::vector<Complex> amplitudes);

  std::size_t local_dimension() const noexcept { return d_; }
  std::size_t particles() const noexcept { return n_; }
  const std::vector<Complex>& amplitudes() const noexcept { return amp_; }

  // Amplitude for the 0-based basis label (i_1, ..., i_n).
  const Complex& amplitude(const std::vector<std::size_t>& label) const;

  bool operator==(const QuditState&) const = default;

 private:
  std::size_t d_;
  std::size_t n_;
  std::vector<Complex> amp_;
};

double norm(const std::vector<Complex>& amplitudes);

Hypermatrix<Complex> state_to_hypermatrix(const QuditState& s);
QuditState hypermatrix_to_state(const Hypermatrix<Complex>& h);

// A state is a boson exactly when its hypermatrix is symmetric.
bool is_boson(const QuditState& s, double tol = kDefaultSymmetryTolerance);

struct ConcurrenceResult {
  double value = 0.0;
  Engine engine = Engine::naive;
  bool boson = false;
};

// 2 |hdet(psi-hat)| for an even number of particles. DomainError for odd n:
// hdet vanishes identically there, so the measure carries no information.
ConcurrenceResult concurrence(const QuditState& s, const HdetOptions<Complex>& options = {});

// State document: {"d": int, "n": int, "amplitudes": [[re, im], ...]} with
// d^n amplitudes in psi order of the 1-shifted basis label.
QuditState parse_state_document(std::string_view json_text);
QuditState read_state_document(const std::filesystem::path& path);
std::string write_state_document(const QuditState& s);

// Common states.
QuditState basis_state(std::size_t d, const std::vector<std::size_t>& label);
QuditState bell_state();
QuditState ghz_state(std::size_t n, std::size_t d = 2);

}  // namespace hyperdet::quantum
