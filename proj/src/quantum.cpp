#include "hyperdet/quantum.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "hyperdet/checked.hpp"

namespace hyperdet::quantum {

double norm(const std::vector<Complex>& amplitudes) {
  double sum = 0.0;
  for (const auto& a : amplitudes) sum += std::norm(a);
  return std::sqrt(sum);
}

QuditState::QuditState(std::size_t d, std::size_t n, std::vector<Complex> amplitudes)
    : d_(d), n_(n), amp_(std::move(amplitudes)) {
  if (d_ < 2) throw ArgumentError("qudit dimension must be >= 2");
  if (n_ < 2) throw ArgumentError("particle count must be >= 2");
  const std::uint64_t len = checked_pow(d_, n_, "state length");
  if (amp_.size() != len) {
    throw ArgumentError("state with d=" + std::to_string(d_) + ", n=" + std::to_string(n_) +
                        " needs " + std::to_string(len) + " amplitudes, got " +
                        std::to_string(amp_.size()));
  }
  for (const auto& a : amp_) {
    if (!ScalarTraits<Complex>::is_finite(a)) throw ArgumentError("non-finite amplitude");
  }
  const double nrm = norm(amp_);
  if (std::fabs(nrm * nrm - 1.0) > kNormTolerance) {
    throw NormalizationError("state is not normalized: norm is " + format_scalar(nrm), nrm);
  }
}

const Complex& QuditState::amplitude(const std::vector<std::size_t>& label) const {
  std::vector<std::size_t> one_based(label.size());
  for (std::size_t k = 0; k < label.size(); ++k) one_based[k] = label[k] + 1;
  return amp_[offset_of(MultiIndex(one_based), Shape::cubical(d_, n_))];
}

Hypermatrix<Complex> state_to_hypermatrix(const QuditState& s) {
  return Hypermatrix<Complex>(Shape::cubical(s.local_dimension(), s.particles()), s.amplitudes());
}

QuditState hypermatrix_to_state(const Hypermatrix<Complex>& h) {
  return QuditState(h.side(), h.order(), h.values());
}

bool is_boson(const QuditState& s, double tol) {
  return is_symmetric(state_to_hypermatrix(s), tol);
}

ConcurrenceResult concurrence(const QuditState& s, const HdetOptions<Complex>& options) {
  if (s.particles() % 2 != 0) {
    throw DomainError("concurrence needs an even number of particles; hdet vanishes "
                      "identically on odd-order hypermatrices (n=" +
                      std::to_string(s.particles()) + ")");
  }
  const auto h = state_to_hypermatrix(s);
  ConcurrenceResult out;
  out.boson = is_symmetric(h, options.tolerance);
  const auto r = hdet(h, options);
  out.value = 2.0 * std::abs(r.value);
  out.engine = r.engine;
  return out;
}

QuditState parse_state_document(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("state document: ") + e.what());
  }
  auto field = [&](const char* name) -> const nlohmann::json& {
    if (!doc.is_object() || !doc.contains(name)) {
      throw ParseError(std::string("state document: missing field '") + name + "'");
    }
    return doc.at(name);
  };
  const auto& jd = field("d");
  const auto& jn = field("n");
  const auto& ja = field("amplitudes");
  if (!jd.is_number_unsigned() || !jn.is_number_unsigned()) {
    throw ParseError("state document: 'd' and 'n' must be positive integers");
  }
  if (!ja.is_array()) throw ParseError("state document: 'amplitudes' must be a list");
  std::vector<Complex> amps;
  amps.reserve(ja.size());
  for (std::size_t k = 0; k < ja.size(); ++k) {
    const auto& e = ja[k];
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw ParseError("state document: amplitudes[" + std::to_string(k) +
                       "] must be a [real, imaginary] pair");
    }
    amps.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  try {
    return QuditState(jd.get<std::size_t>(), jn.get<std::size_t>(), std::move(amps));
  } catch (const ArgumentError& e) {
    throw ParseError(std::string("state document: ") + e.what());
  }
}

QuditState read_state_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open state document " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_state_document(buf.str());
}

std::string write_state_document(const QuditState& s) {
  nlohmann::json doc;
  doc["d"] = s.local_dimension();
  doc["n"] = s.particles();
  auto amps = nlohmann::json::array();
  for (const auto& a : s.amplitudes()) amps.push_back({a.real(), a.imag()});
  doc["amplitudes"] = std::move(amps);
  return doc.dump();
}

QuditState basis_state(std::size_t d, const std::vector<std::size_t>& label) {
  const std::size_t n = label.size();
  std::vector<Complex> amps(checked_pow(d, n, "state length"));
  std::size_t pos = 0, stride = 1;
  for (std::size_t k = 0; k < n; ++k) {
    if (label[k] >= d) throw ArgumentError("basis label component out of range");
    pos += label[k] * stride;
    stride *= d;
  }
  amps[pos] = 1.0;
  return QuditState(d, n, std::move(amps));
}

QuditState bell_state() {
  const double r = 1.0 / std::sqrt(2.0);
  return QuditState(2, 2, {r, 0.0, 0.0, r});
}

QuditState ghz_state(std::size_t n, std::size_t d) {
  const std::size_t len = checked_pow(d, n, "state length");
  std::vector<Complex> amps(len);
  const double r = 1.0 / std::sqrt(static_cast<double>(d));
  // (k, k, ..., k) sits at k * (1 + d + ... + d^(n-1)).
  const std::size_t step = (len - 1) / (d - 1);
  for (std::size_t k = 0; k < d; ++k) amps[k * step] = r;
  return QuditState(d, n, std::move(amps));
}

}  // namespace hyperdet::quantum
