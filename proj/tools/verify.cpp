#include "verify.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <ostream>
#include <sstream>

#include "document.hpp"
#include "hyperdet/engines.hpp"
#include "hyperdet/levicivita.hpp"
#include "hyperdet/vectorize.hpp"
#include "sampling.hpp"

namespace hyperdet::cli {

namespace {

using sampling::Rng;

std::string label(const std::string& name, std::size_t d, std::size_t order) {
  return name + " [d=" + std::to_string(d) + ", N=" + std::to_string(order) + "]";
}

// Runs `check` on `trials` inputs from `make`; stops at the first failure.
template <class Make, class Check>
PropertyOutcome property(std::string name, std::size_t trials, Make make, Check check) {
  PropertyOutcome out;
  out.name = std::move(name);
  for (std::size_t t = 0; t < trials; ++t) {
    auto input = make();
    ++out.cases;
    std::string detail;
    if (!check(input, detail)) {
      out.passed = false;
      out.detail = detail;
      out.counterexample = serialize_document(to_document(input));
      break;
    }
  }
  return out;
}

Rational leibniz_det(const Hypermatrix<Rational>& m) {
  const std::size_t n = m.side();
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), 1);
  Rational sum = 0;
  do {
    Rational term = permutation_sign(p);
    for (std::size_t i = 0; i < n; ++i) term *= m({i + 1, p[i]});
    sum += term;
  } while (std::next_permutation(p.begin(), p.end()));
  return sum;
}

Permutation random_permutation(Rng& rng, std::size_t n) {
  Permutation p(n);
  std::iota(p.begin(), p.end(), 1);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

bool fits_levicivita(std::size_t d, std::size_t order) {
  try {
    return epsilon_power_nnz(d, order) <= 2'000'000;
  } catch (const OverflowError&) {
    return false;
  }
}

bool fits_naive(std::size_t d, std::size_t order) {
  try {
    return naive_term_count(d, order) <= 2'000'000;
  } catch (const OverflowError&) {
    return false;
  }
}

}  // namespace

std::vector<std::pair<std::size_t, std::size_t>> parse_sizes(const std::string& text) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto x = item.find('x');
    char* end = nullptr;
    if (x == std::string::npos) throw ParseError("size '" + item + "' is not of the form DxN");
    const std::string ds = item.substr(0, x), ns = item.substr(x + 1);
    const unsigned long d = std::strtoul(ds.c_str(), &end, 10);
    if (ds.empty() || *end != '\0' || d < 1) throw ParseError("bad side in size '" + item + "'");
    const unsigned long n = std::strtoul(ns.c_str(), &end, 10);
    if (ns.empty() || *end != '\0' || n < 1) throw ParseError("bad order in size '" + item + "'");
    out.emplace_back(d, n);
  }
  if (out.empty()) throw ParseError("no sizes given");
  return out;
}

std::vector<PropertyOutcome> run_verify(const VerifyConfig& cfg) {
  std::vector<PropertyOutcome> outcomes;
  Rng rng(cfg.seed);
  const std::size_t trials = cfg.trials;

  for (const auto& [d, order] : cfg.sizes) {
    if (!fits_naive(d, order)) {
      PropertyOutcome skip;
      skip.name = label("skipped: naive oracle too large", d, order);
      outcomes.push_back(skip);
      continue;
    }
    auto random_a = [&, d = d, order = order] {
      return sampling::random_integer<Rational>(rng, d, order);
    };
    auto random_sym = [&, d = d, order = order] {
      return sampling::random_symmetric_integer<Rational>(rng, d, order);
    };

    const bool small = fits_levicivita(d, order);
    const auto contractor =
        small ? build_contractor<Rational>(d, order) : Contractor<Rational>{};
    if (small) {
      outcomes.push_back(property(
          label("levicivita equals naive", d, order), trials, random_a,
          [&](const Hypermatrix<Rational>& a, std::string& detail) {
            Rational lc = hdet_levicivita(a);
            if (cfg.inject_fault) lc += 1;
            const Rational nv = hdet_naive(a);
            detail = "levicivita " + format_scalar(lc) + " vs naive " + format_scalar(nv);
            return lc == nv;
          }));

      outcomes.push_back(property(
          label("symmetric-fast equals naive", d, order), trials, random_sym,
          [&](const Hypermatrix<Rational>& a, std::string& detail) {
            const Rational sf = hdet_symmetric(a, contractor);
            const Rational nv = hdet_naive(a);
            detail = "symmetric-fast " + format_scalar(sf) + " vs naive " + format_scalar(nv);
            return sf == nv;
          }));
    }

    if (order % 2 == 1 && d >= 2) {
      outcomes.push_back(property(
          label("odd order vanishes in every engine", d, order), trials, random_sym,
          [&](const Hypermatrix<Rational>& a, std::string& detail) {
            const Rational nv = hdet_naive(a);
            Rational lc = 0, sf = 0;
            if (small) {
              lc = hdet_levicivita(a);
              sf = hdet_symmetric(a, contractor);
            }
            detail = "naive " + format_scalar(nv) + ", levicivita " + format_scalar(lc) +
                     ", symmetric-fast " + format_scalar(sf);
            return nv == 0 && lc == 0 && sf == 0;
          }));
    }

    const auto l = elimination_matrix<Rational>(d, order);
    const auto dup = duplication_matrix<Rational>(d, order);
    outcomes.push_back(property(
        label("elimination and duplication identities", d, order), trials, random_sym,
        [&](const Hypermatrix<Rational>& a, std::string& detail) {
          const auto full = hvec(a);
          const auto half = hvec_1N(a);
          const bool lok = sparse_matvec(l, std::span<const Rational>(full)) == half;
          const bool dok = sparse_matvec(dup, std::span<const Rational>(half)) == full;
          detail = std::string("L hvec ") + (lok ? "ok" : "wrong") + ", D hvec_1N " +
                   (dok ? "ok" : "wrong");
          return lok && dok;
        }));

    outcomes.push_back(property(
        label("degree homogeneity", d, order), trials, random_a,
        [&](const Hypermatrix<Rational>& a, std::string& detail) {
          Rational c(static_cast<long>(sampling::uniform_int(rng, -4, 4)),
                           static_cast<long>(sampling::uniform_int(rng, 1, 3)));
          c.canonicalize();
          Rational cd = 1;
          for (std::size_t k = 0; k < d; ++k) cd *= c;
          const Rational lhs = hdet_naive(c * a);
          const Rational rhs = cd * hdet_naive(a);
          detail = "c=" + format_scalar(c) + ": " + format_scalar(lhs) + " vs " + format_scalar(rhs);
          return lhs == rhs;
        }));

    outcomes.push_back(property(
        label("transpose invariance", d, order), trials, random_a,
        [&](const Hypermatrix<Rational>& a, std::string& detail) {
          const auto pi = random_permutation(rng, order);
          const Rational lhs = hdet_naive(transpose(a, pi));
          const Rational rhs = hdet_naive(a);
          detail = format_scalar(lhs) + " vs " + format_scalar(rhs);
          return lhs == rhs;
        }));

    outcomes.push_back(property(
        label("float64 agrees with rational", d, order), trials, random_a,
        [&](const Hypermatrix<Rational>& a, std::string& detail) {
          std::vector<double> v;
          for (const auto& x : a.values()) v.push_back(x.get_d());
          const Hypermatrix<double> af(a.shape(), v);
          const double got = hdet(af).value;
          const double want = hdet_naive(a).get_d();
          detail = format_scalar(got) + " vs " + format_scalar(want);
          return std::fabs(got - want) <= 1e-10 * std::max(1.0, std::fabs(want));
        }));
  }

  for (std::size_t d = 1; d <= 4; ++d) {
    outcomes.push_back(property(
        label("order-2 hdet equals the determinant", d, 2), trials,
        [&, d = d] {
          auto m = Hypermatrix<Rational>::cubical(d, 2);
          for (std::size_t k = 0; k < m.size(); ++k) {
            m[k] = Rational(static_cast<long>(sampling::uniform_int(rng, -9, 9)),
                            static_cast<long>(sampling::uniform_int(rng, 1, 5)));
            m[k].canonicalize();
          }
          return m;
        },
        [&](const Hypermatrix<Rational>& m, std::string& detail) {
          const Rational lhs = hdet_naive(m);
          const Rational rhs = leibniz_det(m);
          detail = format_scalar(lhs) + " vs " + format_scalar(rhs);
          return lhs == rhs;
        }));
  }
  return outcomes;
}

bool print_verify(std::ostream& out, const std::vector<PropertyOutcome>& outcomes) {
  bool all = true;
  for (const auto& o : outcomes) {
    if (o.name.rfind("skipped", 0) == 0) {
      out << "SKIP " << o.name << '\n';
      continue;
    }
    out << (o.passed ? "PASS " : "FAIL ") << o.name << " (" << o.cases << " cases)\n";
    if (!o.passed) {
      all = false;
      out << "  " << o.detail << '\n';
      out << "  counterexample: " << o.counterexample << '\n';
    }
  }
  return all;
}

}  // namespace hyperdet::cli
