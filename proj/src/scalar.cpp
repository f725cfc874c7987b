#include "hyperdet/scalar.hpp"

#include <cstdio>
#include <string>

#include "hyperdet/checked.hpp"
#include "hyperdet/error.hpp"

namespace hyperdet {

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::rational:
      return "rational";
    case Backend::float64:
      return "float64";
    case Backend::complex128:
      return "complex128";
  }
  return "unknown";
}

Backend parse_backend(std::string_view name) {
  if (name == "rational") return Backend::rational;
  if (name == "float64") return Backend::float64;
  if (name == "complex128") return Backend::complex128;
  throw ArgumentError("unknown scalar backend '" + std::string(name) + "'");
}

std::string format_scalar(const Rational& v) {
  if (v.get_den() == 1) return v.get_num().get_str();
  return v.get_num().get_str() + "/" + v.get_den().get_str();
}

std::string format_scalar(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string format_scalar(const Complex& v) {
  return "(" + format_scalar(v.real()) + ", " + format_scalar(v.imag()) + ")";
}

Rational parse_rational(std::string_view text) {
  auto valid_integer = [](std::string_view s) {
    if (!s.empty() && (s.front() == '-' || s.front() == '+')) s.remove_prefix(1);
    if (s.empty()) return false;
    for (char c : s) {
      if (c < '0' || c > '9') return false;
    }
    return true;
  };
  const auto slash = text.find('/');
  std::string_view num = text.substr(0, slash);
  std::string_view den = slash == std::string_view::npos ? std::string_view("1")
                                                          : text.substr(slash + 1);
  if (!valid_integer(num) || !valid_integer(den) || den.front() == '-' || den.front() == '+') {
    throw ParseError("malformed rational '" + std::string(text) + "'");
  }
  if (num.front() == '+') num.remove_prefix(1);
  mpz_class n(std::string(num), 10);
  mpz_class d(std::string(den), 10);
  if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::uint64_t binomial(std::uint64_t a, std::uint64_t b) {
  if (a < b) return 0;
  if (b > a - b) b = a - b;
  // r * (a - b + k) / k stays integral at every step; 128-bit intermediate
  // avoids spurious overflow before the division.
  unsigned __int128 r = 1;
  for (std::uint64_t k = 1; k <= b; ++k) {
    r = r * (a - b + k) / k;
    if (r > UINT64_MAX) throw OverflowError("binomial coefficient exceeds 64-bit range");
  }
  return static_cast<std::uint64_t>(r);
}

std::uint64_t factorial(std::uint64_t n) {
  std::uint64_t r = 1;
  for (std::uint64_t k = 2; k <= n; ++k) r = checked_mul(r, k, "factorial");
  return r;
}

}  // namespace hyperdet
