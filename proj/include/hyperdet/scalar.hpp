#pragma once

#include <gmpxx.h>

#include <cmath>
#include <complex>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

namespace hyperdet {

using Rational = mpq_class;
using Complex = std::complex<double>;

// The scalar backend is fixed per computation. Each backend maps to one C++ type,
// so mixing backends inside one computation does not compile.
enum class Backend : std::uint64_t { rational = 1, float64 = 2, complex128 = 3 };

std::string_view backend_name(Backend b);
Backend parse_backend(std::string_view name);

template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<Rational> {
  static constexpr Backend backend = Backend::rational;
  static constexpr bool exact = true;
  static Rational from_int(long long v) { return Rational(static_cast<long>(v)); }
  static Rational ratio(long long p, long long q) {
    Rational r(static_cast<long>(p), static_cast<long>(q));
    r.canonicalize();
    return r;
  }
  static bool is_zero(const Rational& v) { return sgn(v) == 0; }
  static double distance(const Rational& a, const Rational& b) {
    Rational diff = a - b;
    return std::fabs(diff.get_d());
  }
  static bool is_finite(const Rational&) { return true; }
};

template <>
struct ScalarTraits<double> {
  static constexpr Backend backend = Backend::float64;
  static constexpr bool exact = false;
  static double from_int(long long v) { return static_cast<double>(v); }
  static double ratio(long long p, long long q) {
    return static_cast<double>(p) / static_cast<double>(q);
  }
  static bool is_zero(double v) { return v == 0.0; }
  static double distance(double a, double b) { return std::fabs(a - b); }
  static bool is_finite(double v) { return std::isfinite(v); }
};

template <>
struct ScalarTraits<Complex> {
  static constexpr Backend backend = Backend::complex128;
  static constexpr bool exact = false;
  static Complex from_int(long long v) { return {static_cast<double>(v), 0.0}; }
  static Complex ratio(long long p, long long q) {
    return {static_cast<double>(p) / static_cast<double>(q), 0.0};
  }
  static bool is_zero(const Complex& v) { return v == Complex{}; }
  static double distance(const Complex& a, const Complex& b) { return std::abs(a - b); }
  static bool is_finite(const Complex& v) {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  }
};

template <class T>
concept Scalar = requires { ScalarTraits<T>::backend; };

// Rationals print as "p/q" (or "p" when q = 1); floats with 17 significant digits;
// complex values as "(re, im)" with 17 significant digits each.
std::string format_scalar(const Rational& v);
std::string format_scalar(double v);
std::string format_scalar(const Complex& v);

// Parses "p", "-p" or "p/q" (q != 0); the result is canonicalized.
Rational parse_rational(std::string_view text);

}  // namespace hyperdet
