#pragma once

#include <cstdint>
#include <string>

#include "hyperdet/error.hpp"

namespace hyperdet {

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b, const char* what) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) {
    throw OverflowError(std::string(what) + ": product exceeds 64-bit range");
  }
  return out;
}

inline std::uint64_t checked_add(std::uint64_t a, std::uint64_t b, const char* what) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) {
    throw OverflowError(std::string(what) + ": sum exceeds 64-bit range");
  }
  return out;
}

inline std::uint64_t checked_pow(std::uint64_t base, std::uint64_t exp, const char* what) {
  std::uint64_t out = 1;
  for (std::uint64_t k = 0; k < exp; ++k) out = checked_mul(out, base, what);
  return out;
}

// C(a, b) with C(a, b) = 0 for a < b. Exact; throws OverflowError instead of wrapping.
std::uint64_t binomial(std::uint64_t a, std::uint64_t b);

// n!, exact for n <= 20.
std::uint64_t factorial(std::uint64_t n);

}  // namespace hyperdet
