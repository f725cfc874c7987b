#pragma once

// The `hyperdet` command line. Exit codes:
//   0  success
//   1  verify found a failing property
//   2  parse, usage or normalization error
//   3  shape, domain or symmetry error
//   4  resource budget exceeded
//   5  storage or cache error

#include <exception>
#include <iosfwd>

namespace hyperdet::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFailed = 1;
inline constexpr int kExitParse = 2;
inline constexpr int kExitShape = 3;
inline constexpr int kExitResource = 4;
inline constexpr int kExitStorage = 5;

int exit_code_for(const std::exception& e);

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace hyperdet::cli
