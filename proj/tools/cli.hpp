// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <iosfwd>

namespace routenet::cli {

inline constexpr int kExitCheck = 1;
inline constexpr int kExitVerify = 2;
inline constexpr int kExitUsage = 64;
inline constexpr int kExitParse = 65;
inline constexpr int kExitNoInput = 66;
inline constexpr int kExitBudget = 75;

/** Runs one command line; `in` serves inputs named "-". */
int run(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err);

}  // namespace routenet::cli
