#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "dona/transport.hpp"

namespace dona::cli {

// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kFindings = 1;
inline constexpr int kInputError = 2;
inline constexpr int kInfeasible = 3;

// Entry point for the `dona` executable; streams are injectable for tests.
int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err);

// Aligned plain-text rendering of a display payload.
std::string format_display(const Display& display);

}  // namespace dona::cli
