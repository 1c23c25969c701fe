#pragma once

#include <string>
#include <string_view>

namespace spfit {

/// Parses a decimal literal or a power of two written as "2^k" / "2^-k"
/// (optionally signed). Throws ConfigurationError on anything else.
double parse_number(std::string_view text);

/// Exact powers of two print as "2^k"; everything else with 17 significant
/// digits. parse_number(format_number(x)) == x.
std::string format_number(double x);

}  // namespace spfit
