#include "spfit/numfmt.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

#include "spfit/errors.hpp"

namespace spfit {

namespace {

[[noreturn]] void bad(std::string_view text) {
  throw ConfigurationError("not a number: '" + std::string(text) + "'");
}

}  // namespace

double parse_number(std::string_view text) {
  std::string_view body = text;
  double sign = 1.0;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    if (body.front() == '-') sign = -1.0;
    body.remove_prefix(1);
  }
  if (body.starts_with("2^")) {
    body.remove_prefix(2);
    if (!body.empty() && body.front() == '+') body.remove_prefix(1);
    int k = 0;
    const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), k);
    if (ec != std::errc{} || ptr != body.data() + body.size() || body.empty()) bad(text);
    const double v = std::ldexp(1.0, k);
    if (v == 0.0 || std::isinf(v)) bad(text);
    return sign * v;
  }
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(body.data(), body.data() + body.size(), v);
  if (ec != std::errc{} || ptr != body.data() + body.size() || body.empty()) bad(text);
  if (!std::isfinite(v)) bad(text);
  return sign * v;
}

std::string format_number(double x) {
  if (std::isfinite(x) && x != 0.0) {
    int e = 0;
    const double mant = std::frexp(std::abs(x), &e);
    if (mant == 0.5) return (x < 0.0 ? "-2^" : "2^") + std::to_string(e - 1);
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace spfit
