#include "eqloc/format.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace eqloc::fmt {

std::string fixed3(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", value);
  std::string out(buf);
  if (out == "-0.000") out = "0.000";
  return out;
}

std::string shortest(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) return fixed3(value);
  return std::string(buf, ptr);
}

}  // namespace eqloc::fmt
