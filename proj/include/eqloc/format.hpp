#pragma once

#include <string>

namespace eqloc::fmt {

/// Fixed three decimals; negative zero prints as 0.000.
std::string fixed3(double value);

/// Shortest decimal text that parses back to the same double.
std::string shortest(double value);

}  // namespace eqloc::fmt
