#pragma once

#include <string_view>

namespace eqloc::log {

/// 0 = silent, 1 = warnings (default), 2 = info. Read once from EQLOC_VERBOSITY.
int verbosity();
void set_verbosity(int level);

void warn(std::string_view message);
void info(std::string_view message);

}  // namespace eqloc::log
