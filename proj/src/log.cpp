#include "eqloc/log.hpp"

#include <atomic>
#include <cstdlib>
#include <iostream>
#include <string>

namespace eqloc::log {

namespace {

int initial_verbosity() {
  const char* env = std::getenv("EQLOC_VERBOSITY");
  if (env == nullptr || *env == '\0') return 1;
  return std::atoi(env);
}

std::atomic<int>& level() {
  static std::atomic<int> value{initial_verbosity()};
  return value;
}

}  // namespace

int verbosity() { return level().load(); }
void set_verbosity(int lvl) { level().store(lvl); }

void warn(std::string_view message) {
  if (verbosity() >= 1) std::cerr << "warning: " << message << '\n';
}

void info(std::string_view message) {
  if (verbosity() >= 2) std::cerr << "info: " << message << '\n';
}

}  // namespace eqloc::log
