#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace eqloc {

/// Runs body(begin, end, worker) over contiguous slices of [0, n). Slices are
/// fixed by n and workers alone; callers merge per-slice results in slice
/// order to stay independent of scheduling.
template <typename Body>
void parallel_slices(std::size_t n, unsigned workers, Body&& body) {
  workers = std::max(1u, workers);
  if (workers == 1 || n < 2) {
    body(std::size_t{0}, n, 0u);
    return;
  }
  const std::size_t slices = std::min<std::size_t>(workers, n);
  std::vector<std::thread> threads;
  std::vector<std::exception_ptr> errors(slices);
  threads.reserve(slices);
  for (std::size_t w = 0; w < slices; ++w) {
    const std::size_t begin = n * w / slices;
    const std::size_t end = n * (w + 1) / slices;
    threads.emplace_back([&, begin, end, w] {
      try {
        body(begin, end, static_cast<unsigned>(w));
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace eqloc
