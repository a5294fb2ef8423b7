// Chunked parallel map over an index range.  Each body call writes only its
// own index, so results are deterministic regardless of thread scheduling.
#pragma once

#include <cstddef>
#include <future>
#include <thread>
#include <vector>

namespace ringtrap::detail {

template <class Body>
void parallel_for(std::size_t n, Body&& body, std::size_t min_per_thread = 64) {
  const std::size_t hw = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  const std::size_t threads = std::min(hw, n / std::max<std::size_t>(1, min_per_thread));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const std::size_t chunk = (n + threads - 1) / threads;
  std::vector<std::future<void>> futures;
  futures.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    const std::size_t lo = t * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    if (lo >= hi) break;
    futures.push_back(std::async(std::launch::async, [&body, lo, hi] {
      for (std::size_t i = lo; i < hi; ++i) body(i);
    }));
  }
  for (auto& f : futures) f.get();
}

}  // namespace ringtrap::detail
