#pragma once

#include <cstddef>
#include <thread>
#include <vector>

namespace piclab {

// Worker cap for the embarrassingly-parallel loops (exhaustive function
// enumeration and the like). PICLAB_THREADS overrides hardware concurrency.
unsigned worker_count();

// Runs fn(begin, end) over a partition of [0, n) into contiguous chunks, one
// per worker. Callers keep determinism by writing to disjoint slots or by
// reducing per-chunk results in chunk order.
template <typename Fn>
void parallel_chunks(std::size_t n, Fn&& fn) {
  const unsigned workers = worker_count();
  if (n == 0) return;
  if (workers <= 1 || n < 2 * workers) {
    fn(std::size_t{0}, n);
    return;
  }
  const std::size_t chunk = (n + workers - 1) / workers;
  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t begin = w * chunk;
    if (begin >= n) break;
    const std::size_t end = std::min(n, begin + chunk);
    threads.emplace_back([&fn, begin, end] { fn(begin, end); });
  }
  for (auto& t : threads) t.join();
}

}  // namespace piclab
