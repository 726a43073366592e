#pragma once
// Minimal worker-pool helper. COSETLAB_THREADS caps the worker count;
// work items must be independent and write to disjoint slots, which keeps
// results identical at any degree of concurrency.

#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace cosetlab {

inline std::size_t worker_count() {
  if (const char* env = std::getenv("COSETLAB_THREADS")) {
    const long v = std::atol(env);
    if (v >= 1) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

inline void parallel_for(std::size_t n,
                         const std::function<void(std::size_t)>& fn) {
  const std::size_t workers = std::min(worker_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t i = w; i < n; i += workers) fn(i);
    });
  for (auto& t : pool) t.join();
}

}  // namespace cosetlab
