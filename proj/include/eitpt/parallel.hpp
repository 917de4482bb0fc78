#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace eitpt {

// Worker count for grid-parallel maps; EITPT_THREADS caps it.
inline int worker_count() {
  int hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("EITPT_THREADS")) {
    int v = std::atoi(env);
    if (v >= 1) return std::min(v, hw);
  }
  return hw;
}

// Index-parallel loop with deterministic output: the body writes to
// preallocated slots, so scheduling never affects results.
inline void parallel_for(size_t n, const std::function<void(size_t)>& body) {
  int workers = worker_count();
  if (workers <= 1 || n < 16) {
    for (size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<size_t> next{0};
  auto run = [&] {
    for (size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < workers; ++w) pool.emplace_back(run);
  run();
  for (auto& t : pool) t.join();
}

}  // namespace eitpt
