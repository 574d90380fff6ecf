#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace liesig {

/// Number of worker threads: min(LIESIG_THREADS, hardware concurrency), at
/// least 1. LIESIG_THREADS=1 forces serial execution.
inline int thread_budget() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("LIESIG_THREADS")) {
    try {
      const int cap = std::stoi(env);
      if (cap >= 1 && cap < hw) return cap;
      if (cap >= 1) return cap;
    } catch (...) {
    }
  }
  return hw;
}

namespace detail {
inline bool& inside_parallel_region() {
  thread_local bool inside = false;
  return inside;
}
}  // namespace detail

/// Runs fn(i) for i in [0, count). Work items must write to disjoint state;
/// items are striped over threads so the result layout is deterministic.
/// Nested calls degrade to serial loops instead of oversubscribing.
template <typename Fn>
void parallel_for(std::size_t count, Fn&& fn) {
  const int workers = thread_budget();
  if (workers <= 1 || count <= 1 || detail::inside_parallel_region()) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const std::size_t n_threads = std::min<std::size_t>(workers, count);
  std::vector<std::thread> pool;
  pool.reserve(n_threads);
  for (std::size_t t = 0; t < n_threads; ++t) {
    pool.emplace_back([t, n_threads, count, &fn] {
      detail::inside_parallel_region() = true;
      for (std::size_t i = t; i < count; i += n_threads) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

}  // namespace liesig
