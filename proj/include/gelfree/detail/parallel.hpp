#pragma once

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

// Work distribution for replicate sweeps and grid scans.  The GELFREE_THREADS
// environment variable caps the worker count; results must be written to
// per-index slots so the outcome is independent of scheduling.

namespace gelfree::detail {

inline unsigned thread_budget() {
  unsigned budget = std::thread::hardware_concurrency();
  if (budget == 0) budget = 1;
  if (const char* env = std::getenv("GELFREE_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1)
      budget = std::min(budget, static_cast<unsigned>(std::min(v, 1024L)));
  }
  return budget;
}

// Runs fn(0..n-1) across the thread budget.  If any calls throw, the
// lowest-index exception is rethrown, so failures are deterministic too.
inline void parallel_for(std::size_t n,
                         const std::function<void(std::size_t)>& fn) {
  const std::size_t budget =
      std::min<std::size_t>(thread_budget(), n);
  if (budget <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  std::vector<std::thread> pool;
  pool.reserve(budget);
  for (std::size_t w = 0; w < budget; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  for (const std::exception_ptr& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace gelfree::detail
