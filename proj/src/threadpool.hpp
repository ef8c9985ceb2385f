#pragma once

#include <atomic>
#include <exception>
#include <functional>
#include <limits>
#include <mutex>
#include <thread>
#include <vector>

namespace rtnsim {

inline int resolve_thread_count(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, n). Each index is claimed exactly once; callers keep
// results deterministic by writing only to slot i. If several workers throw,
// the exception from the lowest index wins, so failures are reproducible too.
inline void parallel_for_indexed(int n, int n_threads,
                                 const std::function<void(int)>& fn) {
  if (n <= 0) return;
  n_threads = std::min(resolve_thread_count(n_threads), n);
  if (n_threads <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }

  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;
  int error_index = std::numeric_limits<int>::max();

  const auto worker = [&] {
    for (;;) {
      const int i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (i < error_index) {
          error_index = i;
          error = std::current_exception();
        }
      }
    }
  };

  std::vector<std::thread> workers;
  workers.reserve(static_cast<std::size_t>(n_threads) - 1);
  for (int w = 1; w < n_threads; ++w) workers.emplace_back(worker);
  worker();
  for (std::thread& t : workers) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace rtnsim
