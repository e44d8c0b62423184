#pragma once

#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace horo::harness {

// Runs fn(i) for i in [0, count) across `threads` workers and returns the
// results in index order. Each unit of work must depend only on its index
// (seeds are derived per index upstream), so the output is byte-for-byte
// identical for every thread count, including 1.
template <class T, class Fn>
std::vector<T> ordered_parallel_map(int count, int threads, Fn&& fn) {
  std::vector<T> results(static_cast<std::size_t>(count));
  if (count == 0) return results;
  if (threads < 1) threads = 1;
  threads = std::min(threads, count);

  std::atomic<int> next{0};
  std::mutex error_mutex;
  std::exception_ptr error;

  auto worker = [&]() {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= count) return;
      try {
        results[static_cast<std::size_t>(i)] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };

  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);
  return results;
}

}  // namespace horo::harness
