#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace coarsecoh {

/// Runs fn(i) for i in [0, n) on up to `jobs` threads. Work is handed out in
/// contiguous chunks; fn must only write to slots it owns.
template <class Fn>
void parallelFor(std::size_t n, unsigned jobs, Fn &&fn) {
  if (n == 0) return;
  jobs = std::max(1u, jobs);
  if (jobs == 1 || n < 64) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t workers = std::min<std::size_t>(jobs, n);
  const std::size_t chunk = std::max<std::size_t>(16, n / (workers * 8));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex errorMutex;
  auto body = [&] {
    try {
      for (;;) {
        std::size_t begin = next.fetch_add(chunk);
        if (begin >= n) break;
        std::size_t end = std::min(n, begin + chunk);
        for (std::size_t i = begin; i < end; ++i) fn(i);
      }
    } catch (...) {
      std::lock_guard lock(errorMutex);
      if (!error) error = std::current_exception();
      next = n;
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(body);
  body();
  for (auto &t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

} // namespace coarsecoh
