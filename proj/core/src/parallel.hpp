#pragma once

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cstddef>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace phcausal::detail {

/// Worker count: PHCAUSAL_THREADS if set to a positive integer, else the
/// hardware concurrency.
inline std::size_t worker_limit() {
  if (const char* env = std::getenv("PHCAUSAL_THREADS")) {
    std::size_t v = 0;
    const auto [p, ec] = std::from_chars(env, env + std::strlen(env), v);
    if (ec == std::errc{} && *p == '\0' && v > 0) {
      return v;
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Runs fn(shard) for every shard in [0, count). Shards are claimed from an
/// atomic counter; callers write into per-shard slots and reduce in index
/// order, so results never depend on scheduling.
template <class Fn>
void for_each_shard(std::size_t count, Fn&& fn) {
  const std::size_t workers = std::min(worker_limit(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      fn(i);
    }
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            fn(i);
          } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) {
              failure = std::current_exception();
            }
          }
        }
      });
    }
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
}

}  // namespace phcausal::detail
