#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace loopsim {

/// Run fn(i) for every i in [0, count) on up to `workers` threads, partitioned
/// by index (thread w handles i == w mod workers). Callers store results by
/// index, which makes outputs independent of thread scheduling and of the
/// worker count. The first exception thrown by any index is rethrown after all
/// threads join.
template <typename Fn>
void parallel_indices(std::size_t count, int workers, Fn&& fn) {
  if (count == 0) return;
  const int threads = static_cast<int>(
      std::clamp<long long>(workers, 1, static_cast<long long>(std::min<std::size_t>(count, 256))));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(threads));
  std::exception_ptr first_error;
  std::mutex error_mutex;
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = static_cast<std::size_t>(w); i < count;
             i += static_cast<std::size_t>(threads))
          fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace loopsim
