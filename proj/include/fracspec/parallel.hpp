#ifndef FRACSPEC_PARALLEL_HPP
#define FRACSPEC_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace fracspec {

/// Worker count: hardware concurrency, capped by FRACSPEC_THREADS when set.
inline unsigned worker_count()
{
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("FRACSPEC_THREADS")) {
    try {
      const long cap = std::stol(env);
      if (cap >= 1)
        n = std::min<unsigned>(n, static_cast<unsigned>(cap));
    } catch (const std::exception&) {
      // unparsable value: keep the hardware default
    }
  }
  return n;
}

/// Runs body(i) for i in [0, count). Each index writes only its own output
/// slot, so callers combine results afterwards in index order.
template <typename Body>
void parallel_for(std::size_t count, Body&& body)
{
  const unsigned workers = std::min<std::size_t>(worker_count(), count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i)
      body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::jthread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure)
            failure = std::current_exception();
        }
      }
    });
  }
  pool.clear();
  if (failure)
    std::rethrow_exception(failure);
}

} // namespace fracspec

#endif // FRACSPEC_PARALLEL_HPP
