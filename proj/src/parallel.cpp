#include "frozenperc/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace frozenperc {

unsigned effective_threads(unsigned requested, std::size_t count) {
  unsigned n = requested == 0 ? std::max(1u, std::thread::hardware_concurrency()) : requested;
  if (count < n) n = static_cast<unsigned>(std::max<std::size_t>(1, count));
  return n;
}

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t, unsigned)>& task) {
  const unsigned n = effective_threads(threads, count);
  if (n <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i, 0);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  const auto worker = [&](unsigned id) {
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= count || failed.load(std::memory_order_relaxed)) return;
      try {
        task(i, id);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        failed = true;
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(n);
  for (unsigned id = 0; id < n; ++id) pool.emplace_back(worker, id);
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace frozenperc
