#pragma once

// Order-preserving parallel map over independent inputs. The worker count is
// min(inputs, hardware threads), capped by the HC3_THREADS environment
// variable when it holds a positive integer.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

namespace hc3 {

inline std::size_t thread_budget() {
  std::size_t n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HC3_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min(n, static_cast<std::size_t>(cap));
  }
  return n;
}

/// results[i] = fn(inputs[i]). `on_done` (if set) is called under a lock
/// after each item with the number finished so far. The first exception
/// thrown by any item is rethrown after all workers stop.
template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& inputs, Fn fn,
                  const std::function<void(std::size_t)>& on_done = {}) {
  using Out = std::invoke_result_t<Fn&, const In&>;
  std::vector<std::optional<Out>> slots(inputs.size());
  std::atomic<std::size_t> next{0};
  std::size_t finished = 0;
  std::exception_ptr failure;
  std::mutex mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= inputs.size()) return;
      {
        std::lock_guard lock(mutex);
        if (failure) return;
      }
      try {
        slots[i].emplace(fn(inputs[i]));
        std::lock_guard lock(mutex);
        ++finished;
        if (on_done) on_done(finished);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!failure) failure = std::current_exception();
        return;
      }
    }
  };

  const std::size_t workers = std::min(thread_budget(), inputs.size());
  if (workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<Out> out;
  out.reserve(inputs.size());
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace hc3
