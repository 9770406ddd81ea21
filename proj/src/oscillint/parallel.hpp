#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace oscillint {

/// Worker count: hardware concurrency capped by OSCILLINT_THREADS.
inline unsigned thread_count() {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("OSCILLINT_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
  }
  return n;
}

namespace detail {
inline thread_local bool in_parallel = false;
}

/// Runs body(i) for i in [0, n). Each index writes only its own slot, so
/// results do not depend on scheduling. Rethrows the lowest-index exception.
/// Calls made from inside a worker run serially.
template <class Body>
void parallel_for(std::size_t n, Body&& body) {
  const unsigned workers = detail::in_parallel ? 1u : std::min<std::size_t>(thread_count(), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(n);
  auto work = [&] {
    const bool outer = detail::in_parallel;
    detail::in_parallel = true;
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
    detail::in_parallel = outer;
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

}  // namespace oscillint
