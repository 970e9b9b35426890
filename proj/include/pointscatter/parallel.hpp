#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace pointscatter {

/// Worker cap: POINTSCATTER_THREADS if set to a positive integer, otherwise
/// the hardware concurrency (at least 1).
inline unsigned default_thread_count() {
  if (const char *env = std::getenv("POINTSCATTER_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0)
        return static_cast<unsigned>(v);
    } catch (const std::exception &) {
    }
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates fn(i) for i in [0, n) on up to `threads` workers. Each worker
/// owns a contiguous block of indices and writes only its own slots, so the
/// result does not depend on the thread count. The first exception by index
/// is rethrown (blocks are ordered, so the lowest failing worker wins).
template <typename Fn>
auto parallel_map(std::size_t n, Fn &&fn, unsigned threads = 0)
    -> std::vector<decltype(fn(std::size_t{}))> {
  using R = decltype(fn(std::size_t{}));
  std::vector<R> out(n);
  if (n == 0)
    return out;
  if (threads == 0)
    threads = default_thread_count();
  const std::size_t workers = std::min<std::size_t>(threads, n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      out[i] = fn(i);
    return out;
  }

  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
      const std::size_t lo = w * chunk;
      const std::size_t hi = std::min(n, lo + chunk);
      pool.emplace_back([&, w, lo, hi] {
        for (std::size_t i = lo; i < hi; ++i) {
          try {
            out[i] = fn(i);
          } catch (...) {
            errors[w] = std::current_exception();
            return;
          }
        }
      });
    }
  }
  for (std::size_t w = 0; w < workers; ++w)
    if (errors[w])
      std::rethrow_exception(errors[w]);
  return out;
}

} // namespace pointscatter
