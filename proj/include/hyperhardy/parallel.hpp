#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <thread>
#include <type_traits>
#include <vector>

namespace hyperhardy {

/// out[i] = fn(i) for i < n, evaluated on a small thread pool.
/// Results keep index order; the lowest-index exception is rethrown.
template <class Fn>
auto parallel_map(std::size_t n, Fn&& fn, std::size_t workers = 0) {
  using T = std::invoke_result_t<Fn&, std::size_t>;
  std::vector<T> out(n);
  std::vector<std::exception_ptr> errors(n);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return out;
}

}  // namespace hyperhardy
