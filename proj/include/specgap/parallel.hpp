#pragma once

// Deterministic chunked parallelism. Work is split into a fixed number of
// chunks that does not depend on the thread count; every chunk writes its own
// slot and slots are reduced in chunk order, so results are bit-identical for
// any number of workers.

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <span>
#include <thread>
#include <vector>

namespace specgap {

namespace detail {
inline std::atomic<int>& thread_override() {
  static std::atomic<int> value{0};
  return value;
}
}  // namespace detail

/// Worker count: explicit setting, else SPECGAP_THREADS, else hardware.
inline int thread_count() {
  if (int t = detail::thread_override().load(); t > 0) return t;
  if (const char* env = std::getenv("SPECGAP_THREADS")) {
    int t = std::atoi(env);
    if (t > 0) return t;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

inline void set_thread_count(int n) { detail::thread_override().store(n > 0 ? n : 0); }

/// Calls fn(chunk) for chunk in [0, chunks). Exceptions from workers are
/// rethrown on the calling thread (the first one wins).
template <class Fn>
void for_each_chunk(std::size_t chunks, Fn&& fn) {
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(thread_count()), chunks);
  if (workers <= 1) {
    for (std::size_t c = 0; c < chunks; ++c) fn(c);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (;;) {
      const std::size_t c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        fn(c);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers - 1);
  for (std::size_t t = 1; t < workers; ++t) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

/// Pairwise (cascade) summation in a fixed tree order.
inline double pairwise_sum(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  if (xs.size() <= 8) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

/// Pairwise reduction of arbitrary partial results (matrices, accumulators).
template <class T, class Combine>
T pairwise_reduce(std::span<const T> parts, Combine combine) {
  if (parts.size() == 1) return parts[0];
  const std::size_t half = parts.size() / 2;
  return combine(pairwise_reduce(parts.first(half), combine), pairwise_reduce(parts.subspan(half), combine));
}

}  // namespace specgap
