#ifndef SPARSEMIX_PARALLEL_HPP_
#define SPARSEMIX_PARALLEL_HPP_

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace sparsemix {

/*
 * Evaluates fn(trial, scratch) for trials [first, first + count) on up to
 * `threads` workers and returns the results indexed by trial offset.
 *
 * Each result depends only on its trial index, so the output is identical for
 * every worker count. `scratch` is a per-worker buffer the callee may resize.
 */
template <class Fn>
std::vector<double> run_trials(std::uint64_t first, std::uint64_t count, unsigned threads, Fn&& fn) {
  std::vector<double> results(count);
  const unsigned workers =
      static_cast<unsigned>(std::max<std::uint64_t>(1, std::min<std::uint64_t>(threads, count)));
  if (workers <= 1) {
    std::vector<double> scratch;
    for (std::uint64_t i = 0; i < count; ++i) {
      results[i] = fn(first + i, scratch);
    }
    return results;
  }

  constexpr std::uint64_t kChunk = 8;
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    std::vector<double> scratch;
    try {
      for (;;) {
        const std::uint64_t begin = next.fetch_add(kChunk);
        if (begin >= count) {
          break;
        }
        const std::uint64_t end = std::min(count, begin + kChunk);
        for (std::uint64_t i = begin; i < end; ++i) {
          results[i] = fn(first + i, scratch);
        }
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) {
        failure = std::current_exception();
      }
      next.store(count);
    }
  };

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back(worker);
  }
  for (auto& t : pool) {
    t.join();
  }
  if (failure) {
    std::rethrow_exception(failure);
  }
  return results;
}

}  // namespace sparsemix

#endif  // SPARSEMIX_PARALLEL_HPP_
