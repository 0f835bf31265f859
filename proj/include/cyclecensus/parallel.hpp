#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace cyclecensus {

inline unsigned resolve_threads(unsigned requested) {
  if (requested != 0) return requested;
  return std::max(1U, std::thread::hardware_concurrency());
}

/// Runs work(block, partial) for every block in [0, block_count), each worker
/// accumulating into its own Partial, then folds partials with +=.
/// Partial addition must be commutative and associative.
template <class Partial, class MakePartial, class Work>
Partial parallel_reduce_blocks(std::uint64_t block_count, unsigned threads, MakePartial make_partial, Work work) {
  threads = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(threads), std::max<std::uint64_t>(block_count, 1)));
  if (threads <= 1) {
    Partial total = make_partial();
    for (std::uint64_t b = 0; b < block_count; ++b) work(b, total);
    return total;
  }
  std::vector<Partial> partials;
  partials.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) partials.push_back(make_partial());
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::uint64_t b = next++; b < block_count; b = next++) work(b, partials[t]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = block_count;
      }
    });
  }
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  Partial total = std::move(partials[0]);
  for (unsigned t = 1; t < threads; ++t) total += partials[t];
  return total;
}

}  // namespace cyclecensus
