#pragma once

#include <algorithm>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <thread>
#include <vector>

namespace floquet {

// Worker count for parallel_for. Defaults to FLOQUET_THREADS or 1.
int thread_count();
void set_thread_count(int n);

// splitmix64 mix of (seed, block); every sample block gets its own stream.
std::uint64_t block_seed(std::uint64_t seed, std::uint64_t block);

inline std::mt19937_64 block_rng(std::uint64_t seed, std::uint64_t block) {
  return std::mt19937_64(block_seed(seed, block));
}

// Runs f(i) for i in [0, n). Work items must write only to their own slots, so the
// result does not depend on the worker count.
template <class F>
void parallel_for(int n, F&& f) {
  const int workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) f(i);
    return;
  }
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      for (int i = w; i < n; i += workers) {
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace floquet
