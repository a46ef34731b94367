#pragma once

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <string_view>
#include <thread>
#include <vector>

namespace volpol {

using Rng = std::mt19937_64;

/// Worker count from VOLPOL_WORKERS, falling back to all available cores.
unsigned defaultWorkerCount();

/// Resolves a requested worker count; 0 means defaultWorkerCount().
inline unsigned resolveWorkers(unsigned requested) {
  return requested == 0 ? defaultWorkerCount() : requested;
}

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Derives an independent stream seed from a root seed and coordinates.
/// Depends only on the arguments, never on execution order.
constexpr std::uint64_t deriveSeed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
  return mix64(mix64(mix64(seed) ^ a) ^ (b * 0xd6e8feb86659fd93ULL));
}

/// FNV-1a; used to fold labels into seeds and config digests.
constexpr std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace detail {
bool& insideParallelRegion();
}

/// Runs fn(i) for i in [0, n) on up to `workers` threads. Nested calls run
/// inline on the calling worker. The first exception thrown is rethrown.
template <typename Fn>
void parallelFor(std::size_t n, unsigned workers, Fn&& fn) {
  workers = resolveWorkers(workers);
  if (n == 0) return;
  if (workers <= 1 || n == 1 || detail::insideParallelRegion()) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const auto threads = static_cast<std::size_t>(workers) < n ? workers : static_cast<unsigned>(n);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto body = [&] {
    detail::insideParallelRegion() = true;
    for (;;) {
      const std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
      if (i >= n) break;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(n);
      }
    }
    detail::insideParallelRegion() = false;
  };
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(body);
  pool.clear();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace volpol
