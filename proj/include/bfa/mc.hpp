#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace bfa {

struct MCEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;
};

struct MeanAcc {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t n = 0;

  void add(double x) {
    sum += x;
    sum_sq += x * x;
    ++n;
  }
  void merge(const MeanAcc& o) {
    sum += o.sum;
    sum_sq += o.sum_sq;
    n += o.n;
  }
  MCEstimate estimate(std::uint64_t seed, double offset = 0.0) const {
    MCEstimate e;
    e.n_samples = n;
    e.seed = seed;
    if (n == 0) return e;
    e.mean = sum / static_cast<double>(n) + offset;
    if (n >= 2) {
      const double var =
          (sum_sq - sum * sum / static_cast<double>(n)) /
          static_cast<double>(n - 1);
      e.std_error = std::sqrt(std::max(0.0, var) / static_cast<double>(n));
    }
    return e;
  }
};

// Runs fn(begin, end) over fixed-size chunks of [0, total) and returns the
// per-chunk partials in chunk order. Workers claim chunks dynamically, but
// because the chunk boundaries and the reduction order are fixed, results
// are bit-identical for any worker count.
template <class Partial, class Fn>
std::vector<Partial> run_path_chunks(std::uint64_t total,
                                     std::uint64_t chunk_size, int workers,
                                     Fn&& fn) {
  const std::uint64_t n_chunks =
      chunk_size == 0 ? 0 : (total + chunk_size - 1) / chunk_size;
  std::vector<Partial> parts(n_chunks);
  auto run_chunk = [&](std::uint64_t c) {
    const std::uint64_t begin = c * chunk_size;
    const std::uint64_t end = std::min(total, begin + chunk_size);
    parts[c] = fn(begin, end);
  };
  if (workers <= 1 || n_chunks <= 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) run_chunk(c);
    return parts;
  }
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto worker = [&] {
    while (true) {
      const std::uint64_t c = next.fetch_add(1);
      if (c >= n_chunks) return;
      try {
        run_chunk(c);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = static_cast<int>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), n_chunks));
  pool.reserve(n_threads);
  for (int i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
  return parts;
}

inline constexpr std::uint64_t default_chunk_size = 1024;

}  // namespace bfa
