#include "revolve/util.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <thread>
#include <vector>

namespace revolve {

int max_threads() {
  int hw = static_cast<int>(std::thread::hardware_concurrency());
  if (hw < 1) hw = 1;
  if (const char* env = std::getenv("REVOLVE_THREADS")) {
    int cap = std::atoi(env);
    if (cap >= 1) hw = std::min(hw, cap);
  }
  return hw;
}

void parallel_chunks(std::size_t n, std::size_t n_chunks,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  n_chunks = std::max<std::size_t>(1, std::min(n_chunks, n));
  auto range = [&](std::size_t c) {
    std::size_t lo = n * c / n_chunks;
    std::size_t hi = n * (c + 1) / n_chunks;
    return std::pair<std::size_t, std::size_t>(lo, hi);
  };

  std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(max_threads()), n_chunks);
  // Thread spawn costs dwarf small workloads; the partition (and hence any
  // per-item arithmetic) is identical either way.
  if (n < 64) workers = 1;
  if (workers <= 1) {
    for (std::size_t c = 0; c < n_chunks; ++c) {
      auto [lo, hi] = range(c);
      fn(c, lo, hi);
    }
    return;
  }

  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w]() {
      for (std::size_t c = w; c < n_chunks; c += workers) {
        auto [lo, hi] = range(c);
        fn(c, lo, hi);
      }
    });
  }
  for (auto& th : pool) th.join();
}

std::string format_g17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace revolve
