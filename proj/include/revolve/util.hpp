#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

namespace revolve {

// Counter-style seeded generator (splitmix64). Used instead of <random>
// distributions so that streams are bit-identical across platforms and
// standard library implementations.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
  std::uint64_t state_;
};

// Derives an independent stream seed from (seed, stream index).
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  SplitMix64 g(seed ^ (0x632be59bd9b4e019ull + stream * 0x9e3779b97f4a7c15ull));
  g.next();
  return g.next();
}

// Neumaier compensated accumulator.
class KahanSum {
public:
  void add(double v) {
    double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

// Thread cap: min(hardware_concurrency, REVOLVE_THREADS if set). At least 1.
int max_threads();

// Runs fn(chunk, begin, end) over a fixed partition of [0, n) into n_chunks
// contiguous ranges. The partition does not depend on the thread count, so
// per-chunk results can be combined in chunk order for bit-reproducible
// reductions regardless of scheduling.
void parallel_chunks(std::size_t n, std::size_t n_chunks,
                     const std::function<void(std::size_t, std::size_t, std::size_t)>& fn);

// Shortest-faithful decimal serialization used by all text writers
// (17 significant digits round-trip doubles exactly).
std::string format_g17(double v);

}  // namespace revolve
