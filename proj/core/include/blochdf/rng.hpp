#pragma once

#include <cstdint>
#include <limits>
#include <numbers>
#include <vector>

namespace blochdf {

/// SplitMix64 output function.
constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Combines a seed with an index (k-point, sample, repeat) into a new seed.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(seed ^ splitmix64(index + 0x632BE59BD9B4E019ull));
}

/// Well-known stream ids. Each consumer of randomness draws from its own
/// stream so results do not depend on call order.
enum class RngStream : std::uint64_t {
  phases = 0,       // unit-modulus row weights of the Fourier sketch
  rows = 1,         // sketch row subsample
  error_pairs = 2,  // quadruples drawn for error sampling
  eigen_init = 3,   // eigensolver starting block
  eri_pairs = 4,    // quadruples drawn for the ERI bound check
};

/// Counter-based generator: the i-th output of stream s under seed k is
/// splitmix64(key(k, s) + (i + 1) * 0x9E3779B97F4A7C15), with
/// key(k, s) = splitmix64(k ^ splitmix64(s)). Any implementation of those two
/// lines reproduces every random draw in the library.
class CounterRng {
 public:
  using result_type = std::uint64_t;

  CounterRng(std::uint64_t seed, RngStream stream)
      : CounterRng(seed, static_cast<std::uint64_t>(stream)) {}
  CounterRng(std::uint64_t seed, std::uint64_t stream)
      : key_(splitmix64(seed ^ splitmix64(stream))) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    ++counter_;
    return splitmix64(key_ + counter_ * 0x9E3779B97F4A7C15ull);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n) by rejection (no modulo bias).
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t limit = max() - max() % n;
    std::uint64_t x;
    do {
      x = (*this)();
    } while (x >= limit);
    return x % n;
  }

  /// First `count` entries of a Fisher-Yates shuffle of 0..n-1.
  std::vector<long> sample_without_replacement(long n, long count) {
    std::vector<long> pool(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) pool[static_cast<std::size_t>(i)] = i;
    for (long i = 0; i < count; ++i) {
      const long j = i + static_cast<long>(below(static_cast<std::uint64_t>(n - i)));
      std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
    }
    pool.resize(static_cast<std::size_t>(count));
    return pool;
  }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace blochdf
