#pragma once

#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "graphnoise/hash.hpp"

namespace graphnoise {

/// Deterministic random source.
///
/// Wraps std::mt19937_64, whose output sequence is fixed by the standard,
/// and implements its own integer/real draws instead of the standard
/// distributions (whose mappings are implementation-defined). The same seed
/// therefore yields the same draw sequence on every platform and standard
/// library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform integer in [0, n). n must be > 0. Unbiased via modulo rejection.
  std::uint64_t below(std::uint64_t n) {
    const std::uint64_t threshold = (0 - n) % n;
    for (;;) {
      const std::uint64_t r = engine_();
      if (r >= threshold) return r % n;
    }
  }

  std::size_t index(std::size_t n) { return static_cast<std::size_t>(below(n)); }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[index(i)]);
    }
  }

  /// k distinct elements drawn uniformly without replacement (partial
  /// Fisher-Yates); the returned order is the draw order.
  template <typename T>
  std::vector<T> sample(std::vector<T> pool, std::size_t k) {
    if (k > pool.size()) k = pool.size();
    for (std::size_t i = 0; i < k; ++i) {
      std::swap(pool[i], pool[i + index(pool.size() - i)]);
    }
    pool.resize(k);
    return pool;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace graphnoise
