#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <span>

namespace suf {

/// Seeded generator whose output is identical across standard libraries.
///
/// std::mt19937_64 itself is fully specified, but the std distributions are
/// not, so uniform, index and Gaussian draws are derived here by hand.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform on [lo, hi].
  double uniform(double lo, double hi);

  /// Uniform integer in [0, n), unbiased (rejection sampling).
  std::size_t index(std::size_t n);

  /// Standard normal via the Marsaglia polar method.
  double normal();

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::size_t j = index(i);
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// splitmix64 finalizer; used to derive independent child seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace suf
