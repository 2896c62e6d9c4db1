#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace smixup {

/// Seeded random source. The engine is a 64-bit Mersenne twister; every
/// derived distribution is implemented here rather than through <random>
/// distributions so sequences are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform();

  /// Uniform on (0, 1), never exactly zero.
  double uniform_open();

  /// Uniform integer on [0, n). n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  double normal();

  /// Gamma(shape, 1) via Marsaglia-Tsang; shape < 1 uses the
  /// Gamma(shape + 1) * U^(1/shape) boost.
  double gamma(double shape);

  /// Beta(a, b) as g1 / (g1 + g2) with g1 ~ Gamma(a), g2 ~ Gamma(b).
  double beta(double a, double b);

  /// Uniform random permutation of 0..n-1 (Fisher-Yates).
  std::vector<int> permutation(int n);

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_index(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  /// Derives an independent child seed; used to give each run, pair or
  /// component its own stream.
  std::uint64_t split();

 private:
  std::mt19937_64 engine_;
  bool has_spare_normal_ = false;
  double spare_normal_ = 0.0;
};

/// SplitMix64 finalizer, used to decorrelate nearby integer seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace smixup
