#ifndef QZSG_RNG_HPP
#define QZSG_RNG_HPP

#include <cstdint>

#include "qzsg/matrix.hpp"

namespace qzsg {

/// Counter-based generator: the k-th draw of stream s under seed x is
/// splitmix64_finalize(x + (s * kStreamStride + k) * golden_gamma). The output
/// depends only on (seed, stream, counter), so draws are bit-identical on
/// every platform and streams never need to be advanced to be skipped.
class CounterRng {
 public:
  static constexpr std::uint64_t kStreamStride = 0x9E3779B97F4A7C15ull;

  CounterRng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream) {}

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal via Box-Muller (two uniforms per draw, no caching).
  double normal();
  /// Standard complex Gaussian: real and imaginary parts N(0, 1/2).
  Complex complex_normal();

  std::uint64_t counter() const { return counter_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

std::uint64_t splitmix64_finalize(std::uint64_t z);

/// Deterministic child seed, e.g. for game `index` of a suite.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

}  // namespace qzsg

#endif  // QZSG_RNG_HPP
