#pragma once

#include <cstdint>

namespace fpxl {

/// Deterministic, portable pseudo-random stream (splitmix64). Every random
/// quantity in the library flows through this type so that a run is fully
/// reproducible from the seed recorded in the manifest.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  /// Uniform in [0,1), 53-bit resolution.
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double a, double b) { return a + (b - a) * uniform(); }

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

  /// Independent substream; `stream` tags the consumer (per-lambda solves,
  /// per-sample draws) so concurrent work never shares a stream.
  Rng fork(std::uint64_t stream) const {
    Rng child(state_ ^ (0x632be59bd9b4e019ull * (stream + 1)));
    child.next_u64();
    return child;
  }

 private:
  std::uint64_t state_;
};

}  // namespace fpxl
