#pragma once

#include <cstdint>
#include <random>

namespace eas {

/// Portable random stream: std::mt19937_64 (output fully specified by the standard) with
/// hand-rolled conversions, since the std distributions differ between library vendors.
/// One stream per colony run; every draw is consumed in program order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, n). n must be positive.
  int below(int n) {
    const int k = static_cast<int>(uniform() * n);
    return k < n ? k : n - 1;
  }

  bool coin() { return uniform() < 0.5; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace eas
