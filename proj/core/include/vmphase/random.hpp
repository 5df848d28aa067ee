#pragma once

#include <cstdint>
#include <random>

namespace vmphase {

/// Seeded generator whose derived draws are identical across standard
/// libraries: only the raw mt19937_64 stream is used, never the
/// implementation-defined std distributions.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Uniform integer on [0, n), n > 0, rejection-sampled (no modulo bias).
  std::uint64_t below(std::uint64_t n);

  /// Standard normal via Box-Muller.
  double normal();

  std::uint64_t next() { return engine_(); }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Combines two seeds into one (splitmix64 finalizer over a ^ rotated b).
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) noexcept;

} // namespace vmphase
