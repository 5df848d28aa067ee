#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

#include "vmphase/random.hpp"
#include "vmphase/stft.hpp"

namespace vmphase::test {

inline std::vector<double> tone(double freq_hz, double seconds, int rate = 16000,
                                double amp = 0.5)
{
  const auto n = static_cast<std::size_t>(seconds * rate);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i)
    s[i] = amp * std::cos(2.0 * std::numbers::pi * freq_hz * static_cast<double>(i) / rate);
  return s;
}

inline std::vector<double> white_noise(std::size_t n, std::uint64_t seed, double sigma = 0.1)
{
  Rng rng(seed);
  std::vector<double> s(n);
  for (auto& v : s)
    v = sigma * rng.normal();
  return s;
}

inline std::vector<double> chirp(double f0, double f1, double seconds, int rate = 16000)
{
  const auto n = static_cast<std::size_t>(seconds * rate);
  std::vector<double> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / rate;
    const double phase = 2.0 * std::numbers::pi * (f0 * t + 0.5 * (f1 - f0) * t * t / seconds);
    s[i] = 0.4 * std::sin(phase);
  }
  return s;
}

/// Five harmonics of 150 Hz plus light noise.
inline std::vector<double> harmonics_plus_noise(double seconds, std::uint64_t seed,
                                                int rate = 16000)
{
  auto s = white_noise(static_cast<std::size_t>(seconds * rate), seed, 0.01);
  for (std::size_t i = 0; i < s.size(); ++i)
    for (int h = 1; h <= 5; ++h)
      s[i] += 0.3 / h *
              std::sin(2.0 * std::numbers::pi * 150.0 * h * static_cast<double>(i) / rate +
                       0.7 * h);
  return s;
}

/// Relative L2 error over [skip, n - skip).
inline double interior_error(std::span<const double> ref, std::span<const double> got,
                             std::size_t skip)
{
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = skip; i + skip < ref.size(); ++i) {
    num += (ref[i] - got[i]) * (ref[i] - got[i]);
    den += ref[i] * ref[i];
  }
  return std::sqrt(num / den);
}

inline std::vector<double> random_row(std::size_t n, Rng& rng, double lo, double hi)
{
  std::vector<double> v(n);
  for (auto& x : v)
    x = rng.uniform(lo, hi);
  return v;
}

} // namespace vmphase::test
