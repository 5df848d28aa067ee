#pragma once

#include <complex>
#include <span>

namespace vmphase::detail {

/// Real-to-complex transform of a fixed power-of-two size backed by FFTW.
/// Plans are created once per size behind a global lock; execution is
/// thread-safe.
class RealFft {
public:
  explicit RealFft(int size);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  [[nodiscard]] int size() const noexcept { return size_; }

  /// `in` has size() samples, `out` size()/2 + 1 bins. Unnormalized.
  void forward(std::span<const double> in, std::span<std::complex<double>> out) const;

  /// Inverse of forward() including the 1/N factor. Imaginary parts of the
  /// DC and Nyquist bins are ignored (Hermitian extension).
  void inverse(std::span<const std::complex<double>> in, std::span<double> out) const;

private:
  int size_;
  void* forward_plan_;
  void* inverse_plan_;
};

/// Shared transform for `size`; lives until program exit.
const RealFft& real_fft(int size);

} // namespace vmphase::detail
