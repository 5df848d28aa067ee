#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace vmphase {

using Index = Eigen::Index;

/// Frames along rows, frequency bins along columns.
using RealMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexMatrix = Eigen::Matrix<std::complex<double>, Eigen::Dynamic,
                                    Eigen::Dynamic, Eigen::RowMajor>;

enum class WindowKind { Hamming };

/// Analysis/synthesis geometry. Defaults: 16 kHz, 25 ms window, 5 ms hop,
/// 512-point FFT, Hamming.
struct StftConfig {
  int sample_rate_hz = 16000;
  int window_len = 400;
  int hop_len = 80;
  int fft_len = 512;
  WindowKind window = WindowKind::Hamming;

  /// Throws DomainError unless 0 < hop <= window <= fft and fft is a power
  /// of two.
  void validate() const;

  [[nodiscard]] Index bins() const noexcept { return fft_len / 2 + 1; }

  /// Frames needed to cover `signal_len` samples (tail zero-padded).
  /// Throws SizeError when the signal is shorter than one window.
  [[nodiscard]] Index frame_count(std::size_t signal_len) const;

  /// Length of the overlap-add output for `frames` frames.
  [[nodiscard]] std::size_t synthesis_length(Index frames) const noexcept;

  bool operator==(const StftConfig&) const = default;
};

struct AmplitudeSpectrogram {
  RealMatrix data;
  StftConfig config;

  [[nodiscard]] Index frames() const noexcept { return data.rows(); }
  [[nodiscard]] Index bins() const noexcept { return data.cols(); }
};

/// Phases in radians. Entries may lie outside one period.
struct PhaseSpectrogram {
  RealMatrix data;
  StftConfig config;

  [[nodiscard]] Index frames() const noexcept { return data.rows(); }
  [[nodiscard]] Index bins() const noexcept { return data.cols(); }
};

struct ComplexSpectrogram {
  ComplexMatrix data;
  StftConfig config;

  [[nodiscard]] Index frames() const noexcept { return data.rows(); }
  [[nodiscard]] Index bins() const noexcept { return data.cols(); }
};

/// w[n] = 0.54 - 0.46 cos(2 pi n / (L - 1)).
std::vector<double> hamming_window(int length);

std::vector<double> analysis_window(const StftConfig& config);

/// One-sided STFT. Frames start at sample 0 and advance by hop_len; the
/// final frame is completed with zeros. Each frame is windowed, zero-padded
/// to fft_len and transformed without normalization.
ComplexSpectrogram stft(std::span<const double> signal, const StftConfig& config);

/// Least-squares overlap-add inverse:
///   x[n] = sum_t w[n - tH] frame_t[n - tH] / max(sum_t w^2[n - tH], 1e-10).
/// Output length is config.synthesis_length(frames).
std::vector<double> istft(const ComplexSpectrogram& spec);

struct PolarParts {
  AmplitudeSpectrogram amplitude;
  PhaseSpectrogram phase;
};

/// Magnitude and principal argument in (-pi, pi]; zero magnitude maps to
/// phase 0.
PolarParts polar_split(const ComplexSpectrogram& spec);

/// amp * exp(i phase), element-wise. Throws ShapeError on mismatch.
ComplexSpectrogram polar_join(const AmplitudeSpectrogram& amp,
                              const PhaseSpectrogram& phase);

/// Principal value of an angle in (-pi, pi].
double wrap_phase(double angle) noexcept;

/// Throws ShapeError unless `m` is frames x bins.
template <typename M>
void require_shape(const M& m, Index frames, Index bins, const char* what);

} // namespace vmphase

#include "vmphase/error.hpp"

namespace vmphase {

template <typename M>
void require_shape(const M& m, Index frames, Index bins, const char* what)
{
  if (m.rows() != frames || m.cols() != bins)
    detail::throw_shape(what, frames, bins, m.rows(), m.cols());
}

} // namespace vmphase
