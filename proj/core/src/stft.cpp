#include "vmphase/stft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "fft.hpp"

namespace vmphase {

void StftConfig::validate() const
{
  if (sample_rate_hz <= 0)
    throw DomainError("sample_rate_hz must be positive");
  if (hop_len <= 0 || window_len <= 0 || fft_len <= 0)
    throw DomainError("window, hop and fft lengths must be positive");
  if (hop_len > window_len || window_len > fft_len)
    throw DomainError("require hop_len <= window_len <= fft_len, got " +
                      std::to_string(hop_len) + ", " + std::to_string(window_len) +
                      ", " + std::to_string(fft_len));
  if ((fft_len & (fft_len - 1)) != 0)
    throw DomainError("fft_len must be a power of two, got " +
                      std::to_string(fft_len));
}

Index StftConfig::frame_count(std::size_t signal_len) const
{
  const auto window = static_cast<std::size_t>(window_len);
  if (signal_len < window)
    throw SizeError("signal of " + std::to_string(signal_len) +
                    " samples is shorter than one window (" +
                    std::to_string(window_len) + ")");
  const auto hop = static_cast<std::size_t>(hop_len);
  return static_cast<Index>(1 + (signal_len - window + hop - 1) / hop);
}

std::size_t StftConfig::synthesis_length(Index frames) const noexcept
{
  if (frames <= 0)
    return 0;
  return static_cast<std::size_t>(frames - 1) * static_cast<std::size_t>(hop_len) +
         static_cast<std::size_t>(window_len);
}

std::vector<double> hamming_window(int length)
{
  std::vector<double> w(static_cast<std::size_t>(length));
  if (length == 1) {
    w[0] = 1.0;
    return w;
  }
  const double step = 2.0 * std::numbers::pi / (length - 1);
  for (int n = 0; n < length; ++n)
    w[static_cast<std::size_t>(n)] = 0.54 - 0.46 * std::cos(step * n);
  return w;
}

std::vector<double> analysis_window(const StftConfig& config)
{
  switch (config.window) {
  case WindowKind::Hamming:
    return hamming_window(config.window_len);
  }
  throw DomainError("unknown window kind");
}

ComplexSpectrogram stft(std::span<const double> signal, const StftConfig& config)
{
  config.validate();
  const Index frames = config.frame_count(signal.size());
  const auto window = analysis_window(config);
  const auto& fft = detail::real_fft(config.fft_len);

  ComplexSpectrogram out{ComplexMatrix(frames, config.bins()), config};
  std::vector<double> buffer(static_cast<std::size_t>(config.fft_len));
  const auto hop = static_cast<std::size_t>(config.hop_len);
  const auto len = static_cast<std::size_t>(config.window_len);

  for (Index t = 0; t < frames; ++t) {
    std::fill(buffer.begin(), buffer.end(), 0.0);
    const std::size_t start = static_cast<std::size_t>(t) * hop;
    const std::size_t avail = std::min(len, signal.size() - start);
    for (std::size_t n = 0; n < avail; ++n)
      buffer[n] = window[n] * signal[start + n];
    fft.forward(buffer, std::span(out.data.row(t).data(),
                                  static_cast<std::size_t>(config.bins())));
  }
  return out;
}

std::vector<double> istft(const ComplexSpectrogram& spec)
{
  const StftConfig& config = spec.config;
  config.validate();
  require_shape(spec.data, spec.frames(), config.bins(), "istft spectrogram");

  const Index frames = spec.frames();
  const std::size_t out_len = config.synthesis_length(frames);
  std::vector<double> out(out_len, 0.0);
  std::vector<double> norm(out_len, 0.0);
  if (frames == 0)
    return out;

  const auto window = analysis_window(config);
  const auto& fft = detail::real_fft(config.fft_len);
  std::vector<double> frame(static_cast<std::size_t>(config.fft_len));
  const auto hop = static_cast<std::size_t>(config.hop_len);
  const auto len = static_cast<std::size_t>(config.window_len);

  for (Index t = 0; t < frames; ++t) {
    fft.inverse(std::span(spec.data.row(t).data(), static_cast<std::size_t>(config.bins())),
                frame);
    const std::size_t start = static_cast<std::size_t>(t) * hop;
    for (std::size_t n = 0; n < len; ++n) {
      out[start + n] += window[n] * frame[n];
      norm[start + n] += window[n] * window[n];
    }
  }
  constexpr double floor = 1e-10;
  for (std::size_t n = 0; n < out_len; ++n)
    out[n] /= std::max(norm[n], floor);
  return out;
}

double wrap_phase(double angle) noexcept
{
  double r = std::remainder(angle, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi)
    r += 2.0 * std::numbers::pi;
  return r;
}

PolarParts polar_split(const ComplexSpectrogram& spec)
{
  PolarParts parts{
      AmplitudeSpectrogram{RealMatrix(spec.frames(), spec.bins()), spec.config},
      PhaseSpectrogram{RealMatrix(spec.frames(), spec.bins()), spec.config}};
  for (Index t = 0; t < spec.frames(); ++t) {
    for (Index f = 0; f < spec.bins(); ++f) {
      const std::complex<double> z = spec.data(t, f);
      const double mag = std::abs(z);
      double arg = 0.0;
      if (mag > 0.0) {
        arg = std::arg(z);
        if (arg <= -std::numbers::pi)
          arg = std::numbers::pi;
      }
      parts.amplitude.data(t, f) = mag;
      parts.phase.data(t, f) = arg;
    }
  }
  return parts;
}

ComplexSpectrogram polar_join(const AmplitudeSpectrogram& amp,
                              const PhaseSpectrogram& phase)
{
  require_shape(phase.data, amp.frames(), amp.bins(), "polar_join phase");
  if (!(amp.config == phase.config))
    throw ShapeError("polar_join: amplitude and phase use different STFT configs");
  ComplexSpectrogram out{ComplexMatrix(amp.frames(), amp.bins()), amp.config};
  for (Index t = 0; t < amp.frames(); ++t)
    for (Index f = 0; f < amp.bins(); ++f)
      out.data(t, f) = std::polar(amp.data(t, f), phase.data(t, f));
  return out;
}

} // namespace vmphase
