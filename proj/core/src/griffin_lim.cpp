#include "vmphase/griffin_lim.hpp"

#include <numbers>

#include "vmphase/metrics.hpp"
#include "vmphase/random.hpp"

namespace vmphase {

RealMatrix random_phase_matrix(Index rows, Index cols, std::uint64_t seed)
{
  Rng rng(seed);
  RealMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c)
      m(r, c) = 2.0 * std::numbers::pi * rng.uniform01();
  return m;
}

PhaseSpectrogram random_phase(const StftConfig& config, Index frames, std::uint64_t seed)
{
  return {random_phase_matrix(frames, config.bins(), seed), config};
}

GriffinLimResult griffin_lim(const AmplitudeSpectrogram& amp,
                             const PhaseSpectrogram& init_phase,
                             const GriffinLimConfig& config)
{
  require_shape(init_phase.data, amp.frames(), amp.bins(), "griffin_lim initial phase");
  if (!(init_phase.config == amp.config))
    throw ShapeError("griffin_lim: initial phase uses a different STFT config");

  GriffinLimResult result{init_phase, {}};
  if (config.iterations == 0)
    return result;
  result.convergence.reserve(config.iterations);

  // Keeping amp while taking the phase of S is amp * S / |S|.
  ComplexSpectrogram current = polar_join(amp, init_phase);
  ComplexSpectrogram analyzed;
  RealMatrix magnitude(amp.frames(), amp.bins());
  for (std::size_t it = 0; it < config.iterations; ++it) {
    analyzed = stft(istft(current), amp.config);
    magnitude = analyzed.data.cwiseAbs2().cwiseSqrt();
    result.convergence.push_back(log_spectral_convergence(amp.data, magnitude));
    for (Index t = 0; t < amp.frames(); ++t)
      for (Index f = 0; f < amp.bins(); ++f) {
        const double m = magnitude(t, f);
        current.data(t, f) = m > 0.0 ? analyzed.data(t, f) * (amp.data(t, f) / m)
                                     : std::complex<double>(amp.data(t, f), 0.0);
      }
  }
  result.phase = polar_split(analyzed).phase;
  return result;
}

GriffinLimResult griffin_lim(const AmplitudeSpectrogram& amp, std::uint64_t seed,
                             const GriffinLimConfig& config)
{
  return griffin_lim(amp, random_phase(amp.config, amp.frames(), seed), config);
}

} // namespace vmphase
