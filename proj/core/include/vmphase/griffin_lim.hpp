#pragma once

#include <cstdint>
#include <vector>

#include "vmphase/stft.hpp"

namespace vmphase {

struct GriffinLimConfig {
  std::size_t iterations = 100;
};

struct GriffinLimResult {
  PhaseSpectrogram phase;
  /// Log spectral convergence after each iteration.
  std::vector<double> convergence;
};

/// I.i.d. uniform phases on [0, 2 pi), reproducible per seed.
RealMatrix random_phase_matrix(Index rows, Index cols, std::uint64_t seed);

/// Random phases shaped like a spectrogram of `frames` frames.
PhaseSpectrogram random_phase(const StftConfig& config, Index frames, std::uint64_t seed);

/// Runs exactly config.iterations rounds of
///   join(amp, phase) -> istft -> stft -> keep phase,
/// starting from `init_phase`. The amplitude is never modified.
GriffinLimResult griffin_lim(const AmplitudeSpectrogram& amp,
                             const PhaseSpectrogram& init_phase,
                             const GriffinLimConfig& config);

/// Same, starting from random_phase(amp.config, amp.frames(), seed).
GriffinLimResult griffin_lim(const AmplitudeSpectrogram& amp, std::uint64_t seed,
                             const GriffinLimConfig& config);

} // namespace vmphase
