#pragma once

#include <cstdint>
#include <vector>

#include "vmphase/features.hpp"

namespace vmphase {

/// Deterministic speech-like test material: a zero-phase harmonic source with
/// random formant envelope and syllable-rate amplitude contour, plus white
/// noise. Fundamentals are chosen from `f0_choices_hz`; the defaults divide
/// the default 80-sample hop exactly, so harmonic phases recur frame to frame.
struct SynthParams {
  double seconds = 2.0;
  int sample_rate_hz = 16000;
  std::vector<double> f0_choices_hz{200.0, 400.0};
  /// Noise RMS relative to the harmonic RMS, in dB. -inf disables noise.
  double noise_db = -30.0;
  /// Disable to get a stationary contour (full amplitude throughout).
  bool syllables = true;
  double peak = 0.5;
};

std::vector<double> synth_utterance(const SynthParams& params, std::uint64_t seed);

/// `count` utterances named synth_000, synth_001, ... seeded from (seed, i).
std::vector<Utterance> synth_corpus(std::size_t count, const SynthParams& params,
                                    std::uint64_t seed);

} // namespace vmphase
