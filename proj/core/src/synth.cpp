#include "vmphase/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

#include "vmphase/error.hpp"
#include "vmphase/random.hpp"

namespace vmphase {
namespace {

struct Formant {
  double freq;
  double bandwidth;
  double gain;
};

std::vector<double> syllable_contour(std::size_t n, int rate, Rng& rng)
{
  std::vector<double> env(n, 0.05);
  std::size_t pos = static_cast<std::size_t>(rng.uniform(0.0, 0.1) * rate);
  while (pos < n) {
    const auto len = static_cast<std::size_t>(rng.uniform(0.15, 0.4) * rate);
    const double level = rng.uniform(0.5, 1.0);
    for (std::size_t i = 0; i < len && pos + i < n; ++i) {
      const double shape = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / len);
      env[pos + i] = std::max(env[pos + i], level * shape);
    }
    pos += len + static_cast<std::size_t>(rng.uniform(0.02, 0.12) * rate);
  }
  return env;
}

} // namespace

std::vector<double> synth_utterance(const SynthParams& params, std::uint64_t seed)
{
  if (params.seconds <= 0.0 || params.sample_rate_hz <= 0 || params.f0_choices_hz.empty())
    throw DomainError("synth_utterance: invalid parameters");
  Rng rng(seed);
  const int rate = params.sample_rate_hz;
  const auto n = static_cast<std::size_t>(std::llround(params.seconds * rate));
  const double f0 = params.f0_choices_hz[rng.below(params.f0_choices_hz.size())];

  const Formant formants[3] = {
      {rng.uniform(300.0, 900.0), rng.uniform(80.0, 200.0), 1.0},
      {rng.uniform(900.0, 2500.0), rng.uniform(100.0, 250.0), rng.uniform(0.3, 0.8)},
      {rng.uniform(2500.0, 3800.0), rng.uniform(150.0, 300.0), rng.uniform(0.1, 0.4)},
  };
  const double nyquist = 0.5 * rate;
  std::vector<double> amps;
  for (int h = 1; h * f0 < 0.95 * nyquist; ++h) {
    const double f = h * f0;
    double a = 0.02 / std::sqrt(static_cast<double>(h));
    for (const auto& fm : formants) {
      const double z = (f - fm.freq) / fm.bandwidth;
      a += fm.gain * std::exp(-0.5 * z * z);
    }
    amps.push_back(a);
  }

  const auto contour = params.syllables ? syllable_contour(n, rate, rng)
                                        : std::vector<double>(n, 1.0);
  std::vector<double> out(n, 0.0);
  const double w0 = 2.0 * std::numbers::pi * f0 / rate;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (std::size_t h = 0; h < amps.size(); ++h)
      s += amps[h] * std::cos(w0 * static_cast<double>(h + 1) * static_cast<double>(i));
    out[i] = contour[i] * s;
  }

  double power = 0.0;
  for (double v : out)
    power += v * v;
  const double rms = std::sqrt(power / static_cast<double>(n));
  if (std::isfinite(params.noise_db)) {
    const double sigma = rms * std::pow(10.0, params.noise_db / 20.0);
    for (double& v : out)
      v += sigma * rng.normal();
  }

  double peak = 0.0;
  for (double v : out)
    peak = std::max(peak, std::abs(v));
  if (peak > 0.0)
    for (double& v : out)
      v *= params.peak / peak;
  return out;
}

std::vector<Utterance> synth_corpus(std::size_t count, const SynthParams& params,
                                    std::uint64_t seed)
{
  std::vector<Utterance> corpus;
  corpus.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "synth_%03zu", i);
    corpus.push_back({name, synth_utterance(params, mix_seed(seed, i))});
  }
  return corpus;
}

} // namespace vmphase
