#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "vmphase/band.hpp"
#include "vmphase/stft.hpp"

namespace vmphase {

/// Per-dimension normalization statistics frozen at training time.
struct FeatureStats {
  Eigen::VectorXd mean;
  Eigen::VectorXd std;

  [[nodiscard]] Index dim() const noexcept { return mean.size(); }
};

inline constexpr double kLogAmplitudeFloor = 1e-10;
inline constexpr double kStdFloor = 1e-8;
inline constexpr int kContextRadius = 2;

/// ln(max(amp, floor)), element-wise.
RealMatrix log_amplitude(const AmplitudeSpectrogram& amp,
                         double floor = kLogAmplitudeFloor);

/// Row t becomes [x_{t-r}, ..., x_t, ..., x_{t+r}] with indices clamped to
/// [0, T-1]. Output is T x (2r+1)*cols.
RealMatrix stack_context(const RealMatrix& rows, int radius = kContextRadius);

/// Population mean and standard deviation per column, std floored at 1e-8.
/// Throws SizeError for fewer than two rows.
FeatureStats fit_stats(const RealMatrix& features);

/// (x - mean) / std per column.
RealMatrix apply_stats(const RealMatrix& features, const FeatureStats& stats);

/// x * std + mean per column; inverse of apply_stats().
RealMatrix remove_stats(const RealMatrix& normalized, const FeatureStats& stats);

/// Unnormalized network input for one utterance: stacked log amplitudes.
RealMatrix utterance_features(const AmplitudeSpectrogram& amp);

/// Lowest band_dim(band) bins of every frame.
RealMatrix band_slice(const PhaseSpectrogram& phase, Band band);

/// Copy of `filler` with bins [0, predicted.cols()) replaced by `predicted`.
PhaseSpectrogram band_merge(const RealMatrix& predicted, const PhaseSpectrogram& filler);

struct Utterance {
  std::string name;
  std::vector<double> samples;
};

struct FrameOrigin {
  std::string utterance;
  Index frame = 0;
};

/// Normalized inputs and wrapped-phase targets, one frame per row.
struct FrameDataset {
  RealMatrix inputs;
  RealMatrix targets;
  Band band = Band::Full;
  FeatureStats stats;
  std::vector<FrameOrigin> provenance;

  [[nodiscard]] Index size() const noexcept { return inputs.rows(); }
};

/// Builds a dataset from utterances (concatenated in the given order),
/// fitting normalization stats on it.
FrameDataset assemble_dataset(std::span<const Utterance> utterances,
                              const StftConfig& config, Band band, std::size_t jobs = 1);

/// Same, normalizing with previously fitted stats.
FrameDataset assemble_dataset(std::span<const Utterance> utterances,
                              const StftConfig& config, Band band,
                              const FeatureStats& stats, std::size_t jobs = 1);

/// Versioned little-endian cache ("VMDS"); provenance is not stored.
void save_dataset(const std::filesystem::path& path, const FrameDataset& dataset);
FrameDataset load_dataset(const std::filesystem::path& path);

} // namespace vmphase
