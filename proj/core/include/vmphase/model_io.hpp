#pragma once

#include <filesystem>

#include "vmphase/features.hpp"
#include "vmphase/network.hpp"
#include "vmphase/stft.hpp"
#include "vmphase/trainer.hpp"

namespace vmphase {

/// A trained predictor together with the input normalization it expects.
struct PhaseModel {
  GluNetwork network;
  FeatureStats stats;

  /// Throws DomainError when the output dimension is not a known band.
  [[nodiscard]] Band band() const { return band_from_dim(network.output_dim()); }
};

inline constexpr std::uint32_t kModelFormatVersion = 1;

/// Binary layout, little-endian:
///   "VMPH", u32 version, u32 input_dim, u32 output_dim, u32 hidden count,
///   u32 per hidden layer width, then every matrix row-major as f64 in
///   parameter_blocks() order, then stats mean and std (input_dim f64 each).
void save_model(const std::filesystem::path& path, const PhaseModel& model);

/// Also writes `<path>.json` recording the training and STFT settings.
void save_model(const std::filesystem::path& path, const PhaseModel& model,
                const TrainConfig& train, const StftConfig& stft);

/// Throws FormatError (bad magic, trailing data), VersionError,
/// TruncatedError or ShapeError (zero or implausible dimensions).
PhaseModel load_model(const std::filesystem::path& path);

struct ModelSidecar {
  TrainConfig train;
  StftConfig stft;
};

/// Reads `<path>.json`. Throws IoError when missing, FormatError when invalid.
ModelSidecar load_model_sidecar(const std::filesystem::path& model_path);

std::filesystem::path sidecar_path(const std::filesystem::path& model_path);

} // namespace vmphase
