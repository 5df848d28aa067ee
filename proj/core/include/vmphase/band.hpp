#pragma once

#include <string>
#include <string_view>

#include <Eigen/Core>

namespace vmphase {

/// Frequency band whose phases the network predicts. The dimensionalities
/// are fixed constants: 96, 128 and 257 bins.
enum class Band { To2kHz, To4kHz, Full };

[[nodiscard]] Eigen::Index band_dim(Band band) noexcept;

/// Inverse of band_dim(); throws DomainError for any other dimension.
[[nodiscard]] Band band_from_dim(Eigen::Index dim);

/// "2k", "4k" or "8k" (CLI spelling).
[[nodiscard]] Band parse_band(std::string_view text);
[[nodiscard]] std::string band_name(Band band);

} // namespace vmphase
