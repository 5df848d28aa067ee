#pragma once

#include <filesystem>
#include <span>
#include <vector>

namespace vmphase {

struct StftConfig;

/// Mono 16-bit PCM audio scaled to [-1, 1).
struct WavData {
  int sample_rate_hz = 0;
  std::vector<double> samples;
};

/// Reads a RIFF/WAVE file. Throws WavError for anything other than
/// uncompressed 16-bit mono PCM, IoError when the file cannot be read.
WavData read_wav(const std::filesystem::path& path);

/// read_wav() plus a check that the header rate equals config.sample_rate_hz.
WavData read_wav(const std::filesystem::path& path, const StftConfig& config);

/// Writes 16-bit mono PCM: round(s * 32768) clipped to the int16 range, so
/// samples read by read_wav() round-trip exactly.
void write_wav(const std::filesystem::path& path, std::span<const double> samples,
               int sample_rate_hz);

} // namespace vmphase
