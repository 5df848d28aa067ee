#include "vmphase/wav.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "vmphase/error.hpp"
#include "vmphase/stft.hpp"

namespace vmphase {
namespace {

std::uint32_t le32(const unsigned char* p)
{
  return std::uint32_t(p[0]) | std::uint32_t(p[1]) << 8 | std::uint32_t(p[2]) << 16 |
         std::uint32_t(p[3]) << 24;
}

std::uint16_t le16(const unsigned char* p)
{
  return static_cast<std::uint16_t>(p[0] | p[1] << 8);
}

void put32(std::string& out, std::uint32_t v)
{
  for (int i = 0; i < 4; ++i)
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put16(std::string& out, std::uint16_t v)
{
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>(v >> 8));
}

} // namespace

WavData read_wav(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw IoError("cannot open " + path.string());
  const std::vector<unsigned char> bytes((std::istreambuf_iterator<char>(in)),
                                         std::istreambuf_iterator<char>());
  const std::string where = path.string() + ": ";
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0)
    throw WavError(where + "not a RIFF/WAVE file");

  WavData wav;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const unsigned char* chunk = bytes.data() + pos;
    const std::uint32_t size = le32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size())
      throw WavError(where + "chunk extends past end of file");

    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16)
        throw WavError(where + "fmt chunk too small");
      const unsigned char* f = bytes.data() + body;
      const std::uint16_t format = le16(f);
      const std::uint16_t channels = le16(f + 2);
      const std::uint16_t bits = le16(f + 14);
      if (format != 1)
        throw WavError(where + "only uncompressed PCM is supported (format tag " +
                       std::to_string(format) + ")");
      if (channels != 1)
        throw WavError(where + "only mono is supported (" + std::to_string(channels) +
                       " channels)");
      if (bits != 16)
        throw WavError(where + "only 16-bit samples are supported (" +
                       std::to_string(bits) + " bits)");
      wav.sample_rate_hz = static_cast<int>(le32(f + 4));
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      if (!have_fmt)
        throw WavError(where + "data chunk before fmt chunk");
      const std::size_t count = size / 2;
      wav.samples.resize(count);
      const unsigned char* d = bytes.data() + body;
      for (std::size_t i = 0; i < count; ++i)
        wav.samples[i] = static_cast<std::int16_t>(le16(d + 2 * i)) / 32768.0;
      return wav;
    }
    pos = body + size + (size & 1u);
  }
  throw WavError(where + (have_fmt ? "missing data chunk" : "missing fmt chunk"));
}

WavData read_wav(const std::filesystem::path& path, const StftConfig& config)
{
  WavData wav = read_wav(path);
  if (wav.sample_rate_hz != config.sample_rate_hz)
    throw WavError(path.string() + ": sample rate " + std::to_string(wav.sample_rate_hz) +
                   " Hz does not match the configured " +
                   std::to_string(config.sample_rate_hz) + " Hz (no resampling)");
  return wav;
}

void write_wav(const std::filesystem::path& path, std::span<const double> samples,
               int sample_rate_hz)
{
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  out += "RIFF";
  put32(out, 36 + data_bytes);
  out += "WAVEfmt ";
  put32(out, 16);
  put16(out, 1);
  put16(out, 1);
  put32(out, static_cast<std::uint32_t>(sample_rate_hz));
  put32(out, static_cast<std::uint32_t>(sample_rate_hz) * 2);
  put16(out, 2);
  put16(out, 16);
  out += "data";
  put32(out, data_bytes);
  for (double s : samples) {
    const double scaled = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    put16(out, static_cast<std::uint16_t>(static_cast<std::int16_t>(scaled)));
  }

  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file)
    throw IoError("cannot write " + path.string());
  file.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!file)
    throw IoError("write failed for " + path.string());
}

} // namespace vmphase
