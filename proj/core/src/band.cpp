#include "vmphase/band.hpp"

#include "vmphase/error.hpp"

namespace vmphase {

Eigen::Index band_dim(Band band) noexcept
{
  switch (band) {
  case Band::To2kHz:
    return 96;
  case Band::To4kHz:
    return 128;
  case Band::Full:
    return 257;
  }
  return 257;
}

Band band_from_dim(Eigen::Index dim)
{
  for (Band b : {Band::To2kHz, Band::To4kHz, Band::Full})
    if (band_dim(b) == dim)
      return b;
  throw DomainError("no band has " + std::to_string(dim) + " bins (expected 96, 128 or 257)");
}

Band parse_band(std::string_view text)
{
  if (text == "2k")
    return Band::To2kHz;
  if (text == "4k")
    return Band::To4kHz;
  if (text == "8k")
    return Band::Full;
  throw ConfigError("unknown band '" + std::string(text) + "' (expected 2k, 4k or 8k)");
}

std::string band_name(Band band)
{
  switch (band) {
  case Band::To2kHz:
    return "2k";
  case Band::To4kHz:
    return "4k";
  case Band::Full:
    return "8k";
  }
  return "8k";
}

} // namespace vmphase
