#include "vmphase/features.hpp"

#include <algorithm>
#include <cmath>

#include "binary_io.hpp"
#include "vmphase/error.hpp"
#include "vmphase/parallel.hpp"

namespace vmphase {

RealMatrix log_amplitude(const AmplitudeSpectrogram& amp, double floor)
{
  if (!(floor > 0.0))
    throw DomainError("log_amplitude floor must be positive");
  return amp.data.unaryExpr([floor](double v) { return std::log(std::max(v, floor)); });
}

RealMatrix stack_context(const RealMatrix& rows, int radius)
{
  if (radius < 0)
    throw DomainError("context radius must be non-negative");
  const Index frames = rows.rows();
  const Index width = rows.cols();
  const Index span = 2 * radius + 1;
  RealMatrix out(frames, span * width);
  for (Index t = 0; t < frames; ++t) {
    for (Index k = 0; k < span; ++k) {
      const Index src = std::clamp<Index>(t + k - radius, 0, frames - 1);
      out.row(t).segment(k * width, width) = rows.row(src);
    }
  }
  return out;
}

FeatureStats fit_stats(const RealMatrix& features)
{
  const Index n = features.rows();
  if (n < 2)
    throw SizeError("fit_stats needs at least 2 rows, got " + std::to_string(n));
  FeatureStats stats;
  stats.mean = features.colwise().mean().transpose();
  stats.std.resize(features.cols());
  for (Index c = 0; c < features.cols(); ++c) {
    const double var =
        (features.col(c).array() - stats.mean(c)).square().sum() / static_cast<double>(n);
    stats.std(c) = std::max(std::sqrt(var), kStdFloor);
  }
  return stats;
}

RealMatrix apply_stats(const RealMatrix& features, const FeatureStats& stats)
{
  if (features.cols() != stats.dim())
    throw ShapeError("apply_stats: feature width " + std::to_string(features.cols()) +
                     " != stats dimension " + std::to_string(stats.dim()));
  RealMatrix out = features;
  for (Index t = 0; t < out.rows(); ++t)
    out.row(t) = ((out.row(t).transpose() - stats.mean).array() / stats.std.array())
                     .matrix()
                     .transpose();
  return out;
}

RealMatrix remove_stats(const RealMatrix& normalized, const FeatureStats& stats)
{
  if (normalized.cols() != stats.dim())
    throw ShapeError("remove_stats: width does not match stats dimension");
  RealMatrix out = normalized;
  for (Index t = 0; t < out.rows(); ++t)
    out.row(t) =
        (out.row(t).transpose().array() * stats.std.array() + stats.mean.array())
            .matrix()
            .transpose();
  return out;
}

RealMatrix utterance_features(const AmplitudeSpectrogram& amp)
{
  return stack_context(log_amplitude(amp), kContextRadius);
}

RealMatrix band_slice(const PhaseSpectrogram& phase, Band band)
{
  const Index dim = band_dim(band);
  if (dim > phase.bins())
    throw ShapeError("band_slice: band needs " + std::to_string(dim) +
                     " bins, spectrogram has " + std::to_string(phase.bins()));
  return phase.data.leftCols(dim);
}

PhaseSpectrogram band_merge(const RealMatrix& predicted, const PhaseSpectrogram& filler)
{
  if (predicted.rows() != filler.frames() || predicted.cols() > filler.bins())
    detail::throw_shape("band_merge predicted band", filler.frames(), filler.bins(),
                        predicted.rows(), predicted.cols());
  PhaseSpectrogram merged = filler;
  merged.data.leftCols(predicted.cols()) = predicted;
  return merged;
}

namespace {

struct UtteranceFrames {
  RealMatrix features;
  RealMatrix targets;
};

std::vector<UtteranceFrames> analyze(std::span<const Utterance> utterances,
                                     const StftConfig& config, Band band,
                                     std::size_t jobs)
{
  std::vector<UtteranceFrames> parts(utterances.size());
  parallel_for(utterances.size(), jobs, [&](std::size_t i) {
    const auto polar = polar_split(stft(utterances[i].samples, config));
    parts[i].features = utterance_features(polar.amplitude);
    parts[i].targets = band_slice(polar.phase, band);
  });
  return parts;
}

FrameDataset concatenate(std::span<const Utterance> utterances,
                         const std::vector<UtteranceFrames>& parts, Band band)
{
  Index total = 0;
  for (const auto& p : parts)
    total += p.features.rows();
  if (total == 0)
    throw SizeError("dataset has no frames");

  FrameDataset ds;
  ds.band = band;
  ds.inputs.resize(total, parts.front().features.cols());
  ds.targets.resize(total, parts.front().targets.cols());
  ds.provenance.reserve(static_cast<std::size_t>(total));
  Index row = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const Index n = parts[i].features.rows();
    ds.inputs.middleRows(row, n) = parts[i].features;
    ds.targets.middleRows(row, n) = parts[i].targets;
    for (Index t = 0; t < n; ++t)
      ds.provenance.push_back({utterances[i].name, t});
    row += n;
  }
  return ds;
}

} // namespace

FrameDataset assemble_dataset(std::span<const Utterance> utterances,
                              const StftConfig& config, Band band, std::size_t jobs)
{
  if (utterances.empty())
    throw SizeError("assemble_dataset: no utterances");
  auto parts = analyze(utterances, config, band, jobs);
  FrameDataset ds = concatenate(utterances, parts, band);
  ds.stats = fit_stats(ds.inputs);
  ds.inputs = apply_stats(ds.inputs, ds.stats);
  return ds;
}

FrameDataset assemble_dataset(std::span<const Utterance> utterances,
                              const StftConfig& config, Band band,
                              const FeatureStats& stats, std::size_t jobs)
{
  if (utterances.empty())
    throw SizeError("assemble_dataset: no utterances");
  auto parts = analyze(utterances, config, band, jobs);
  FrameDataset ds = concatenate(utterances, parts, band);
  ds.stats = stats;
  ds.inputs = apply_stats(ds.inputs, ds.stats);
  return ds;
}

namespace {
constexpr char kDatasetMagic[4] = {'V', 'M', 'D', 'S'};
constexpr std::uint32_t kDatasetVersion = 1;
} // namespace

void save_dataset(const std::filesystem::path& path, const FrameDataset& dataset)
{
  detail::ByteWriter w;
  w.bytes(kDatasetMagic, 4);
  w.u32(kDatasetVersion);
  w.u32(static_cast<std::uint32_t>(dataset.inputs.rows()));
  w.u32(static_cast<std::uint32_t>(dataset.inputs.cols()));
  w.u32(static_cast<std::uint32_t>(dataset.targets.cols()));
  w.f64s(dataset.inputs.data(), static_cast<std::size_t>(dataset.inputs.size()));
  w.f64s(dataset.targets.data(), static_cast<std::size_t>(dataset.targets.size()));
  w.f64s(dataset.stats.mean.data(), static_cast<std::size_t>(dataset.stats.mean.size()));
  w.f64s(dataset.stats.std.data(), static_cast<std::size_t>(dataset.stats.std.size()));
  detail::write_file(path.string(), w.str());
}

FrameDataset load_dataset(const std::filesystem::path& path)
{
  const auto bytes = detail::read_file(path.string());
  detail::ByteReader r(bytes, path.string());
  if (!r.match(kDatasetMagic, 4))
    throw FormatError(path.string() + ": not a dataset file (bad magic)");
  const std::uint32_t version = r.u32();
  if (version != kDatasetVersion)
    throw VersionError(path.string() + ": unsupported dataset version " +
                       std::to_string(version));
  const Index rows = r.u32();
  const Index in_dim = r.u32();
  const Index out_dim = r.u32();
  FrameDataset ds;
  ds.band = band_from_dim(out_dim);
  r.need(static_cast<std::size_t>((rows * (in_dim + out_dim) + 2 * in_dim) * 8));
  ds.inputs.resize(rows, in_dim);
  ds.targets.resize(rows, out_dim);
  ds.stats.mean.resize(in_dim);
  ds.stats.std.resize(in_dim);
  r.f64s(ds.inputs.data(), static_cast<std::size_t>(ds.inputs.size()));
  r.f64s(ds.targets.data(), static_cast<std::size_t>(ds.targets.size()));
  r.f64s(ds.stats.mean.data(), static_cast<std::size_t>(in_dim));
  r.f64s(ds.stats.std.data(), static_cast<std::size_t>(in_dim));
  if (r.remaining() != 0)
    throw FormatError(path.string() + ": trailing bytes after dataset payload");
  return ds;
}

} // namespace vmphase
