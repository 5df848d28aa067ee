#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "test_support.hpp"
#include "vmphase/error.hpp"
#include "vmphase/features.hpp"

using namespace vmphase;

namespace {

RealMatrix counting_rows(Index rows, Index cols)
{
  RealMatrix m(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c)
      m(r, c) = 10.0 * static_cast<double>(r) + static_cast<double>(c);
  return m;
}

std::filesystem::path temp_file(const std::string& name)
{
  return std::filesystem::temp_directory_path() / ("vmphase_features_" + name);
}

} // namespace

TEST_CASE("log amplitude values and floor")
{
  AmplitudeSpectrogram amp{RealMatrix(1, 4), StftConfig{}};
  amp.data << 1.0, 0.0, std::exp(2.0), 1e-12;
  const RealMatrix out = log_amplitude(amp);
  CHECK(out(0, 0) == 0.0);
  CHECK(out(0, 1) == doctest::Approx(-23.0259).epsilon(1e-5));
  CHECK(out(0, 2) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(out(0, 3) == out(0, 1));
  CHECK_THROWS_AS(log_amplitude(amp, 0.0), DomainError);
}

TEST_CASE("context stacking clamps at the edges")
{
  const RealMatrix rows = counting_rows(4, 3);
  const RealMatrix s = stack_context(rows);
  REQUIRE(s.rows() == 4);
  REQUIRE(s.cols() == 15);
  // Frame 0 repeats itself for the two missing predecessors.
  for (int k = 0; k < 3; ++k)
    CHECK(s.block(0, 3 * k, 1, 3) == rows.row(0));
  CHECK(s.block(0, 9, 1, 3) == rows.row(1));
  CHECK(s.block(0, 12, 1, 3) == rows.row(2));
  CHECK(s.block(3, 6, 1, 3) == rows.row(3));
  CHECK(s.block(3, 12, 1, 3) == rows.row(3));
  CHECK(s.block(3, 0, 1, 3) == rows.row(1));
  // Centre block is always the frame itself.
  for (Index t = 0; t < 4; ++t)
    CHECK(s.block(t, 6, 1, 3) == rows.row(t));

  const RealMatrix single = stack_context(counting_rows(1, 2));
  for (int k = 0; k < 5; ++k)
    CHECK(single(0, 2 * k + 1) == 1.0);
  CHECK(stack_context(rows, 0) == rows);
  CHECK_THROWS_AS(stack_context(rows, -1), DomainError);
}

TEST_CASE("feature width for the default analysis is 1285")
{
  const auto x = test::tone(440.0, 0.5);
  const auto parts = polar_split(stft(x, StftConfig{}));
  const RealMatrix f = utterance_features(parts.amplitude);
  CHECK(f.cols() == 1285);
  CHECK(f.rows() == parts.amplitude.frames());
}

TEST_CASE("normalization statistics")
{
  Rng rng(1);
  RealMatrix x(200, 6);
  for (Index r = 0; r < x.rows(); ++r)
    for (Index c = 0; c < x.cols(); ++c)
      x(r, c) = 3.0 * rng.normal() + static_cast<double>(c);
  x.col(5).setConstant(4.0);

  const FeatureStats stats = fit_stats(x);
  CHECK(stats.dim() == 6);
  CHECK(stats.std(5) == kStdFloor);
  const RealMatrix z = apply_stats(x, stats);
  for (Index c = 0; c < 5; ++c) {
    const double mean = z.col(c).mean();
    const double var = (z.col(c).array() - mean).square().mean();
    CHECK(std::abs(mean) < 1e-12);
    CHECK(std::abs(var - 1.0) < 1e-12);
  }
  CHECK(z.col(5).isZero(0.0));
  CHECK((remove_stats(z, stats) - x).cwiseAbs().maxCoeff() < 1e-12);

  CHECK_THROWS_AS(fit_stats(RealMatrix(1, 3)), SizeError);
  CHECK_THROWS_AS(apply_stats(RealMatrix(2, 5), stats), ShapeError);
  CHECK_THROWS_AS(remove_stats(RealMatrix(2, 5), stats), ShapeError);
}

TEST_CASE("population standard deviation")
{
  RealMatrix x(4, 1);
  x << 1.0, 2.0, 3.0, 4.0;
  const FeatureStats s = fit_stats(x);
  CHECK(s.mean(0) == 2.5);
  CHECK(s.std(0) == doctest::Approx(std::sqrt(1.25)).epsilon(1e-15));
}

TEST_CASE("band slice and merge")
{
  const StftConfig cfg;
  RealMatrix data(3, 257);
  Rng rng(2);
  for (Index r = 0; r < 3; ++r)
    for (Index c = 0; c < 257; ++c)
      data(r, c) = rng.uniform(-3.0, 3.0);
  const PhaseSpectrogram phase{data, cfg};

  CHECK(band_slice(phase, Band::To2kHz).cols() == 96);
  CHECK(band_slice(phase, Band::To4kHz).cols() == 128);
  CHECK(band_slice(phase, Band::Full) == data);
  CHECK(band_slice(phase, Band::To4kHz) == data.leftCols(128));

  const RealMatrix predicted = RealMatrix::Constant(3, 96, 0.5);
  const PhaseSpectrogram merged = band_merge(predicted, phase);
  CHECK(merged.data.leftCols(96) == predicted);
  CHECK(merged.data.rightCols(257 - 96) == data.rightCols(257 - 96));
  CHECK(band_merge(band_slice(phase, Band::To4kHz), phase).data == data);
  CHECK(band_merge(data, phase).data == data);

  CHECK_THROWS_AS(band_merge(RealMatrix(2, 96), phase), ShapeError);
  const PhaseSpectrogram narrow{RealMatrix(3, 50), cfg};
  CHECK_THROWS_AS(band_slice(narrow, Band::To2kHz), ShapeError);
}

TEST_CASE("band helpers")
{
  CHECK(band_dim(Band::To2kHz) == 96);
  CHECK(band_dim(Band::To4kHz) == 128);
  CHECK(band_dim(Band::Full) == 257);
  CHECK(band_from_dim(128) == Band::To4kHz);
  CHECK_THROWS_AS((void)band_from_dim(100), DomainError);
  CHECK(parse_band("2k") == Band::To2kHz);
  CHECK(parse_band("8k") == Band::Full);
  CHECK(band_name(Band::To4kHz) == "4k");
  CHECK_THROWS_AS((void)parse_band("16k"), ConfigError);
}

TEST_CASE("dataset assembly")
{
  const StftConfig cfg;
  const std::vector<Utterance> utts{{"a", test::harmonics_plus_noise(0.3, 1)},
                                    {"b", test::chirp(200.0, 2000.0, 0.2)}};
  const auto ds = assemble_dataset(utts, cfg, Band::To4kHz);
  const Index ta = cfg.frame_count(utts[0].samples.size());
  const Index tb = cfg.frame_count(utts[1].samples.size());
  REQUIRE(ds.size() == ta + tb);
  CHECK(ds.inputs.cols() == 1285);
  CHECK(ds.targets.cols() == 128);
  CHECK(ds.band == Band::To4kHz);
  REQUIRE(ds.provenance.size() == static_cast<std::size_t>(ta + tb));
  CHECK(ds.provenance.front().utterance == "a");
  CHECK(ds.provenance[static_cast<std::size_t>(ta)].utterance == "b");
  CHECK(ds.provenance[static_cast<std::size_t>(ta)].frame == 0);
  CHECK(ds.targets.maxCoeff() <= std::numbers::pi);
  CHECK(ds.targets.minCoeff() > -std::numbers::pi);
  CHECK(std::abs(ds.inputs.col(700).mean()) < 1e-10);

  // Targets equal the wrapped phase of the second utterance.
  const auto parts = polar_split(stft(utts[1].samples, cfg));
  CHECK(ds.targets.bottomRows(tb) == parts.phase.data.leftCols(128));

  const auto parallel = assemble_dataset(utts, cfg, Band::To4kHz, 4);
  CHECK(parallel.inputs == ds.inputs);
  CHECK(parallel.targets == ds.targets);

  const auto reused = assemble_dataset(std::span(utts).subspan(1), cfg, Band::To4kHz, ds.stats);
  CHECK(reused.inputs == ds.inputs.bottomRows(tb));

  CHECK_THROWS_AS(assemble_dataset(std::span<const Utterance>{}, cfg, Band::Full), SizeError);
}

TEST_CASE("dataset cache round trip and corruption")
{
  const StftConfig cfg;
  const std::vector<Utterance> utts{{"a", test::harmonics_plus_noise(0.2, 3)}};
  const auto ds = assemble_dataset(utts, cfg, Band::To2kHz);
  const auto path = temp_file("cache.vmds");
  save_dataset(path, ds);
  const auto back = load_dataset(path);
  CHECK(back.inputs == ds.inputs);
  CHECK(back.targets == ds.targets);
  CHECK(back.band == Band::To2kHz);
  CHECK(back.stats.mean == ds.stats.mean);
  CHECK(back.stats.std == ds.stats.std);

  std::string bytes;
  {
    std::ifstream in(path, std::ios::binary);
    bytes.assign(std::istreambuf_iterator<char>(in), {});
  }
  auto write = [&](const std::string& b) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out.write(b.data(), static_cast<std::streamsize>(b.size()));
  };
  write(bytes.substr(0, bytes.size() - 5));
  CHECK_THROWS_AS(load_dataset(path), TruncatedError);
  write("XXXX" + bytes.substr(4));
  CHECK_THROWS_AS(load_dataset(path), FormatError);
  std::string bumped = bytes;
  bumped[4] = 9;
  write(bumped);
  CHECK_THROWS_AS(load_dataset(path), VersionError);
  write(bytes + "x");
  CHECK_THROWS_AS(load_dataset(path), FormatError);
  std::filesystem::remove(path);
  CHECK_THROWS_AS(load_dataset(path), IoError);
}
