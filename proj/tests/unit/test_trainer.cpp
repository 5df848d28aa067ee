#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "vmphase/error.hpp"
#include "vmphase/trainer.hpp"

using namespace vmphase;

namespace {

FrameDataset toy_dataset(Index frames, Index in, Index out, std::uint64_t seed)
{
  Rng rng(seed);
  FrameDataset ds;
  ds.band = Band::To2kHz;
  ds.inputs.resize(frames, in);
  ds.targets.resize(frames, out);
  // Smooth target function of the inputs, so it is learnable.
  for (Index t = 0; t < frames; ++t) {
    for (Index c = 0; c < in; ++c)
      ds.inputs(t, c) = rng.uniform(-1.0, 1.0);
    for (Index f = 0; f < out; ++f)
      ds.targets(t, f) = 0.8 * ds.inputs(t, f % in) - 0.4 * ds.inputs(t, (f + 1) % in);
  }
  ds.stats.mean = Eigen::VectorXd::Zero(in);
  ds.stats.std = Eigen::VectorXd::Ones(in);
  return ds;
}

TrainConfig small_config(std::size_t epochs)
{
  TrainConfig cfg;
  cfg.epochs = epochs;
  cfg.batch_frames = 32;
  cfg.seed = 11;
  cfg.band = Band::To2kHz;
  cfg.hidden = {32};
  cfg.learning_rate = 0.05;
  return cfg;
}

} // namespace

TEST_CASE("defaults")
{
  const TrainConfig cfg;
  CHECK(cfg.epochs == 20);
  CHECK(cfg.batch_frames == 256);
  CHECK(cfg.hidden == std::vector<Index>{1024, 1024, 1024});
  CHECK(cfg.learning_rate == 0.001);
  CHECK(cfg.epsilon == 1e-8);
  CHECK(cfg.loss.kind == LossKind::MultiTask);
  CHECK(cfg.loss.alpha == 0.1);
}

TEST_CASE("history records one mean loss per epoch")
{
  const auto ds = toy_dataset(100, 4, 96, 1);
  std::vector<std::size_t> seen;
  const auto result = train(ds, small_config(3), [&](std::size_t e, double) { seen.push_back(e); });
  CHECK(result.history.size() == 3);
  CHECK(seen == std::vector<std::size_t>{0, 1, 2});
  CHECK(result.network.output_dim() == 96);
  CHECK(result.stats.mean == ds.stats.mean);
}

TEST_CASE("a single repeated frame is fitted monotonically")
{
  auto ds = toy_dataset(1, 4, 96, 2);
  auto cfg = small_config(1);
  cfg.learning_rate = 0.001;
  auto net = init_network(4, 96, cfg.hidden, 3);
  double prev = mean_loss(net, ds, cfg.loss);
  for (int step = 0; step < 30; ++step) {
    train_network(net, ds, cfg);
    const double now = mean_loss(net, ds, cfg.loss);
    CHECK(now <= prev + 1e-12);
    prev = now;
  }
}

TEST_CASE("toy problem halves the excess loss")
{
  // Losses are negative, so compare the excess over the attainable minimum.
  const auto ds = toy_dataset(200, 4, 96, 4);
  auto cfg = small_config(50);
  const LossConfig& loss = cfg.loss;
  const double floor = minimum_loss(96, loss);
  const auto initial = init_network(4, 96, cfg.hidden, cfg.seed);
  const double before = mean_loss(initial, ds, loss) - floor;
  const auto result = train(ds, cfg);
  const double after = mean_loss(result.network, ds, loss) - floor;
  CHECK(after < 0.5 * before);
  CHECK(result.history.back() < result.history.front());
}

TEST_CASE("training is deterministic for a seed")
{
  const auto ds = toy_dataset(80, 4, 96, 5);
  const auto a = train(ds, small_config(4));
  const auto b = train(ds, small_config(4));
  auto other_cfg = small_config(4);
  other_cfg.seed = 12;
  const auto c = train(ds, other_cfg);
  CHECK(a.history == b.history);
  CHECK(a.network.output_weight == b.network.output_weight);
  CHECK(a.network.layers[0].gate_weight == b.network.layers[0].gate_weight);
  CHECK(a.history != c.history);
}

TEST_CASE("invalid inputs")
{
  FrameDataset empty;
  CHECK_THROWS_AS(train(empty, small_config(1)), SizeError);
  const auto ds = toy_dataset(10, 4, 96, 6);
  auto cfg = small_config(1);
  cfg.batch_frames = 0;
  CHECK_THROWS_AS(train(ds, cfg), DomainError);
  cfg = small_config(1);
  cfg.band = Band::To4kHz;
  CHECK_THROWS_AS(train(ds, cfg), ShapeError);
}

TEST_CASE("predict_phase returns frames by band width")
{
  const StftConfig stft_cfg;
  const std::vector<Utterance> utts{{"a", test::harmonics_plus_noise(0.25, 1)}};
  const auto ds = assemble_dataset(utts, stft_cfg, Band::To4kHz);
  TrainConfig cfg;
  cfg.epochs = 1;
  cfg.band = Band::To4kHz;
  cfg.hidden = {8};
  const auto result = train(ds, cfg);
  const auto parts = polar_split(stft(utts[0].samples, stft_cfg));
  const RealMatrix pred = predict_phase(result.network, result.stats, parts.amplitude);
  CHECK(pred.rows() == parts.amplitude.frames());
  CHECK(pred.cols() == 128);
  const Matrix direct = forward(result.network, ds.inputs.transpose());
  CHECK((pred - direct.transpose()).cwiseAbs().maxCoeff() < 1e-12);
}
