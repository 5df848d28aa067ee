#include "vmphase/trainer.hpp"

#include <numeric>

#include "vmphase/adagrad.hpp"
#include "vmphase/error.hpp"
#include "vmphase/random.hpp"

namespace vmphase {
namespace {

void check_dataset(const FrameDataset& dataset, const GluNetwork& network)
{
  if (dataset.size() == 0)
    throw SizeError("training dataset is empty");
  if (dataset.targets.rows() != dataset.size())
    throw ShapeError("dataset inputs and targets have different frame counts");
  if (dataset.inputs.cols() != network.input_dim())
    throw ShapeError("dataset feature width " + std::to_string(dataset.inputs.cols()) +
                     " != network input " + std::to_string(network.input_dim()));
  if (dataset.targets.cols() != network.output_dim())
    throw ShapeError("dataset target width " + std::to_string(dataset.targets.cols()) +
                     " != network output " + std::to_string(network.output_dim()));
}

void gather(const RealMatrix& rows, std::span<const std::size_t> index, Matrix& out)
{
  out.resize(rows.cols(), static_cast<Index>(index.size()));
  for (std::size_t j = 0; j < index.size(); ++j)
    out.col(static_cast<Index>(j)) = rows.row(static_cast<Index>(index[j])).transpose();
}

} // namespace

std::vector<double> train_network(GluNetwork& network, const FrameDataset& dataset,
                                  const TrainConfig& config, const EpochCallback& on_epoch)
{
  check_dataset(dataset, network);
  if (config.batch_frames == 0)
    throw DomainError("batch_frames must be positive");

  AdaGradState state =
      AdaGradState::for_network(network, config.learning_rate, config.epsilon);
  Rng rng(mix_seed(config.seed, 0x5348'5546ULL));
  const auto n = static_cast<std::size_t>(dataset.size());
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});

  std::vector<double> history;
  history.reserve(config.epochs);
  Matrix x;
  Matrix y;
  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = n; i > 1; --i)
      std::swap(order[i - 1], order[rng.below(i)]);

    double weighted = 0.0;
    for (std::size_t start = 0; start < n; start += config.batch_frames) {
      const std::size_t count = std::min(config.batch_frames, n - start);
      const std::span<const std::size_t> batch(order.data() + start, count);
      gather(dataset.inputs, batch, x);
      gather(dataset.targets, batch, y);
      const Gradients g = backward(network, x, y, config.loss);
      weighted += g.loss * static_cast<double>(count);
      adagrad_step(network, g.grad, state);
    }
    history.push_back(weighted / static_cast<double>(n));
    if (on_epoch)
      on_epoch(epoch, history.back());
  }
  return history;
}

TrainResult train(const FrameDataset& dataset, const TrainConfig& config,
                  const EpochCallback& on_epoch)
{
  if (dataset.size() == 0)
    throw SizeError("training dataset is empty");
  TrainResult result;
  result.network = init_network(dataset.inputs.cols(), band_dim(config.band), config.hidden,
                                config.seed);
  result.stats = dataset.stats;
  result.history = train_network(result.network, dataset, config, on_epoch);
  return result;
}

double mean_loss(const GluNetwork& network, const FrameDataset& dataset,
                 const LossConfig& loss)
{
  check_dataset(dataset, network);
  constexpr Index chunk = 1024;
  double sum = 0.0;
  const auto out_dim = static_cast<std::size_t>(network.output_dim());
  for (Index start = 0; start < dataset.size(); start += chunk) {
    const Index count = std::min(chunk, dataset.size() - start);
    const Matrix x = dataset.inputs.middleRows(start, count).transpose();
    const Matrix y = dataset.targets.middleRows(start, count).transpose();
    const Matrix out = forward(network, x);
    for (Index b = 0; b < count; ++b)
      sum += total_loss({y.col(b).data(), out_dim}, {out.col(b).data(), out_dim}, loss);
  }
  return sum / static_cast<double>(dataset.size());
}

RealMatrix predict_phase(const GluNetwork& network, const FeatureStats& stats,
                         const AmplitudeSpectrogram& amp)
{
  const RealMatrix features = apply_stats(utterance_features(amp), stats);
  const Matrix out = forward(network, features.transpose());
  return out.transpose();
}

} // namespace vmphase
