#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "vmphase/band.hpp"
#include "vmphase/features.hpp"
#include "vmphase/losses.hpp"
#include "vmphase/network.hpp"

namespace vmphase {

struct TrainConfig {
  std::size_t epochs = 20;
  std::size_t batch_frames = 256;
  std::uint64_t seed = 0;
  LossConfig loss;
  Band band = Band::Full;
  std::vector<Index> hidden{1024, 1024, 1024};
  double learning_rate = 0.001;
  double epsilon = 1e-8;
};

struct TrainResult {
  GluNetwork network;
  FeatureStats stats;
  /// Mean per-frame training loss of each epoch, measured during the epoch.
  std::vector<double> history;
};

/// Per-epoch callback: (epoch index, mean loss).
using EpochCallback = std::function<void(std::size_t, double)>;

/// Mini-batch AdaGrad on a normalized dataset. Frames are reshuffled every
/// epoch from `config.seed`; the network is initialized from the same seed.
TrainResult train(const FrameDataset& dataset, const TrainConfig& config,
                  const EpochCallback& on_epoch = {});

/// Continues training `network` in place (fresh optimizer state).
std::vector<double> train_network(GluNetwork& network, const FrameDataset& dataset,
                                  const TrainConfig& config,
                                  const EpochCallback& on_epoch = {});

/// Mean per-frame loss of the network over the whole dataset.
double mean_loss(const GluNetwork& network, const FrameDataset& dataset,
                 const LossConfig& loss);

/// Predicted band phases (frames x output_dim) for one utterance.
RealMatrix predict_phase(const GluNetwork& network, const FeatureStats& stats,
                         const AmplitudeSpectrogram& amp);

} // namespace vmphase
