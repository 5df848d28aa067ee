#pragma once

#include <span>

#include "vmphase/network.hpp"

namespace vmphase {

struct AdaGradState {
  double learning_rate = 0.001;
  double epsilon = 1e-8;
  /// Running sums of squared gradients, shaped like the network.
  GluNetwork accumulators;

  static AdaGradState for_network(const GluNetwork& net, double learning_rate = 0.001,
                                  double epsilon = 1e-8);
};

/// acc += g^2; theta -= lr * g / (sqrt(acc) + eps), element-wise.
void adagrad_update(std::span<double> params, std::span<const double> grads,
                    std::span<double> accumulators, double learning_rate, double epsilon);

/// Applies adagrad_update() to every parameter block. Throws ShapeError when
/// the gradient or state shapes differ from the network.
void adagrad_step(GluNetwork& net, const GluNetwork& grads, AdaGradState& state);

} // namespace vmphase
