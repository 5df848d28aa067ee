#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "vmphase/losses.hpp"

namespace vmphase {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Gated linear unit: (W_v x + b_v) * sigmoid(W_g x + b_g).
struct GluLayer {
  Matrix value_weight;
  Vector value_bias;
  Matrix gate_weight;
  Vector gate_bias;

  [[nodiscard]] Eigen::Index input_dim() const noexcept { return value_weight.cols(); }
  [[nodiscard]] Eigen::Index output_dim() const noexcept { return value_weight.rows(); }
};

/// Stack of GLU hidden layers followed by a linear output head. The same
/// type stores gradients and optimizer accumulators.
struct GluNetwork {
  std::vector<GluLayer> layers;
  Matrix output_weight;
  Vector output_bias;

  [[nodiscard]] Eigen::Index input_dim() const noexcept;
  [[nodiscard]] Eigen::Index output_dim() const noexcept { return output_weight.rows(); }
  [[nodiscard]] std::vector<Eigen::Index> hidden_dims() const;
  [[nodiscard]] std::size_t parameter_count() const noexcept;

  /// Throws ShapeError unless consecutive layer dimensions chain.
  void validate() const;
};

/// Glorot-uniform weights on [-sqrt(6/(fan_in+fan_out)), +...], zero biases.
/// Bit-identical for a given seed.
GluNetwork init_network(Eigen::Index input_dim, Eigen::Index output_dim,
                        std::span<const Eigen::Index> hidden, std::uint64_t seed);

/// Same shapes as `net`, every entry zero.
GluNetwork zeros_like(const GluNetwork& net);

/// Every parameter block in a fixed order: per layer value W, value b,
/// gate W, gate b; then output W, output b.
std::vector<std::span<double>> parameter_blocks(GluNetwork& net);
std::vector<std::span<const double>> parameter_blocks(const GluNetwork& net);

/// Columns of `inputs` are frames. Returns output_dim x frames.
Matrix forward(const GluNetwork& net, const Matrix& inputs);

struct Gradients {
  /// Mean of the per-frame loss over the batch.
  double loss = 0.0;
  GluNetwork grad;
};

/// Exact reverse-mode gradient of mean_t total_loss(target_t, G(x_t)).
/// `inputs` and `targets` hold one frame per column.
Gradients backward(const GluNetwork& net, const Matrix& inputs, const Matrix& targets,
                   const LossConfig& loss);

} // namespace vmphase
