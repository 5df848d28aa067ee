#include "vmphase/network.hpp"

#include <cmath>
#include <string>

#include "vmphase/error.hpp"
#include "vmphase/random.hpp"

namespace vmphase {
namespace {

void fill_uniform(Matrix& m, double limit, Rng& rng)
{
  // Row-major fill order keeps the draw sequence independent of storage.
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      m(r, c) = rng.uniform(-limit, limit);
}

double glorot_limit(Eigen::Index fan_in, Eigen::Index fan_out)
{
  return std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
}

Matrix sigmoid(const Matrix& z)
{
  return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

std::span<double> span_of(Matrix& m) { return {m.data(), static_cast<std::size_t>(m.size())}; }
std::span<double> span_of(Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

} // namespace

Eigen::Index GluNetwork::input_dim() const noexcept
{
  return layers.empty() ? output_weight.cols() : layers.front().input_dim();
}

std::vector<Eigen::Index> GluNetwork::hidden_dims() const
{
  std::vector<Eigen::Index> dims;
  dims.reserve(layers.size());
  for (const auto& l : layers)
    dims.push_back(l.output_dim());
  return dims;
}

std::size_t GluNetwork::parameter_count() const noexcept
{
  std::size_t n = static_cast<std::size_t>(output_weight.size() + output_bias.size());
  for (const auto& l : layers)
    n += static_cast<std::size_t>(l.value_weight.size() + l.value_bias.size() +
                                  l.gate_weight.size() + l.gate_bias.size());
  return n;
}

void GluNetwork::validate() const
{
  Eigen::Index dim = input_dim();
  for (std::size_t i = 0; i < layers.size(); ++i) {
    const auto& l = layers[i];
    const std::string name = "layer " + std::to_string(i);
    if (l.value_weight.cols() != dim || l.gate_weight.cols() != dim)
      throw ShapeError(name + ": input dimension does not chain");
    if (l.gate_weight.rows() != l.value_weight.rows() ||
        l.value_bias.size() != l.value_weight.rows() ||
        l.gate_bias.size() != l.value_weight.rows())
      throw ShapeError(name + ": value/gate shapes disagree");
    dim = l.output_dim();
  }
  if (output_weight.cols() != dim || output_bias.size() != output_weight.rows())
    throw ShapeError("output layer: shape does not chain");
}

GluNetwork init_network(Eigen::Index input_dim, Eigen::Index output_dim,
                        std::span<const Eigen::Index> hidden, std::uint64_t seed)
{
  if (input_dim <= 0 || output_dim <= 0)
    throw DomainError("network dimensions must be positive");
  Rng rng(seed);
  GluNetwork net;
  Eigen::Index fan_in = input_dim;
  for (Eigen::Index units : hidden) {
    if (units <= 0)
      throw DomainError("hidden layer sizes must be positive");
    GluLayer layer;
    const double limit = glorot_limit(fan_in, units);
    layer.value_weight.resize(units, fan_in);
    layer.gate_weight.resize(units, fan_in);
    fill_uniform(layer.value_weight, limit, rng);
    fill_uniform(layer.gate_weight, limit, rng);
    layer.value_bias = Vector::Zero(units);
    layer.gate_bias = Vector::Zero(units);
    net.layers.push_back(std::move(layer));
    fan_in = units;
  }
  net.output_weight.resize(output_dim, fan_in);
  fill_uniform(net.output_weight, glorot_limit(fan_in, output_dim), rng);
  net.output_bias = Vector::Zero(output_dim);
  return net;
}

GluNetwork zeros_like(const GluNetwork& net)
{
  GluNetwork z;
  for (const auto& l : net.layers)
    z.layers.push_back({Matrix::Zero(l.value_weight.rows(), l.value_weight.cols()),
                        Vector::Zero(l.value_bias.size()),
                        Matrix::Zero(l.gate_weight.rows(), l.gate_weight.cols()),
                        Vector::Zero(l.gate_bias.size())});
  z.output_weight = Matrix::Zero(net.output_weight.rows(), net.output_weight.cols());
  z.output_bias = Vector::Zero(net.output_bias.size());
  return z;
}

std::vector<std::span<double>> parameter_blocks(GluNetwork& net)
{
  std::vector<std::span<double>> blocks;
  for (auto& l : net.layers) {
    blocks.push_back(span_of(l.value_weight));
    blocks.push_back(span_of(l.value_bias));
    blocks.push_back(span_of(l.gate_weight));
    blocks.push_back(span_of(l.gate_bias));
  }
  blocks.push_back(span_of(net.output_weight));
  blocks.push_back(span_of(net.output_bias));
  return blocks;
}

std::vector<std::span<const double>> parameter_blocks(const GluNetwork& net)
{
  auto mutable_blocks = parameter_blocks(const_cast<GluNetwork&>(net));
  return {mutable_blocks.begin(), mutable_blocks.end()};
}

Matrix forward(const GluNetwork& net, const Matrix& inputs)
{
  if (inputs.rows() != net.input_dim())
    throw ShapeError("forward: input has " + std::to_string(inputs.rows()) +
                     " rows, network expects " + std::to_string(net.input_dim()));
  Matrix h = inputs;
  for (const auto& l : net.layers) {
    Matrix value = l.value_weight * h;
    value.colwise() += l.value_bias;
    Matrix gate = l.gate_weight * h;
    gate.colwise() += l.gate_bias;
    h = value.cwiseProduct(sigmoid(gate));
  }
  Matrix out = net.output_weight * h;
  out.colwise() += net.output_bias;
  return out;
}

Gradients backward(const GluNetwork& net, const Matrix& inputs, const Matrix& targets,
                   const LossConfig& loss)
{
  if (inputs.rows() != net.input_dim())
    throw ShapeError("backward: input dimension mismatch");
  if (targets.rows() != net.output_dim() || targets.cols() != inputs.cols())
    throw ShapeError("backward: target shape mismatch");
  const Eigen::Index batch = inputs.cols();
  if (batch == 0)
    throw ShapeError("backward: empty batch");

  struct Cache {
    Matrix value;
    Matrix gate;
  };
  std::vector<Cache> cache;
  cache.reserve(net.layers.size());
  std::vector<Matrix> activations;
  activations.reserve(net.layers.size() + 1);
  activations.push_back(inputs);

  for (const auto& l : net.layers) {
    const Matrix& h = activations.back();
    Cache c;
    c.value.noalias() = l.value_weight * h;
    c.value.colwise() += l.value_bias;
    Matrix gate_pre = l.gate_weight * h;
    gate_pre.colwise() += l.gate_bias;
    c.gate = sigmoid(gate_pre);
    activations.push_back(c.value.cwiseProduct(c.gate));
    cache.push_back(std::move(c));
  }
  Matrix out = net.output_weight * activations.back();
  out.colwise() += net.output_bias;

  Gradients result{0.0, zeros_like(net)};
  Matrix d_out = Matrix::Zero(out.rows(), batch);
  const double scale = 1.0 / static_cast<double>(batch);
  const auto rows = static_cast<std::size_t>(out.rows());
  double total = 0.0;
  for (Eigen::Index b = 0; b < batch; ++b)
    total += accumulate_loss_gradient({targets.col(b).data(), rows},
                                      {out.col(b).data(), rows}, loss, scale,
                                      {d_out.col(b).data(), rows});
  result.loss = total * scale;

  GluNetwork& g = result.grad;
  g.output_weight.noalias() = d_out * activations.back().transpose();
  g.output_bias = d_out.rowwise().sum();
  Matrix d_h = net.output_weight.transpose() * d_out;

  for (std::size_t i = net.layers.size(); i-- > 0;) {
    const auto& l = net.layers[i];
    const Cache& c = cache[i];
    const Matrix& h_in = activations[i];
    const Matrix d_value = d_h.cwiseProduct(c.gate);
    const Matrix d_gate = d_h.cwiseProduct(c.value)
                              .cwiseProduct(c.gate)
                              .cwiseProduct((1.0 - c.gate.array()).matrix());
    auto& gl = g.layers[i];
    gl.value_weight.noalias() = d_value * h_in.transpose();
    gl.value_bias = d_value.rowwise().sum();
    gl.gate_weight.noalias() = d_gate * h_in.transpose();
    gl.gate_bias = d_gate.rowwise().sum();
    if (i > 0) {
      d_h.noalias() = l.value_weight.transpose() * d_value;
      d_h.noalias() += l.gate_weight.transpose() * d_gate;
    }
  }
  return result;
}

} // namespace vmphase
