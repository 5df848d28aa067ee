#include <doctest.h>

#include <cmath>
#include <numbers>

#include "test_support.hpp"
#include "vmphase/error.hpp"
#include "vmphase/network.hpp"

using namespace vmphase;

namespace {

double batch_loss(const GluNetwork& net, const Matrix& x, const Matrix& y,
                  const LossConfig& cfg)
{
  const Matrix out = forward(net, x);
  double sum = 0.0;
  const auto rows = static_cast<std::size_t>(out.rows());
  for (Index b = 0; b < out.cols(); ++b)
    sum += total_loss({y.col(b).data(), rows}, {out.col(b).data(), rows}, cfg);
  return sum / static_cast<double>(out.cols());
}

// Central differences over every parameter; returns max |a - n| / max |n|.
double gradient_check(GluNetwork net, const Matrix& x, const Matrix& y, const LossConfig& cfg,
                      double h)
{
  const Gradients analytic = backward(net, x, y, cfg);
  auto params = parameter_blocks(net);
  const auto grads = parameter_blocks(analytic.grad);
  double diff = 0.0;
  double scale = 0.0;
  for (std::size_t b = 0; b < params.size(); ++b) {
    for (std::size_t i = 0; i < params[b].size(); ++i) {
      const double keep = params[b][i];
      params[b][i] = keep + h;
      const double up = batch_loss(net, x, y, cfg);
      params[b][i] = keep - h;
      const double down = batch_loss(net, x, y, cfg);
      params[b][i] = keep;
      const double numeric = (up - down) / (2.0 * h);
      diff = std::max(diff, std::abs(numeric - grads[b][i]));
      scale = std::max(scale, std::abs(numeric));
    }
  }
  return diff / scale;
}

Matrix random_matrix(Index rows, Index cols, Rng& rng, double lo, double hi)
{
  Matrix m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r)
      m(r, c) = rng.uniform(lo, hi);
  return m;
}

void randomize_biases(GluNetwork& net, Rng& rng)
{
  for (auto& l : net.layers) {
    for (Index i = 0; i < l.value_bias.size(); ++i) {
      l.value_bias(i) = rng.uniform(-0.5, 0.5);
      l.gate_bias(i) = rng.uniform(-0.5, 0.5);
    }
  }
  for (Index i = 0; i < net.output_bias.size(); ++i)
    net.output_bias(i) = rng.uniform(-0.5, 0.5);
}

} // namespace

TEST_CASE("initialization is deterministic with zero biases")
{
  const std::vector<Index> hidden{8, 6};
  const auto a = init_network(5, 3, hidden, 42);
  const auto b = init_network(5, 3, hidden, 42);
  const auto c = init_network(5, 3, hidden, 43);
  const auto pa = parameter_blocks(a);
  const auto pb = parameter_blocks(b);
  const auto pc = parameter_blocks(c);
  bool same = true;
  bool differs = false;
  for (std::size_t i = 0; i < pa.size(); ++i)
    for (std::size_t j = 0; j < pa[i].size(); ++j) {
      same = same && pa[i][j] == pb[i][j];
      differs = differs || pa[i][j] != pc[i][j];
    }
  CHECK(same);
  CHECK(differs);
  for (const auto& l : a.layers) {
    CHECK(l.value_bias.isZero(0.0));
    CHECK(l.gate_bias.isZero(0.0));
  }
  CHECK(a.output_bias.isZero(0.0));
  CHECK(a.hidden_dims() == hidden);
  CHECK(a.input_dim() == 5);
  CHECK(a.output_dim() == 3);
}

TEST_CASE("glorot range and empirical mean of a 1024x1285 matrix")
{
  const std::vector<Index> hidden{1024};
  const auto net = init_network(1285, 4, hidden, 7);
  const Matrix& w = net.layers[0].value_weight;
  const double limit = std::sqrt(6.0 / (1285 + 1024));
  CHECK(w.cwiseAbs().maxCoeff() <= limit);
  const double n = static_cast<double>(w.size());
  const double sd = limit / std::sqrt(3.0);
  CHECK(std::abs(w.mean()) < 3.0 * sd / std::sqrt(n));
}

TEST_CASE("default architecture chains 1285 -> 3x1024 -> 257")
{
  const std::vector<Index> hidden{1024, 1024, 1024};
  const auto net = init_network(1285, 257, hidden, 0);
  CHECK_NOTHROW(net.validate());
  CHECK(net.layers.size() == 3);
  CHECK(net.output_weight.rows() == 257);
  CHECK(net.output_weight.cols() == 1024);
}

TEST_CASE("forward special cases")
{
  Rng rng(1);
  const std::vector<Index> hidden{4};
  auto net = init_network(3, 2, hidden, 9);
  randomize_biases(net, rng);
  const Matrix x = random_matrix(3, 5, rng, -1, 1);

  SUBCASE("zero gate gives half the value path")
  {
    net.layers[0].gate_weight.setZero();
    net.layers[0].gate_bias.setZero();
    Matrix value = net.layers[0].value_weight * x;
    value.colwise() += net.layers[0].value_bias;
    Matrix expected = net.output_weight * (0.5 * value);
    expected.colwise() += net.output_bias;
    CHECK((forward(net, x) - expected).cwiseAbs().maxCoeff() < 1e-14);
  }
  SUBCASE("all-zero parameters give zero output")
  {
    for (auto block : parameter_blocks(net))
      std::fill(block.begin(), block.end(), 0.0);
    CHECK(forward(net, x).isZero(0.0));
  }
  SUBCASE("dimension mismatch")
  {
    CHECK_THROWS_AS(forward(net, Matrix::Zero(4, 1)), ShapeError);
  }
}

TEST_CASE("single GLU unit hand evaluation")
{
  GluNetwork net;
  net.layers.push_back({Matrix::Constant(1, 1, 2.0), Vector::Zero(1), Matrix::Constant(1, 1, 10.0),
                        Vector::Zero(1)});
  net.output_weight = Matrix::Constant(1, 1, 1.0);
  net.output_bias = Vector::Zero(1);
  const Matrix out = forward(net, Matrix::Constant(1, 1, 1.0));
  CHECK(out(0, 0) == doctest::Approx(1.999909).epsilon(1e-6));
  CHECK(out(0, 0) == doctest::Approx(2.0 / (1.0 + std::exp(-10.0))).epsilon(1e-15));
}

TEST_CASE("gates stay strictly inside (0, 1)")
{
  Rng rng(2);
  const std::vector<Index> hidden{16};
  const auto net = init_network(8, 2, hidden, 3);
  const Matrix x = random_matrix(8, 64, rng, -3, 3);
  Matrix gate = net.layers[0].gate_weight * x;
  gate.colwise() += net.layers[0].gate_bias;
  const Matrix s = gate.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
  CHECK(s.minCoeff() > 0.0);
  CHECK(s.maxCoeff() < 1.0);
}

TEST_CASE("backward matches central differences on a tiny network")
{
  Rng rng(3);
  const std::vector<Index> hidden{3};
  for (auto kind : {LossKind::PhaseOnly, LossKind::GroupDelayOnly, LossKind::MultiTask}) {
    double worst = 0.0;
    for (int draw = 0; draw < 50; ++draw) {
      auto net = init_network(4, 2, hidden, rng.next());
      randomize_biases(net, rng);
      const Matrix x = random_matrix(4, 3, rng, -2, 2);
      const Matrix y = random_matrix(2, 3, rng, -std::numbers::pi, std::numbers::pi);
      worst = std::max(worst, gradient_check(net, x, y, {kind, 0.1}, 1e-5));
    }
    CHECK(worst < 1e-4);
  }
}

TEST_CASE("backward matches central differences with stacked layers")
{
  Rng rng(4);
  const std::vector<Index> hidden{5, 4, 3};
  for (int draw = 0; draw < 10; ++draw) {
    auto net = init_network(6, 4, hidden, rng.next());
    randomize_biases(net, rng);
    const Matrix x = random_matrix(6, 4, rng, -2, 2);
    const Matrix y = random_matrix(4, 4, rng, -std::numbers::pi, std::numbers::pi);
    CHECK(gradient_check(net, x, y, {LossKind::MultiTask, 0.1}, 1e-5) < 1e-4);
  }
}

TEST_CASE("backward: linear head only")
{
  Rng rng(5);
  const std::vector<Index> none;
  auto net = init_network(3, 3, none, 1);
  const Matrix x = random_matrix(3, 2, rng, -1, 1);
  const Matrix y = random_matrix(3, 2, rng, -1, 1);
  CHECK(gradient_check(net, x, y, {LossKind::PhaseOnly}, 1e-5) < 1e-4);
}

TEST_CASE("perfect prediction is a stationary point")
{
  Rng rng(6);
  const std::vector<Index> hidden{5};
  auto net = init_network(4, 3, hidden, 2);
  const Matrix x = random_matrix(4, 6, rng, -1, 1);
  const Matrix y = forward(net, x);
  for (auto kind : {LossKind::PhaseOnly, LossKind::GroupDelayOnly, LossKind::MultiTask}) {
    const auto g = backward(net, x, y, {kind, 0.1});
    for (auto block : parameter_blocks(g.grad))
      for (double v : block)
        CHECK(v == 0.0);
  }
}

TEST_CASE("doubling alpha doubles the group-delay gradient component")
{
  Rng rng(7);
  const std::vector<Index> hidden{5};
  auto net = init_network(4, 6, hidden, 3);
  const Matrix x = random_matrix(4, 5, rng, -1, 1);
  const Matrix y = random_matrix(6, 5, rng, -std::numbers::pi, std::numbers::pi);
  const auto g0 = backward(net, x, y, {LossKind::MultiTask, 0.0});
  const auto g1 = backward(net, x, y, {LossKind::MultiTask, 0.1});
  const auto g2 = backward(net, x, y, {LossKind::MultiTask, 0.2});
  const auto b0 = parameter_blocks(g0.grad);
  const auto b1 = parameter_blocks(g1.grad);
  const auto b2 = parameter_blocks(g2.grad);
  for (std::size_t b = 0; b < b0.size(); ++b)
    for (std::size_t i = 0; i < b0[b].size(); ++i)
      CHECK(std::abs((b2[b][i] - b0[b][i]) - 2.0 * (b1[b][i] - b0[b][i])) < 1e-9);
}

TEST_CASE("backward validates shapes")
{
  const std::vector<Index> hidden{2};
  const auto net = init_network(3, 2, hidden, 0);
  CHECK_THROWS_AS(backward(net, Matrix::Zero(3, 2), Matrix::Zero(3, 2), {}), ShapeError);
  CHECK_THROWS_AS(backward(net, Matrix::Zero(2, 2), Matrix::Zero(2, 2), {}), ShapeError);
  CHECK_THROWS_AS(backward(net, Matrix::Zero(3, 0), Matrix::Zero(2, 0), {}), ShapeError);
}
