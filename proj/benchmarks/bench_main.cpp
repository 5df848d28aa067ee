#include <benchmark/benchmark.h>

#include <numbers>

#include "vmphase/features.hpp"
#include "vmphase/griffin_lim.hpp"
#include "vmphase/network.hpp"
#include "vmphase/random.hpp"
#include "vmphase/synth.hpp"

using namespace vmphase;

namespace {

std::vector<double> utterance(double seconds)
{
  SynthParams p;
  p.seconds = seconds;
  return synth_utterance(p, 1);
}

Matrix uniform_matrix(Index rows, Index cols, double lo, double hi, std::uint64_t seed)
{
  Rng rng(seed);
  Matrix m(rows, cols);
  for (Index c = 0; c < cols; ++c)
    for (Index r = 0; r < rows; ++r)
      m(r, c) = rng.uniform(lo, hi);
  return m;
}

void BM_Stft(benchmark::State& state)
{
  const auto x = utterance(static_cast<double>(state.range(0)));
  const StftConfig cfg;
  for (auto _ : state)
    benchmark::DoNotOptimize(stft(x, cfg));
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(x.size()));
}
BENCHMARK(BM_Stft)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);

void BM_Istft(benchmark::State& state)
{
  const auto spec = stft(utterance(2.0), StftConfig{});
  for (auto _ : state)
    benchmark::DoNotOptimize(istft(spec));
}
BENCHMARK(BM_Istft)->Unit(benchmark::kMillisecond);

void BM_GriffinLim(benchmark::State& state)
{
  const auto parts = polar_split(stft(utterance(2.0), StftConfig{}));
  const GriffinLimConfig cfg{static_cast<std::size_t>(state.range(0))};
  for (auto _ : state)
    benchmark::DoNotOptimize(griffin_lim(parts.amplitude, 3, cfg));
}
BENCHMARK(BM_GriffinLim)->Arg(10)->Arg(100)->Unit(benchmark::kMillisecond);

void BM_Features(benchmark::State& state)
{
  const auto parts = polar_split(stft(utterance(2.0), StftConfig{}));
  for (auto _ : state)
    benchmark::DoNotOptimize(utterance_features(parts.amplitude));
}
BENCHMARK(BM_Features)->Unit(benchmark::kMillisecond);

void network_args(benchmark::internal::Benchmark* b)
{
  b->Args({256, 256})->Args({1024, 256})->Unit(benchmark::kMillisecond);
}

void BM_Forward(benchmark::State& state)
{
  const Index width = state.range(0);
  const Index batch = state.range(1);
  const std::vector<Index> hidden(3, width);
  const auto net = init_network(1285, 257, hidden, 0);
  const Matrix x = uniform_matrix(1285, batch, -1.0, 1.0, 1);
  for (auto _ : state)
    benchmark::DoNotOptimize(forward(net, x));
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_Forward)->Apply(network_args);

void BM_Backward(benchmark::State& state)
{
  const Index width = state.range(0);
  const Index batch = state.range(1);
  const std::vector<Index> hidden(3, width);
  const auto net = init_network(1285, 257, hidden, 0);
  const Matrix x = uniform_matrix(1285, batch, -1.0, 1.0, 1);
  const Matrix y = uniform_matrix(257, batch, -std::numbers::pi, std::numbers::pi, 2);
  for (auto _ : state)
    benchmark::DoNotOptimize(backward(net, x, y, LossConfig{}));
  state.SetItemsProcessed(state.iterations() * batch);
}
BENCHMARK(BM_Backward)->Apply(network_args);

} // namespace
BENCHMARK_MAIN();
