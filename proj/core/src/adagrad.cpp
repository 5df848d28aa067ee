#include "vmphase/adagrad.hpp"

#include <cmath>

#include "vmphase/error.hpp"

namespace vmphase {

AdaGradState AdaGradState::for_network(const GluNetwork& net, double learning_rate,
                                       double epsilon)
{
  if (!(learning_rate > 0.0) || !(epsilon > 0.0))
    throw DomainError("AdaGrad learning rate and epsilon must be positive");
  return {learning_rate, epsilon, zeros_like(net)};
}

void adagrad_update(std::span<double> params, std::span<const double> grads,
                    std::span<double> accumulators, double learning_rate, double epsilon)
{
  if (grads.size() != params.size() || accumulators.size() != params.size())
    throw ShapeError("adagrad_update: block sizes differ");
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grads[i];
    accumulators[i] += g * g;
    params[i] -= learning_rate * g / (std::sqrt(accumulators[i]) + epsilon);
  }
}

void adagrad_step(GluNetwork& net, const GluNetwork& grads, AdaGradState& state)
{
  auto params = parameter_blocks(net);
  const auto g = parameter_blocks(grads);
  auto acc = parameter_blocks(state.accumulators);
  if (g.size() != params.size() || acc.size() != params.size())
    throw ShapeError("adagrad_step: gradient/state layer count differs from network");
  for (std::size_t b = 0; b < params.size(); ++b)
    adagrad_update(params[b], g[b], acc[b], state.learning_rate, state.epsilon);
}

} // namespace vmphase
