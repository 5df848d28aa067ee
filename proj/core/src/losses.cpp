#include "vmphase/losses.hpp"

#include <cmath>
#include <numbers>

#include "vmphase/error.hpp"

namespace vmphase {
namespace {

void require_equal(std::span<const double> a, std::span<const double> b,
                   const char* what)
{
  if (a.size() != b.size())
    throw ShapeError(std::string(what) + ": length mismatch (" +
                     std::to_string(a.size()) + " vs " + std::to_string(b.size()) +
                     ")");
}

void require_two_bins(std::size_t n, const char* what)
{
  if (n < 2)
    throw DomainError(std::string(what) + ": need at least 2 bins, got " +
                      std::to_string(n));
}

} // namespace

double bessel_i0(double x)
{
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 1000; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17)
      break;
  }
  return sum;
}

double vm_density(double y, const VonMises& dist)
{
  if (!std::isfinite(dist.kappa) || dist.kappa < 0.0)
    throw DomainError("von Mises concentration must be finite and >= 0");
  return std::exp(dist.kappa * std::cos(y - dist.mu)) /
         (2.0 * std::numbers::pi * bessel_i0(dist.kappa));
}

LossKind parse_loss_kind(std::string_view text)
{
  if (text == "ph")
    return LossKind::PhaseOnly;
  if (text == "gd")
    return LossKind::GroupDelayOnly;
  if (text == "phgd")
    return LossKind::MultiTask;
  throw ConfigError("unknown loss '" + std::string(text) + "' (expected ph, gd or phgd)");
}

std::string loss_kind_name(LossKind kind)
{
  switch (kind) {
  case LossKind::PhaseOnly:
    return "ph";
  case LossKind::GroupDelayOnly:
    return "gd";
  case LossKind::MultiTask:
    return "phgd";
  }
  return "phgd";
}

double phase_loss(std::span<const double> target, std::span<const double> predicted)
{
  require_equal(target, predicted, "phase_loss");
  double loss = 0.0;
  for (std::size_t f = 0; f < target.size(); ++f)
    loss -= std::cos(target[f] - predicted[f]);
  return loss;
}

std::vector<double> group_delay(std::span<const double> phase)
{
  require_two_bins(phase.size(), "group_delay");
  std::vector<double> gd(phase.size() - 1);
  for (std::size_t f = 0; f + 1 < phase.size(); ++f)
    gd[f] = -(phase[f + 1] - phase[f]);
  return gd;
}

double group_delay_loss(std::span<const double> target,
                        std::span<const double> predicted)
{
  require_equal(target, predicted, "group_delay_loss");
  require_two_bins(target.size(), "group_delay_loss");
  double loss = 0.0;
  for (std::size_t f = 0; f + 1 < target.size(); ++f) {
    const double gd_target = -(target[f + 1] - target[f]);
    const double gd_predicted = -(predicted[f + 1] - predicted[f]);
    loss -= std::cos(gd_target - gd_predicted);
  }
  return loss;
}

double total_loss(std::span<const double> target, std::span<const double> predicted,
                  const LossConfig& config)
{
  switch (config.kind) {
  case LossKind::PhaseOnly:
    return phase_loss(target, predicted);
  case LossKind::GroupDelayOnly:
    return group_delay_loss(target, predicted);
  case LossKind::MultiTask:
    return phase_loss(target, predicted) +
           config.alpha * group_delay_loss(target, predicted);
  }
  throw DomainError("unknown loss kind");
}

double minimum_loss(std::size_t bins, const LossConfig& config)
{
  const double ph = -static_cast<double>(bins);
  const double gd = bins >= 1 ? -static_cast<double>(bins - 1) : 0.0;
  switch (config.kind) {
  case LossKind::PhaseOnly:
    return ph;
  case LossKind::GroupDelayOnly:
    return gd;
  case LossKind::MultiTask:
    return ph + config.alpha * gd;
  }
  return ph;
}

double accumulate_loss_gradient(std::span<const double> target,
                                std::span<const double> predicted,
                                const LossConfig& config, double scale,
                                std::span<double> gradient)
{
  require_equal(target, predicted, "loss_gradient");
  if (gradient.size() != target.size())
    throw ShapeError("loss_gradient: gradient buffer has wrong length");

  const std::size_t n = target.size();
  const bool use_ph = config.kind != LossKind::GroupDelayOnly;
  const bool use_gd = config.kind != LossKind::PhaseOnly;
  const double gd_weight = config.kind == LossKind::MultiTask ? config.alpha : 1.0;
  if (use_gd)
    require_two_bins(n, "group_delay_loss");

  double ph = 0.0;
  double gd = 0.0;
  if (use_ph) {
    for (std::size_t f = 0; f < n; ++f) {
      const double d = target[f] - predicted[f];
      ph -= std::cos(d);
      gradient[f] -= scale * std::sin(d);
    }
  }
  if (use_gd) {
    // d_f = gd(target)_f - gd(predicted)_f, with gd(p)_f = p_f - p_{f+1}.
    // d(-cos d_f) / d p_f = -sin d_f and d / d p_{f+1} = +sin d_f.
    const double s = scale * gd_weight;
    for (std::size_t f = 0; f + 1 < n; ++f) {
      const double d = (target[f] - target[f + 1]) - (predicted[f] - predicted[f + 1]);
      gd -= std::cos(d);
      const double sd = std::sin(d);
      gradient[f] -= s * sd;
      gradient[f + 1] += s * sd;
    }
  }
  switch (config.kind) {
  case LossKind::PhaseOnly:
    return ph;
  case LossKind::GroupDelayOnly:
    return gd;
  case LossKind::MultiTask:
    return ph + config.alpha * gd;
  }
  return ph;
}

std::vector<double> loss_gradient(std::span<const double> target,
                                  std::span<const double> predicted,
                                  const LossConfig& config)
{
  std::vector<double> gradient(target.size(), 0.0);
  accumulate_loss_gradient(target, predicted, config, 1.0, gradient);
  return gradient;
}

} // namespace vmphase
