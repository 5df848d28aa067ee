#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace vmphase {

/// Circular normal distribution exp(kappa cos(y - mu)) / (2 pi I0(kappa)).
struct VonMises {
  double mu = 0.0;
  double kappa = 1.0;
};

/// Modified Bessel function of the first kind, order 0, by its power
/// series sum_k (x^2/4)^k / (k!)^2.
double bessel_i0(double x);

/// Throws DomainError when kappa is negative or not finite.
double vm_density(double y, const VonMises& dist);

enum class LossKind { PhaseOnly, GroupDelayOnly, MultiTask };

struct LossConfig {
  LossKind kind = LossKind::MultiTask;
  /// Weight of the group-delay term; read only for MultiTask.
  double alpha = 0.1;
};

/// "ph", "gd" or "phgd".
LossKind parse_loss_kind(std::string_view text);
std::string loss_kind_name(LossKind kind);

/// sum_f -cos(target_f - predicted_f).
double phase_loss(std::span<const double> target, std::span<const double> predicted);

/// Negative first difference across bins: out_f = -(y_{f+1} - y_f).
/// Throws DomainError for fewer than two bins.
std::vector<double> group_delay(std::span<const double> phase);

/// sum over the D-1 group-delay terms of -cos(gd(target)_f - gd(predicted)_f).
double group_delay_loss(std::span<const double> target,
                        std::span<const double> predicted);

double total_loss(std::span<const double> target, std::span<const double> predicted,
                  const LossConfig& config);

/// Value of total_loss() at a perfect prediction of D bins.
double minimum_loss(std::size_t bins, const LossConfig& config);

/// dL/d(predicted), element-wise.
std::vector<double> loss_gradient(std::span<const double> target,
                                  std::span<const double> predicted,
                                  const LossConfig& config);

/// gradient += scale * dL/d(predicted); returns the loss. Used by
/// backprop to avoid a temporary per frame.
double accumulate_loss_gradient(std::span<const double> target,
                                std::span<const double> predicted,
                                const LossConfig& config, double scale,
                                std::span<double> gradient);

} // namespace vmphase
