#pragma once

#include <limits>
#include <numbers>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "vmphase/band.hpp"
#include "vmphase/stft.hpp"

namespace vmphase {

/// Mean over all entries of (1 - cos(a - b)) / 2: 0 when equal modulo 2 pi,
/// 1 when antipodal everywhere, 0.5 against random phases.
double cosine_distance(const RealMatrix& a, const RealMatrix& b);

/// cosine_distance() of the per-row group delays of a and b.
double gd_cosine_distance(const RealMatrix& a, const RealMatrix& b);

/// Value returned when the reconstruction is exact (log10 of zero).
inline constexpr double kPerfectConvergence = -std::numeric_limits<double>::infinity();

/// log10(||ref - analyzed|| / ||ref||) with the norm taken over the full
/// two-sided spectrum (interior bins counted twice, DC and Nyquist once).
/// Throws DomainError when the reference is all zero.
double log_spectral_convergence(const RealMatrix& reference,
                                const RealMatrix& analyzed_magnitude);

/// Spectral convergence of `signal` re-analyzed with reference.config.
double log_spectral_convergence(const AmplitudeSpectrogram& reference,
                                std::span<const double> signal);

struct Histogram {
  /// counts.size() + 1 edges; the last bin is closed on the right.
  std::vector<double> edges;
  std::vector<std::size_t> counts;

  [[nodiscard]] std::size_t total() const noexcept;
};

/// Fixed-width histogram over [min, max] of the values.
Histogram phase_histogram(std::span<const double> values,
                          double bin_width = std::numbers::pi / 8);

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

/// Linear-interpolation quartiles (Hyndman-Fan type 7). Empty input gives NaN.
Quartiles quartiles(std::vector<double> values);

struct UtteranceMetrics {
  std::string name;
  double phase_distance = 0.0;
  double gd_distance = 0.0;
  Band band = Band::Full;
  Index frames = 0;
};

struct EvalReport {
  std::vector<UtteranceMetrics> rows;
  Quartiles phase;
  Quartiles gd;
};

EvalReport summarize(std::vector<UtteranceMetrics> rows);

void write_eval_csv(std::ostream& out, const EvalReport& report);
void write_trace_csv(std::ostream& out, std::span<const double> trace);
void write_histogram_csv(std::ostream& out, const Histogram& hist);

/// Shortest round-trip decimal form; "-inf" for the perfect-convergence case.
std::string format_number(double v);

} // namespace vmphase
