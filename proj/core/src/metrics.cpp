#include "vmphase/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "vmphase/error.hpp"

namespace vmphase {

double cosine_distance(const RealMatrix& a, const RealMatrix& b)
{
  require_shape(b, a.rows(), a.cols(), "cosine_distance");
  if (a.size() == 0)
    throw ShapeError("cosine_distance: empty matrices");
  double sum = 0.0;
  for (Index r = 0; r < a.rows(); ++r)
    for (Index c = 0; c < a.cols(); ++c)
      sum += 0.5 * (1.0 - std::cos(a(r, c) - b(r, c)));
  return sum / static_cast<double>(a.size());
}

double gd_cosine_distance(const RealMatrix& a, const RealMatrix& b)
{
  require_shape(b, a.rows(), a.cols(), "gd_cosine_distance");
  if (a.cols() < 2)
    throw DomainError("gd_cosine_distance needs at least 2 bins");
  const RealMatrix gd_a = a.leftCols(a.cols() - 1) - a.rightCols(a.cols() - 1);
  const RealMatrix gd_b = b.leftCols(b.cols() - 1) - b.rightCols(b.cols() - 1);
  return cosine_distance(gd_a, gd_b);
}

double log_spectral_convergence(const RealMatrix& reference,
                                const RealMatrix& analyzed_magnitude)
{
  require_shape(analyzed_magnitude, reference.rows(), reference.cols(),
                "log_spectral_convergence");
  const Index last = reference.cols() - 1;
  double num = 0.0;
  double den = 0.0;
  for (Index t = 0; t < reference.rows(); ++t) {
    for (Index f = 0; f <= last; ++f) {
      const double weight = (f == 0 || f == last) ? 1.0 : 2.0;
      const double d = reference(t, f) - analyzed_magnitude(t, f);
      num += weight * d * d;
      den += weight * reference(t, f) * reference(t, f);
    }
  }
  if (!(den > 0.0))
    throw DomainError("log_spectral_convergence: reference spectrogram is all zero");
  if (num == 0.0)
    return kPerfectConvergence;
  return 0.5 * std::log10(num / den);
}

double log_spectral_convergence(const AmplitudeSpectrogram& reference,
                                std::span<const double> signal)
{
  const auto analyzed = polar_split(stft(signal, reference.config)).amplitude;
  return log_spectral_convergence(reference.data, analyzed.data);
}

std::size_t Histogram::total() const noexcept
{
  std::size_t sum = 0;
  for (auto c : counts)
    sum += c;
  return sum;
}

Histogram phase_histogram(std::span<const double> values, double bin_width)
{
  if (values.empty())
    throw DomainError("phase_histogram: no values");
  if (!(bin_width > 0.0) || !std::isfinite(bin_width))
    throw DomainError("phase_histogram: bin width must be positive");
  const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  const auto bins =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((hi - lo) / bin_width)));

  Histogram h;
  h.edges.resize(bins + 1);
  for (std::size_t k = 0; k <= bins; ++k)
    h.edges[k] = lo + bin_width * static_cast<double>(k);
  h.counts.assign(bins, 0);
  for (double v : values) {
    auto k = static_cast<std::size_t>(std::floor((v - lo) / bin_width));
    h.counts[std::min(k, bins - 1)] += 1;
  }
  return h;
}

Quartiles quartiles(std::vector<double> values)
{
  if (values.empty()) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan, nan};
  }
  std::sort(values.begin(), values.end());
  auto at = [&](double p) {
    const double pos = p * static_cast<double>(values.size() - 1);
    const auto i = static_cast<std::size_t>(std::floor(pos));
    const double frac = pos - static_cast<double>(i);
    if (i + 1 >= values.size())
      return values.back();
    return values[i] + frac * (values[i + 1] - values[i]);
  };
  return {at(0.25), at(0.5), at(0.75)};
}

EvalReport summarize(std::vector<UtteranceMetrics> rows)
{
  EvalReport report;
  std::vector<double> ph;
  std::vector<double> gd;
  for (const auto& r : rows) {
    ph.push_back(r.phase_distance);
    gd.push_back(r.gd_distance);
  }
  report.rows = std::move(rows);
  report.phase = quartiles(std::move(ph));
  report.gd = quartiles(std::move(gd));
  return report;
}

std::string format_number(double v)
{
  if (std::isinf(v))
    return v < 0 ? "-inf" : "inf";
  if (std::isnan(v))
    return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return {buf, res.ptr};
}

void write_eval_csv(std::ostream& out, const EvalReport& report)
{
  out << "# distance = mean (1 - cos(a - b)) / 2 over predicted band; group delay = "
         "-(y[f+1] - y[f])\n";
  out << "utterance,band,frames,phase_distance,gd_distance\n";
  for (const auto& r : report.rows)
    out << r.name << ',' << band_name(r.band) << ',' << r.frames << ','
        << format_number(r.phase_distance) << ',' << format_number(r.gd_distance) << '\n';
  out << "# phase quartiles q1,median,q3 = " << format_number(report.phase.q1) << ','
      << format_number(report.phase.median) << ',' << format_number(report.phase.q3)
      << '\n';
  out << "# gd quartiles q1,median,q3 = " << format_number(report.gd.q1) << ','
      << format_number(report.gd.median) << ',' << format_number(report.gd.q3) << '\n';
}

void write_trace_csv(std::ostream& out, std::span<const double> trace)
{
  out << "# log10 spectral convergence, two-sided Frobenius norm; -inf = exact\n";
  out << "iteration,log_spectral_convergence\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    out << (i + 1) << ',' << format_number(trace[i]) << '\n';
}

void write_histogram_csv(std::ostream& out, const Histogram& hist)
{
  out << "# predicted phase histogram, radians; bins [lo, hi), last bin closed\n";
  out << "lo,hi,count\n";
  for (std::size_t k = 0; k < hist.counts.size(); ++k)
    out << format_number(hist.edges[k]) << ',' << format_number(hist.edges[k + 1]) << ','
        << hist.counts[k] << '\n';
}

} // namespace vmphase
