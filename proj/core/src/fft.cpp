#include "fft.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include <fftw3.h>

namespace vmphase::detail {
namespace {

std::mutex& planner_mutex()
{
  static std::mutex m;
  return m;
}

} // namespace

RealFft::RealFft(int size) : size_(size)
{
  std::vector<double> real(static_cast<std::size_t>(size));
  std::vector<std::complex<double>> spec(static_cast<std::size_t>(size / 2 + 1));
  auto* cplx = reinterpret_cast<fftw_complex*>(spec.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  std::lock_guard lock(planner_mutex());
  forward_plan_ = fftw_plan_dft_r2c_1d(size, real.data(), cplx, flags);
  inverse_plan_ = fftw_plan_dft_c2r_1d(size, cplx, real.data(), flags);
}

RealFft::~RealFft()
{
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(forward_plan_));
  fftw_destroy_plan(static_cast<fftw_plan>(inverse_plan_));
}

void RealFft::forward(std::span<const double> in,
                      std::span<std::complex<double>> out) const
{
  // FFTW's r2c never writes its input.
  fftw_execute_dft_r2c(static_cast<fftw_plan>(forward_plan_),
                       const_cast<double*>(in.data()),
                       reinterpret_cast<fftw_complex*>(out.data()));
}

void RealFft::inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) const
{
  // c2r destroys its input, so run it on a copy.
  std::vector<std::complex<double>> scratch(in.begin(), in.end());
  fftw_execute_dft_c2r(static_cast<fftw_plan>(inverse_plan_),
                       reinterpret_cast<fftw_complex*>(scratch.data()), out.data());
  const double scale = 1.0 / size_;
  for (double& v : out)
    v *= scale;
}

const RealFft& real_fft(int size)
{
  static std::mutex cache_mutex;
  static std::map<int, std::unique_ptr<RealFft>> cache;
  std::lock_guard lock(cache_mutex);
  auto& slot = cache[size];
  if (!slot)
    slot = std::make_unique<RealFft>(size);
  return *slot;
}

} // namespace vmphase::detail
