#include "qevap/spectrum.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>

namespace qevap {

namespace {
// FFTW plan creation is not thread-safe; execution of private plans is.
std::mutex fftw_plan_mutex;
}

std::vector<SpectrumBin> momentum_spectrum(const WaveFunction& psi) {
  const std::size_t n = psi.amp.size();
  const double dx = psi.grid.dx();
  const double dk = 2.0 * M_PI / (static_cast<double>(n) * dx);

  std::vector<cdouble> out(n);
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_plan plan = fftw_plan_dft_1d(
        static_cast<int>(n),
        reinterpret_cast<fftw_complex*>(const_cast<cdouble*>(psi.amp.data())),
        reinterpret_cast<fftw_complex*>(out.data()), FFTW_FORWARD, FFTW_ESTIMATE);
    fftw_execute(plan);
    fftw_destroy_plan(plan);
  }

  // f(k_j) = dx/sqrt(2 pi) sum_n psi_n e^{-i k_j x_n}; |f|^2 dk sums to the norm.
  const double scale = dx * dx / (2.0 * M_PI);
  std::vector<SpectrumBin> bins(n);
  const std::size_t half = n / 2;
  for (std::size_t j = 0; j < n; ++j) {
    // reorder to ascending k: negative frequencies first
    const std::size_t src = (j + n - half) % n;
    const double k = (static_cast<double>(j) - static_cast<double>(half)) * dk;
    bins[j].k = k;
    bins[j].density = scale * std::norm(out[src]);
  }
  return bins;
}

} // namespace qevap
