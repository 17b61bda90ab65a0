#include "qevap/wavefunction.hpp"

#include <cmath>

#include "qevap/errors.hpp"

namespace qevap {

double trapezoid(const std::vector<double>& f, double dx) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dx;
}

double norm_squared(const WaveFunction& psi) {
  const double dx = psi.grid.dx();
  const std::size_t n = psi.amp.size();
  if (n < 2) return 0.0;
  double s = 0.5 * (std::norm(psi.amp.front()) + std::norm(psi.amp.back()));
  for (std::size_t i = 1; i + 1 < n; ++i) s += std::norm(psi.amp[i]);
  return s * dx;
}

void normalize(WaveFunction& psi) {
  const double n2 = norm_squared(psi);
  if (!(n2 > 0.0)) throw NumericsError("normalize: state has zero norm");
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& a : psi.amp) a *= inv;
}

cdouble inner_product(const WaveFunction& phi, const WaveFunction& psi) {
  if (!(phi.grid == psi.grid)) throw ConfigError("inner_product: grids differ");
  const double dx = phi.grid.dx();
  const std::size_t n = phi.amp.size();
  cdouble s = 0.5 * (std::conj(phi.amp.front()) * psi.amp.front() +
                     std::conj(phi.amp.back()) * psi.amp.back());
  for (std::size_t i = 1; i + 1 < n; ++i) s += std::conj(phi.amp[i]) * psi.amp[i];
  return s * dx;
}

} // namespace qevap
