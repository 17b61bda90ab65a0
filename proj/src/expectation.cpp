#include "qevap/expectation.hpp"

#include <cmath>

namespace qevap {

ExpectationRecord expectation_values(const WaveFunction& psi, const PotentialSpec& pot,
                                     double t, const ParticleSpec& particle) {
  const double dx = psi.grid.dx();
  const std::size_t n = psi.amp.size();
  const double hbar = particle.hbar;
  const double m = particle.mass;

  // Trapezoid sums; the stencil terms vanish at the (Dirichlet) edges.
  double norm = 0.0, mx = 0.0, epot = 0.0, ekin = 0.0, p = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double w = (i == 0 || i + 1 == n) ? 0.5 : 1.0;
    const double rho = std::norm(psi.amp[i]);
    norm += w * rho;
    mx += w * psi.grid.x(i) * rho;
    epot += w * potential_at(pot, psi.grid.x(i), t) * rho;
    if (i > 0 && i + 1 < n) {
      const cdouble lap = (psi.amp[i + 1] - 2.0 * psi.amp[i] + psi.amp[i - 1]) / (dx * dx);
      const cdouble grad = (psi.amp[i + 1] - psi.amp[i - 1]) / (2.0 * dx);
      ekin += std::real(std::conj(psi.amp[i]) * lap);
      p += std::imag(std::conj(psi.amp[i]) * grad);  // <p> = hbar Im int conj(psi) psi'
    }
  }
  ExpectationRecord r;
  r.t = t;
  r.norm = norm * dx;
  r.mean_x = mx * dx;
  r.mean_p = hbar * p * dx;
  r.e_kin = -hbar * hbar / (2.0 * m) * ekin * dx;
  r.e_pot = epot * dx;
  r.e_tot = r.e_kin + r.e_pot;
  return r;
}

} // namespace qevap
