#include "qevap/observables.hpp"

#include <algorithm>
#include <cmath>

#include "qevap/analytic.hpp"
#include "qevap/errors.hpp"

namespace qevap {

double region_probability(const WaveFunction& psi, double x_transmit) {
  const Grid1D& g = psi.grid;
  if (!g.contains(x_transmit) && x_transmit > g.x_max) return 0.0;
  std::size_t i0 = 0;
  if (x_transmit > g.x_min) {
    const double pos = (x_transmit - g.x_min) / g.dx();
    i0 = static_cast<std::size_t>(std::ceil(pos - 1e-9));
  }
  if (i0 + 1 >= g.n_points) return 0.0;
  double s = 0.5 * (std::norm(psi.amp[i0]) + std::norm(psi.amp[g.n_points - 1]));
  for (std::size_t i = i0 + 1; i + 1 < g.n_points; ++i) s += std::norm(psi.amp[i]);
  return s * g.dx();
}

TransmissionResult asymptotic_transmission(const Trajectory& traj, const SimConfig& config,
                                           double window, double tol) {
  if (traj.records.size() < 2)
    throw ConvergenceError("asymptotic_transmission: trajectory has no records");
  const TrajectoryRecord& last = traj.records.back();

  const double edge = config.potential.left_edge();
  if (!(last.mean_x <= edge - 4.0 * config.packet.sigma))
    throw ConvergenceError(
        "asymptotic_transmission: reflected packet centroid closer than 4 sigma "
        "to the potential at t_end (run longer)");

  double t_lo = last.t - window;
  double tmax = last.transmission, tmin = last.transmission;
  for (auto it = traj.records.rbegin(); it != traj.records.rend() && it->t >= t_lo; ++it) {
    tmax = std::max(tmax, it->transmission);
    tmin = std::min(tmin, it->transmission);
  }
  TransmissionResult r;
  r.transmission = last.transmission;
  r.t_evaluated = last.t;
  // Transmissions below 1e-10 count as a converged zero-level plateau.
  r.plateau_residual = (tmax - tmin) / std::max(last.transmission, 1e-10);
  r.converged = r.plateau_residual < tol;
  if (!r.converged)
    throw ConvergenceError("asymptotic_transmission: plateau residual " +
                           std::to_string(r.plateau_residual) + " >= tolerance");
  return r;
}

double energy_transfer(const ExpectationRecord& before, const ExpectationRecord& after) {
  return after.e_tot - before.e_tot;
}

namespace {

// Projections <psi_{+k'}|psi> and <chi_{k'}|psi> accumulated with phase
// recurrences along the uniform grid (one complex multiply per point).
void project_one(const WaveFunction& psi, double kp, double kpp, double edge,
                 cdouble& c_plus, cdouble& c_minus) {
  const Grid1D& g = psi.grid;
  const double dx = g.dx();
  const double rp = (kp - kpp) / (kp + kpp);   // left-incident reflection
  const double tp = 2.0 * kp / (kp + kpp);     // left-incident transmission
  const double rm = (kpp - kp) / (kpp + kp);   // right-incident reflection
  const double tm = 2.0 * kpp / (kpp + kp);    // right-incident transmission

  cdouble sp = 0.0, sm = 0.0;
  const cdouble step_p = std::polar(1.0, -kp * dx);   // conj(e^{ik'x}) recurrence
  const cdouble step_pp = std::polar(1.0, -kpp * dx);
  const double u0 = g.x_min - edge;
  cdouble em_kp = std::polar(1.0, -kp * u0);    // e^{-ik'u}
  cdouble em_kpp = std::polar(1.0, -kpp * u0);  // e^{-ik''u}
  for (std::size_t i = 0; i < g.n_points; ++i) {
    const double w = (i == 0 || i + 1 == g.n_points) ? 0.5 : 1.0;
    const cdouble a = w * psi.amp[i];
    const double u = g.x(i) - edge;
    if (u < 0.0) {
      // conj(psi_+) = e^{-ik'u} + rp e^{ik'u};  conj(chi) = tm e^{ik'u}
      sp += (em_kp + rp * std::conj(em_kp)) * a;
      sm += tm * std::conj(em_kp) * a;
    } else {
      // conj(psi_+) = tp e^{-ik''u};  conj(chi) = e^{ik''u} + rm e^{-ik''u}
      sp += tp * em_kpp * a;
      sm += (std::conj(em_kpp) + rm * em_kpp) * a;
    }
    em_kp *= step_p;
    em_kpp *= step_pp;
  }
  const double norm = 1.0 / std::sqrt(2.0 * M_PI);
  c_plus = sp * dx * norm;
  c_minus = sm * dx * norm;
}

double population_pass(const WaveFunction& psi, double kappa0, double edge,
                       std::size_t n_nodes) {
  const double k_max = 4.0 * kappa0;
  const double dk = (k_max - kappa0) / static_cast<double>(n_nodes);
  double total = 0.0;
  for (std::size_t j = 1; j <= n_nodes; ++j) {
    const double kp = kappa0 + dk * static_cast<double>(j);
    const double kpp = std::sqrt(kp * kp - kappa0 * kappa0);
    cdouble cp, cm;
    project_one(psi, kp, kpp, edge, cp, cm);
    // The right-incident states are delta-normalized in their own incoming
    // wave number k''; expanding over dk' therefore carries a k'/k'' Jacobian.
    total += (std::norm(cp) + (kp / kpp) * std::norm(cm)) * dk;
  }
  return total;
}

} // namespace

double supra_barrier_population(const WaveFunction& psi, double kappa0, double step_edge,
                                std::size_t n_nodes) {
  const double coarse = population_pass(psi, kappa0, step_edge, n_nodes);
  const double fine = population_pass(psi, kappa0, step_edge, 2 * n_nodes);
  const double scale = std::max(std::abs(fine), 1e-300);
  if (std::abs(fine - coarse) / scale > 0.01 && fine > 1e-12)
    throw ConvergenceError("supra_barrier_population: k' quadrature not converged");
  return fine;
}

double evanescent_depth(double kappa0, double k_bar) {
  if (!(kappa0 > std::abs(k_bar)))
    throw ConfigError("evanescent_depth: needs k_bar below kappa0");
  return 1.0 / std::sqrt(kappa0 * kappa0 - k_bar * k_bar);
}

} // namespace qevap
