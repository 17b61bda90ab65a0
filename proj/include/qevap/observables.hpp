#ifndef QEVAP_OBSERVABLES_HPP
#define QEVAP_OBSERVABLES_HPP

#include "qevap/propagator.hpp"

namespace qevap {

struct TransmissionResult {
  double transmission = 0.0;
  double t_evaluated = 0.0;        // s
  double plateau_residual = 0.0;   // relative T variation over the window
  bool converged = false;
};

// Trapezoid integral of |psi|^2 over x > x_transmit.
double region_probability(const WaveFunction& psi, double x_transmit);

// Late-time transmission with a plateau check: converged iff the relative
// variation of T over the trailing `window` seconds is below tol. Requires
// the reflected packet to have retreated at least 4 sigma from the potential
// edge by the end of the run; throws ConvergenceError otherwise.
TransmissionResult asymptotic_transmission(const Trajectory& traj, const SimConfig& config,
                                           double window, double tol);

// after.e_tot - before.e_tot
double energy_transfer(const ExpectationRecord& before, const ExpectationRecord& after);

// Total probability carried by step eigenstates with energies above v0
// (|k'| > kappa0), obtained by projecting psi on the scattering eigenbasis
// over a uniform k' grid on (kappa0, 4 kappa0] with n_nodes points. The
// result is convergence-checked by doubling the grid; relative change above
// 1% raises ConvergenceError.
double supra_barrier_population(const WaveFunction& psi, double kappa0, double step_edge,
                                std::size_t n_nodes = 512);

// Penetration depth of the deepest evanescent component, 1/sqrt(kappa0^2-k^2).
double evanescent_depth(double kappa0, double k_bar);

} // namespace qevap

#endif
