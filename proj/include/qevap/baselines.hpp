#ifndef QEVAP_BASELINES_HPP
#define QEVAP_BASELINES_HPP

namespace qevap {

// Classical probability that a particle drawn from the packet's Gaussian
// wave-number distribution has kinetic energy above v0:
//   0.5 erfc((sqrt(m v0)/hbar - k_bar/sqrt(2)) / delta_k)
double classical_supra_barrier_probability(double k_bar, double delta_k, double v0,
                                           double m, double hbar);

// Textbook transmission of a monochromatic wave through a rectangular barrier,
//   T = [1 + v0^2 sinh^2(kappa a) / (4 E (v0 - E))]^-1,  kappa = sqrt(2m(v0-E))/hbar,
// valid for 0 < E < v0.
double monochromatic_barrier_transmission(double e, double v0, double width, double m,
                                          double hbar);

} // namespace qevap

#endif
