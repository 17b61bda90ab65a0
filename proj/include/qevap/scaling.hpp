#ifndef QEVAP_SCALING_HPP
#define QEVAP_SCALING_HPP

#include "qevap/sim_config.hpp"
#include "qevap/wavefunction.hpp"

namespace qevap {

// Unit factors mapping a dimensionless configuration (hbar = m = 1) back to
// the original system: x = x' * length, t = t' * time, E = E' * energy.
struct ScaleFactors {
  double length = 1.0;  // m per scaled length unit
  double time = 1.0;    // s per scaled time unit
  double energy = 1.0;  // J per scaled energy unit
  double mass = 1.0;    // kg per scaled mass unit

  double wavenumber() const { return 1.0 / length; }     // m^-1 per scaled
  double velocity() const { return length / time; }      // m/s per scaled
  double momentum() const { return mass * velocity(); }  // kg m/s per scaled
};

struct ScaledConfig {
  SimConfig config;      // equivalent run with hbar = 1, m = 1
  ScaleFactors factors;  // maps scaled results back to the input units
};

// Rescale to hbar = m = 1 with the length unit 1/k_bar (or sigma when the
// packet is too slow for 1/k_bar to be a usable unit). All dimensionless
// observables (T, R, norms, populations) are invariant under the map.
ScaledConfig to_dimensionless(const SimConfig& config);

// Inverse of to_dimensionless: express a scaled config in the original units.
SimConfig rescale(const SimConfig& scaled, const ScaleFactors& f);

// Map a wave function produced on the scaled grid back to the input units
// (amplitudes pick up 1/sqrt(length) so that int |psi|^2 dx is preserved).
WaveFunction rescale(const WaveFunction& psi, const ScaleFactors& f);

} // namespace qevap

#endif
