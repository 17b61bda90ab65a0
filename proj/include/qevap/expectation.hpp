#ifndef QEVAP_EXPECTATION_HPP
#define QEVAP_EXPECTATION_HPP

#include "qevap/constants.hpp"
#include "qevap/potential.hpp"
#include "qevap/wavefunction.hpp"

namespace qevap {

// Observables of one state at one instant. E_tot = E_kin + E_pot exactly as
// computed here.
struct ExpectationRecord {
  double t = 0.0;       // s
  double norm = 0.0;    // dimensionless
  double mean_x = 0.0;  // m
  double mean_p = 0.0;  // kg m/s
  double e_kin = 0.0;   // J
  double e_pot = 0.0;   // J
  double e_tot = 0.0;   // J
};

// Central-difference kinetic energy and momentum, trapezoid potential energy.
ExpectationRecord expectation_values(const WaveFunction& psi, const PotentialSpec& pot,
                                     double t, const ParticleSpec& particle);

} // namespace qevap

#endif
