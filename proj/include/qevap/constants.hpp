#ifndef QEVAP_CONSTANTS_HPP
#define QEVAP_CONSTANTS_HPP

namespace qevap {
namespace constants {

// CODATA 2018
inline constexpr double hbar = 1.054571817e-34;       // J s
inline constexpr double electron_mass = 9.1093837015e-31;  // kg
inline constexpr double helium4_mass = 6.6446573357e-27;   // kg
inline constexpr double electron_volt = 1.602176634e-19;   // J

inline constexpr double nm = 1e-9;
inline constexpr double fs = 1e-15;

} // namespace constants

// Particle entering the Schroedinger equation. hbar is carried alongside the
// mass so a configuration can be expressed in natural units (hbar = m = 1).
struct ParticleSpec {
  double mass;
  double hbar = constants::hbar;
};

} // namespace qevap

#endif
