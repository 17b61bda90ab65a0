#ifndef QEVAP_SIM_CONFIG_HPP
#define QEVAP_SIM_CONFIG_HPP

#include <vector>

#include "qevap/constants.hpp"
#include "qevap/grid.hpp"
#include "qevap/packet.hpp"
#include "qevap/potential.hpp"

namespace qevap {

// Momentum transfer hbar*q applied at t_k. delta_t = 0 is an instantaneous
// quantum jump; otherwise the transfer is split into n_substeps equal
// sub-kicks spread uniformly over [t_k - delta_t/2, t_k + delta_t/2].
struct KickEvent {
  double q = 0.0;        // transferred wave number, m^-1 (sign allowed)
  double t_k = 0.0;      // occurrence time, s
  double delta_t = 0.0;  // duration, s; 0 = instantaneous
  int n_substeps = 1;
};

struct SimConfig {
  ParticleSpec particle{constants::electron_mass};
  Grid1D grid;
  PotentialSpec potential;
  PacketSpec packet;
  double dt = 0.0;       // s
  double t_end = 0.0;    // s
  std::vector<KickEvent> kicks;
  double x_transmit = 0.0;  // transmission-region boundary x_T, m
  std::vector<double> snapshot_times;
  int record_every = 20;

  void validate() const;  // throws ConfigError naming the offending key
};

} // namespace qevap

#endif
