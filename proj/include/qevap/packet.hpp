#ifndef QEVAP_PACKET_HPP
#define QEVAP_PACKET_HPP

#include "qevap/wavefunction.hpp"

namespace qevap {

// Gaussian packet parameters: |psi|^2 has position standard deviation sigma,
// so the wave-number distribution has spread delta_k = 1/(2 sigma).
struct PacketSpec {
  double x_i = 0.0;    // initial centroid, m
  double sigma = 0.0;  // position standard deviation, m
  double k_bar = 0.0;  // mean wave number, m^-1

  double delta_k() const { return 1.0 / (2.0 * sigma); }
  // True when delta_k/k_bar > 0.1 and the packet is no longer quasi-monochromatic.
  bool quasi_monochromatic_warning() const { return delta_k() > 0.1 * std::abs(k_bar); }
};

// psi(x) ~ exp(-(x-x_i)^2/(4 sigma^2)) exp(i k_bar x), normalized on the grid.
// Requires the centroid at least 4 sigma from both edges and sigma >= 4 dx.
WaveFunction make_gaussian_packet(const Grid1D& grid, const PacketSpec& packet);

} // namespace qevap

#endif
