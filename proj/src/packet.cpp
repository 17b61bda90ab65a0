#include "qevap/packet.hpp"

#include <cmath>

#include "qevap/errors.hpp"

namespace qevap {

WaveFunction make_gaussian_packet(const Grid1D& grid, const PacketSpec& packet) {
  if (!(packet.sigma > 0.0)) throw ConfigError("packet.sigma_m: must be > 0");
  if (packet.sigma < 4.0 * grid.dx())
    throw ConfigError("packet.sigma_m: under-resolved, need sigma >= 4 dx");
  if (packet.x_i - 4.0 * packet.sigma < grid.x_min ||
      packet.x_i + 4.0 * packet.sigma > grid.x_max)
    throw ConfigError("packet.x_i_m: centroid closer than 4 sigma to a grid edge");

  WaveFunction psi(grid);
  const double inv4s2 = 1.0 / (4.0 * packet.sigma * packet.sigma);
  for (std::size_t i = 0; i < grid.n_points; ++i) {
    const double x = grid.x(i);
    const double d = x - packet.x_i;
    psi.amp[i] = std::polar(std::exp(-d * d * inv4s2), packet.k_bar * x);
  }
  normalize(psi);
  return psi;
}

} // namespace qevap
