#include "qevap/scaling.hpp"

#include <cmath>

namespace qevap {

ScaledConfig to_dimensionless(const SimConfig& config) {
  const double hbar = config.particle.hbar;
  const double m = config.particle.mass;

  ScaleFactors f;
  // 1/k_bar makes k_bar' = 1; fall back to sigma for near-stationary packets.
  f.length = (std::abs(config.packet.k_bar) * config.packet.sigma >= 1.0)
                 ? 1.0 / std::abs(config.packet.k_bar)
                 : config.packet.sigma;
  f.mass = m;
  f.time = m * f.length * f.length / hbar;
  f.energy = hbar / f.time;

  ScaledConfig out;
  out.factors = f;
  SimConfig& c = out.config;
  c = config;
  c.particle.mass = 1.0;
  c.particle.hbar = 1.0;
  c.grid = Grid1D(config.grid.x_min / f.length, config.grid.x_max / f.length,
                  config.grid.n_points);
  c.potential.v0 = config.potential.v0 / f.energy;
  c.potential.x0 = config.potential.x0 / f.length;
  c.potential.x1 = config.potential.x1 / f.length;
  c.potential.x_edge = config.potential.x_edge / f.length;
  c.potential.ramp_width = config.potential.ramp_width / f.length;
  c.potential.drift_velocity = config.potential.drift_velocity / f.velocity();
  c.potential.drift_start = config.potential.drift_start / f.time;
  c.packet.x_i = config.packet.x_i / f.length;
  c.packet.sigma = config.packet.sigma / f.length;
  c.packet.k_bar = config.packet.k_bar * f.length;
  c.dt = config.dt / f.time;
  c.t_end = config.t_end / f.time;
  for (auto& k : c.kicks) {
    k.q *= f.length;
    k.t_k /= f.time;
    k.delta_t /= f.time;
  }
  c.x_transmit = config.x_transmit / f.length;
  for (auto& ts : c.snapshot_times) ts /= f.time;
  return out;
}

SimConfig rescale(const SimConfig& scaled, const ScaleFactors& f) {
  SimConfig c = scaled;
  c.particle.mass = scaled.particle.mass * f.mass;
  c.particle.hbar = scaled.particle.hbar * f.energy * f.time;
  c.grid = Grid1D(scaled.grid.x_min * f.length, scaled.grid.x_max * f.length,
                  scaled.grid.n_points);
  c.potential.v0 = scaled.potential.v0 * f.energy;
  c.potential.x0 = scaled.potential.x0 * f.length;
  c.potential.x1 = scaled.potential.x1 * f.length;
  c.potential.x_edge = scaled.potential.x_edge * f.length;
  c.potential.ramp_width = scaled.potential.ramp_width * f.length;
  c.potential.drift_velocity = scaled.potential.drift_velocity * f.velocity();
  c.potential.drift_start = scaled.potential.drift_start * f.time;
  c.packet.x_i = scaled.packet.x_i * f.length;
  c.packet.sigma = scaled.packet.sigma * f.length;
  c.packet.k_bar = scaled.packet.k_bar / f.length;
  c.dt = scaled.dt * f.time;
  c.t_end = scaled.t_end * f.time;
  for (auto& k : c.kicks) {
    k.q /= f.length;
    k.t_k *= f.time;
    k.delta_t *= f.time;
  }
  c.x_transmit = scaled.x_transmit * f.length;
  for (auto& ts : c.snapshot_times) ts *= f.time;
  return c;
}

WaveFunction rescale(const WaveFunction& psi, const ScaleFactors& f) {
  WaveFunction out(Grid1D(psi.grid.x_min * f.length, psi.grid.x_max * f.length,
                          psi.grid.n_points));
  const double a = 1.0 / std::sqrt(f.length);
  for (std::size_t i = 0; i < psi.amp.size(); ++i) out.amp[i] = psi.amp[i] * a;
  return out;
}

} // namespace qevap
