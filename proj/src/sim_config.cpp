#include "qevap/sim_config.hpp"

#include <cmath>

namespace qevap {

void SimConfig::validate() const {
  if (!(particle.mass > 0.0)) throw ConfigError("particle.mass_kg: must be > 0");
  if (!(particle.hbar > 0.0)) throw ConfigError("particle.hbar_Js: must be > 0");
  Grid1D check(grid.x_min, grid.x_max, grid.n_points);  // re-runs grid invariants
  potential.validate();
  if (!(packet.sigma > 0.0)) throw ConfigError("packet.sigma_m: must be > 0");
  if (!(dt > 0.0)) throw ConfigError("time.dt_s: must be > 0");
  if (!(t_end > 0.0)) throw ConfigError("time.t_end_s: must be > 0");
  if (!grid.contains(x_transmit)) throw ConfigError("measure.x_transmit_m: outside grid");
  if (record_every < 1) throw ConfigError("record.every: must be >= 1");
  double prev = -1.0;
  for (std::size_t i = 0; i < kicks.size(); ++i) {
    const auto& k = kicks[i];
    if (k.t_k < 0.0 || k.t_k > t_end) throw ConfigError("kick.t_k_s: outside [0, t_end]");
    if (k.t_k < prev) throw ConfigError("kick.t_k_s: kicks must be sorted by t_k");
    prev = k.t_k;
    if (k.delta_t < 0.0) throw ConfigError("kick.delta_t_s: must be >= 0");
    if (k.delta_t > 0.0) {
      if (k.n_substeps < 1) throw ConfigError("kick.n_substeps: must be >= 1");
      if (k.delta_t < dt) throw ConfigError("kick.delta_t_s: not resolvable by time.dt_s");
    }
    if (std::abs(k.q) >= M_PI / grid.dx())
      throw ConfigError("kick.q_per_m: |q| must stay below pi/dx (aliasing)");
  }
  for (double ts : snapshot_times)
    if (ts < 0.0 || ts > t_end) throw ConfigError("snapshot.times_s: outside [0, t_end]");
}

} // namespace qevap
