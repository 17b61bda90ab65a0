#ifndef QEVAP_PROPAGATOR_HPP
#define QEVAP_PROPAGATOR_HPP

#include <utility>
#include <vector>

#include "qevap/expectation.hpp"
#include "qevap/scaling.hpp"
#include "qevap/sim_config.hpp"

namespace qevap {

struct TrajectoryRecord : ExpectationRecord {
  double transmission = 0.0;  // int_{x > x_T} |psi|^2 dx
  double reflection = 0.0;    // int_{x < left edge} |psi|^2 dx
};

// Expectation records taken immediately before the first and after the last
// sub-kick of one KickEvent; their E_tot difference is the kick work.
struct KickBracket {
  std::size_t kick_index = 0;
  ExpectationRecord before;
  ExpectationRecord after;
};

struct Trajectory {
  std::vector<TrajectoryRecord> records;  // strictly increasing in t
  std::vector<std::pair<double, WaveFunction>> snapshots;
  WaveFunction final_state;
  std::vector<KickBracket> kick_brackets;
  // Largest per-cell probability |psi|^2 dx seen within 10 dx of either grid
  // edge; boundary_warning is set once it exceeds 1e-8.
  double max_edge_probability = 0.0;
  bool boundary_warning = false;
};

// One Crank-Nicolson step of i hbar d psi/dt = -(hbar^2/2m) psi'' + V psi with
// the potential sampled at t + dt/2, 3-point Laplacian, Dirichlet edges,
// O(N) complex tridiagonal solve.
WaveFunction cn_step(const WaveFunction& psi, const PotentialSpec& pot, double t,
                     double dt, const ParticleSpec& particle);

// Pointwise multiplication by e^{iqx}; norm is unchanged exactly.
// Requires |q| < pi/dx.
WaveFunction apply_kick_instant(const WaveFunction& psi, double q);

// Interleaves n_substeps sub-kicks of q/n_substeps with Crank-Nicolson
// evolution across [t, t + delta_t]. Converges to apply_kick_instant as
// delta_t -> 0.
WaveFunction apply_kick_gradual(const WaveFunction& psi, double q, double delta_t,
                                int n_substeps, const PotentialSpec& pot, double t,
                                double dt, const ParticleSpec& particle);

// Deterministic evolution of the configured Gaussian packet. Kicks snap to the
// step boundary nearest t_k (gradual kicks: sub-kicks snapped across a window
// centred on t_k). Internally the run is rescaled to hbar = m = 1; records,
// snapshots and the final state are reported in the input units.
Trajectory propagate(const SimConfig& config);

} // namespace qevap

#endif
