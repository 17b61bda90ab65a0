#ifndef QEVAP_EXPERIMENTS_HPP
#define QEVAP_EXPERIMENTS_HPP

#include <functional>
#include <string>
#include <vector>

#include "qevap/observables.hpp"
#include "qevap/propagator.hpp"

namespace qevap {

// ---- paper scenarios -------------------------------------------------------

namespace scenarios {

// 5 eV electron Gaussian packet against the 10 eV rectangular barrier
// [0, 1 nm] (or the 10 eV step at x = 0): sigma = 0.8 nm, x_i = -6 nm,
// dx = 1.5 pm on [-24, 24] nm, dt = 2.5 as, t_end = 15 fs. k_bar is fixed by
// hbar^2 (k_bar^2 + delta_k^2) / 2m = 5 eV.
SimConfig electron_barrier();
SimConfig electron_step();

// Centroid arrival time t0 = m |x_i| / (hbar k_bar).
double arrival_time(const SimConfig& config);

// Plateau detection window used for a run of this length (1 fs at the
// electron scenario's 15 fs, scaled proportionally otherwise).
double plateau_window(const SimConfig& config);

// Cold metastable helium-4 against a 1.5e-11 eV step: E_i = 1e-11 eV,
// delta_k = delta_k_fraction * k_bar (packet width is not fixed by the paper),
// kick q = -5e5 m^-1 at the arrival time. Step sizes follow the electron
// scenario's dimensionless grid.
SimConfig helium_step(double delta_k_fraction = 0.02, bool with_kick = true);

} // namespace scenarios

// ---- sweep engine ----------------------------------------------------------

enum class SweepAxis { kick_time, kick_q, ramp_width, step_velocity };

struct SweepSpec {
  SimConfig base;
  SweepAxis axis = SweepAxis::kick_time;
  std::vector<double> values;  // non-empty, strictly monotone
  int parallelism = 1;
};

struct SweepPoint {
  std::size_t index = 0;
  double value = 0.0;
  double transmission = 0.0;
  double plateau_residual = 0.0;
  bool converged = false;
  SimConfig config;  // fully resolved configuration of this point
};

// One propagation per value; points execute concurrently up to `parallelism`
// and are returned in input order regardless of it.
std::vector<SweepPoint> run_sweep(const SweepSpec& spec);

// ---- figure reproductions --------------------------------------------------

struct ScenarioRun {
  std::string name;
  SimConfig config;
  Trajectory trajectory;
  TransmissionResult transmission;
};

// The four Fig. 1 runs: (barrier, no kick), (barrier, kick at 0),
// (barrier, kick at t0), (step, kick at t0), with snapshots at 0, t0, t_end.
std::vector<ScenarioRun> run_fig1_scenarios();

// Gaussian T_max exp(-(t-t0)^2 / 2 dt^2) fitted to a kick-time sweep by
// linear least squares on log T against (1, t, t^2).
struct GaussianFit {
  double t_max = 0.0;
  double t0 = 0.0;
  double delta_t = 0.0;
  double rms_residual_log10 = 0.0;
};

struct KickTimeSweep {
  std::vector<SweepPoint> points;
  GaussianFit fit;
};

// The fit itself, on (t, T) samples with T > 0. Throws ConvergenceError when
// the parabola in log T has no maximum or the rms log10 residual exceeds 0.5.
GaussianFit fit_log_gaussian(const std::vector<std::pair<double, double>>& samples);

// Fig. 2: transmission against the kick time (step scenario by default).
// Throws ConvergenceError if the log10 fit residual exceeds 0.5.
KickTimeSweep sweep_kick_time(const SweepSpec& spec);

enum class QSweepCase {
  pre_barrier,     // (a) kick at t = 0, barrier
  during_barrier,  // (b) kick at t0, barrier
  during_step,     // (c) kick at t0, step
};

// Fig. 3: transmission against the transferred wave number.
std::vector<SweepPoint> sweep_q(QSweepCase which, const std::vector<double>& q_values,
                                int parallelism = 1);

// Footnote-3 property: t0-kick step scenario against the smoothed-step ramp
// width; steeper slopes transmit more.
std::vector<SweepPoint> ramp_width_sweep(const std::vector<double>& widths,
                                         int parallelism = 1);

// Galilean counterpart: (i) static step, kick q at t0 versus (ii) unkicked
// step set moving at v = hbar q / m from t0 on. Both use a smoothed edge a
// couple of cells wide so the moving profile changes smoothly between grid
// points.
struct MovingStepReport {
  double t_kick = 0.0;
  double t_moving = 0.0;
  double velocity = 0.0;
};
MovingStepReport moving_potential_equivalence(double q);

// Cold-helium prediction, plus the packet-width sensitivity of the kicked
// transmission (the paper does not state the width).
struct HeliumReport {
  double t_baseline = 0.0;
  double t_kicked = 0.0;
  double energy_transfer = 0.0;  // J, from the kick brackets
  double expected_energy_transfer = 0.0;  // hbar^2 q^2 / 2m
  std::vector<std::pair<double, double>> sensitivity;  // (delta_k/k_bar, T)
  SimConfig config;
};
HeliumReport helium_scenario(bool with_sensitivity = false, int parallelism = 1);

// Energy law at the step: the kick is placed at the measured zero crossing of
// <p> (the moment of full interaction, a few tens of attoseconds past t0)
// where Eq.-(7)-style bookkeeping applies; delta_e then equals
// hbar^2 q^2 / 2m up to the kick-time snap.
struct KickEnergyReport {
  double t_kick = 0.0;
  double e_before = 0.0;
  double e_after = 0.0;
  double delta_e = 0.0;
  double expected = 0.0;  // hbar^2 q^2 / 2m
};
KickEnergyReport kick_energy_at_step(double q);

// Same bookkeeping for a kick at t = 0 far from the potential; returns the
// measured E_f (the cross term hbar^2 k_bar q / m dominates there).
KickEnergyReport kick_energy_free(double q);

} // namespace qevap

#endif
