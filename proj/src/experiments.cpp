#include "qevap/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "qevap/errors.hpp"

namespace qevap {

namespace scenarios {

namespace {

SimConfig electron_base() {
  using namespace constants;
  SimConfig c;
  c.particle = {electron_mass, hbar};
  const double e_i = 5.0 * electron_volt;
  const double sigma = 0.8 * nm;
  const double dk = 1.0 / (2.0 * sigma);
  // hbar^2 (k_bar^2 + dk^2) / 2m = E_i
  const double k_bar =
      std::sqrt(2.0 * electron_mass * e_i / (hbar * hbar) - dk * dk);
  c.packet = {-6.0 * nm, sigma, k_bar};
  c.grid = Grid1D(-24.0 * nm, 24.0 * nm, 32001);  // dx = 1.5 pm
  c.dt = 2.5e-18;
  c.t_end = 15.0 * fs;
  c.record_every = 20;
  return c;
}

} // namespace

SimConfig electron_barrier() {
  SimConfig c = electron_base();
  c.potential = PotentialSpec::make_barrier(10.0 * constants::electron_volt, 0.0,
                                            1.0 * constants::nm);
  c.x_transmit = c.potential.x1;  // barrier exit
  return c;
}

SimConfig electron_step() {
  SimConfig c = electron_base();
  c.potential = PotentialSpec::make_step(10.0 * constants::electron_volt, 0.0);
  const double kappa0 =
      std::sqrt(2.0 * c.particle.mass * c.potential.v0) / c.particle.hbar;
  // past the evanescent zone: edge + 5 penetration depths
  c.x_transmit = c.potential.x_edge + 5.0 * evanescent_depth(kappa0, c.packet.k_bar);
  return c;
}

double arrival_time(const SimConfig& config) {
  return config.particle.mass * std::abs(config.packet.x_i) /
         (config.particle.hbar * config.packet.k_bar);
}

double plateau_window(const SimConfig& config) { return config.t_end / 15.0; }

SimConfig helium_step(double delta_k_fraction, bool with_kick) {
  using namespace constants;
  SimConfig c;
  c.particle = {helium4_mass, hbar};
  const double e_i = 1e-11 * electron_volt;
  const double v0 = 1.5e-11 * electron_volt;
  const double k_bar = std::sqrt(2.0 * helium4_mass * e_i / (hbar * hbar) /
                                 (1.0 + delta_k_fraction * delta_k_fraction));
  const double sigma = 1.0 / (2.0 * delta_k_fraction * k_bar);
  c.packet = {-7.5 * sigma, sigma, k_bar};
  c.potential = PotentialSpec::make_step(v0, 0.0);
  const double kappa0 = std::sqrt(2.0 * helium4_mass * v0) / hbar;
  c.x_transmit = 5.0 * evanescent_depth(kappa0, k_bar);

  // Same dimensionless resolution as the electron runs: dx' = 0.02/k_bar,
  // dt' = 0.04 m/(hbar k_bar^2); in SI these steps are macroscopic.
  const double dx = 0.02 / k_bar;
  const double t_unit = helium4_mass / (hbar * k_bar * k_bar);
  const double x_min = c.packet.x_i - 22.0 * sigma;
  const double x_max = 22.0 * sigma;
  const auto n = static_cast<std::size_t>(std::ceil((x_max - x_min) / dx)) + 1;
  c.grid = Grid1D(x_min, x_min + dx * static_cast<double>(n - 1), n);
  c.dt = 0.04 * t_unit;
  const double t0 = arrival_time(c);
  c.t_end = 2.6 * t0;
  c.record_every = 30;
  if (with_kick) c.kicks.push_back({-5e5, t0, 0.0, 1});
  return c;
}

} // namespace scenarios

std::vector<SweepPoint> run_sweep(const SweepSpec& spec) {
  if (spec.values.empty()) throw ConfigError("sweep.values: must be non-empty");
  for (std::size_t i = 1; i < spec.values.size(); ++i) {
    const bool up = spec.values[1] > spec.values[0];
    if ((up && spec.values[i] <= spec.values[i - 1]) ||
        (!up && spec.values[i] >= spec.values[i - 1]))
      throw ConfigError("sweep.values: must be strictly monotone");
  }
  if (spec.parallelism < 1) throw ConfigError("sweep.parallelism: must be >= 1");

  auto materialize = [&spec](double v) {
    SimConfig c = spec.base;
    switch (spec.axis) {
      case SweepAxis::kick_time:
        if (c.kicks.empty()) throw ConfigError("sweep: kick_time axis needs a kick");
        c.kicks.back().t_k = v;
        break;
      case SweepAxis::kick_q:
        if (c.kicks.empty()) throw ConfigError("sweep: kick_q axis needs a kick");
        c.kicks.back().q = v;
        break;
      case SweepAxis::ramp_width:
        c.potential.kind = PotentialKind::smoothed_step;
        c.potential.ramp_width = v;
        break;
      case SweepAxis::step_velocity:
        c.potential.drift_velocity = v;
        break;
    }
    return c;
  };

  std::vector<SweepPoint> out(spec.values.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= spec.values.size()) return;
      SweepPoint& pt = out[i];
      pt.index = i;
      pt.value = spec.values[i];
      pt.config = materialize(spec.values[i]);
      Trajectory traj = propagate(pt.config);
      const TransmissionResult tr = asymptotic_transmission(
          traj, pt.config, scenarios::plateau_window(pt.config), 1e-2);
      pt.transmission = tr.transmission;
      pt.plateau_residual = tr.plateau_residual;
      pt.converged = tr.converged;
    }
  };
  const int n_threads =
      std::min<int>(spec.parallelism, static_cast<int>(spec.values.size()));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return out;
}

std::vector<ScenarioRun> run_fig1_scenarios() {
  std::vector<ScenarioRun> out;
  const SimConfig barrier = scenarios::electron_barrier();
  const SimConfig step = scenarios::electron_step();
  const double t0 = scenarios::arrival_time(barrier);

  auto one = [&](std::string name, SimConfig c, double t_kick) {
    if (t_kick >= 0.0) c.kicks.push_back({1e8, t_kick, 0.0, 1});
    c.snapshot_times = {0.0, t0, c.t_end};
    ScenarioRun run;
    run.name = std::move(name);
    run.config = c;
    run.trajectory = propagate(c);
    run.transmission = asymptotic_transmission(run.trajectory, c,
                                               scenarios::plateau_window(c), 1e-2);
    out.push_back(std::move(run));
  };
  one("barrier_no_kick", barrier, -1.0);
  one("barrier_kick_at_0", barrier, 0.0);
  one("barrier_kick_at_t0", barrier, t0);
  one("step_kick_at_t0", step, t0);
  return out;
}

GaussianFit fit_log_gaussian(const std::vector<std::pair<double, double>>& samples) {
  // Linear least squares of ln T on (1, u, u^2) with u centred and scaled
  // for conditioning; the parabola's apex gives (t0, T_max, delta_t).
  const std::size_t n = samples.size();
  if (n < 3) throw ConfigError("fit_log_gaussian: needs >= 3 points");
  const double tc = 0.5 * (samples.front().first + samples.back().first);
  const double ts = std::max(std::abs(samples.back().first - tc), 1e-300);
  double m[3][3] = {{0}}, rhs[3] = {0};
  for (const auto& [t, T] : samples) {
    const double u = (t - tc) / ts;
    const double y = std::log(std::max(T, 1e-300));
    const double row[3] = {1.0, u, u * u};
    for (int a = 0; a < 3; ++a) {
      rhs[a] += row[a] * y;
      for (int b = 0; b < 3; ++b) m[a][b] += row[a] * row[b];
    }
  }
  // 3x3 Gauss-Jordan
  double aug[3][4];
  for (int a = 0; a < 3; ++a) {
    for (int b = 0; b < 3; ++b) aug[a][b] = m[a][b];
    aug[a][3] = rhs[a];
  }
  for (int col = 0; col < 3; ++col) {
    int piv = col;
    for (int rrow = col + 1; rrow < 3; ++rrow)
      if (std::abs(aug[rrow][col]) > std::abs(aug[piv][col])) piv = rrow;
    std::swap(aug[col], aug[piv]);
    if (std::abs(aug[col][col]) < 1e-30)
      throw ConvergenceError("fit_log_gaussian: singular fit system");
    for (int rrow = 0; rrow < 3; ++rrow) {
      if (rrow == col) continue;
      const double fct = aug[rrow][col] / aug[col][col];
      for (int b = col; b < 4; ++b) aug[rrow][b] -= fct * aug[col][b];
    }
  }
  const double c0 = aug[0][3] / aug[0][0];
  const double c1 = aug[1][3] / aug[1][1];
  const double c2 = aug[2][3] / aug[2][2];
  if (!(c2 < 0.0))
    throw ConvergenceError("fit_log_gaussian: no peak inside the sampled window");
  GaussianFit fit;
  fit.t0 = tc - ts * c1 / (2.0 * c2);
  fit.delta_t = ts * std::sqrt(-1.0 / (2.0 * c2));
  fit.t_max = std::exp(c0 - c1 * c1 / (4.0 * c2));
  double ss = 0.0;
  for (const auto& [t, T] : samples) {
    const double model = fit.t_max * std::exp(-(t - fit.t0) * (t - fit.t0) /
                                              (2.0 * fit.delta_t * fit.delta_t));
    const double d = std::log10(std::max(T, 1e-300)) -
                     std::log10(std::max(model, 1e-300));
    ss += d * d;
  }
  fit.rms_residual_log10 = std::sqrt(ss / static_cast<double>(n));
  if (fit.rms_residual_log10 > 0.5)
    throw ConvergenceError("fit_log_gaussian: residual above 0.5 in log10 units");
  return fit;
}

KickTimeSweep sweep_kick_time(const SweepSpec& spec) {
  if (spec.axis != SweepAxis::kick_time)
    throw ConfigError("sweep.axis: sweep_kick_time needs the kick_time axis");
  KickTimeSweep out;
  out.points = run_sweep(spec);
  std::vector<std::pair<double, double>> samples;
  samples.reserve(out.points.size());
  for (const SweepPoint& pt : out.points) samples.emplace_back(pt.value, pt.transmission);
  out.fit = fit_log_gaussian(samples);
  return out;
}

std::vector<SweepPoint> sweep_q(QSweepCase which, const std::vector<double>& q_values,
                                int parallelism) {
  SweepSpec spec;
  spec.base = (which == QSweepCase::during_step) ? scenarios::electron_step()
                                                 : scenarios::electron_barrier();
  const double t_kick =
      (which == QSweepCase::pre_barrier) ? 0.0 : scenarios::arrival_time(spec.base);
  spec.base.kicks.push_back({0.0, t_kick, 0.0, 1});
  spec.axis = SweepAxis::kick_q;
  spec.values = q_values;
  spec.parallelism = parallelism;
  return run_sweep(spec);
}

std::vector<SweepPoint> ramp_width_sweep(const std::vector<double>& widths,
                                         int parallelism) {
  SweepSpec spec;
  spec.base = scenarios::electron_step();
  spec.base.potential.kind = PotentialKind::smoothed_step;
  spec.base.kicks.push_back({1e8, scenarios::arrival_time(spec.base), 0.0, 1});
  spec.axis = SweepAxis::ramp_width;
  spec.values = widths;
  spec.parallelism = parallelism;
  return run_sweep(spec);
}

MovingStepReport moving_potential_equivalence(double q) {
  SimConfig base = scenarios::electron_step();
  // A hard step cannot move between grid points; a ramp two cells wide keeps
  // the moving profile smooth while staying far steeper than the de Broglie
  // wavelength.
  base.potential.kind = PotentialKind::smoothed_step;
  base.potential.ramp_width = 2.0 * base.grid.dx();
  const double t0 = scenarios::arrival_time(base);

  MovingStepReport rep;
  rep.velocity = base.particle.hbar * q / base.particle.mass;

  SimConfig kicked = base;
  kicked.kicks.push_back({q, t0, 0.0, 1});
  Trajectory tk = propagate(kicked);
  rep.t_kick = asymptotic_transmission(tk, kicked, scenarios::plateau_window(kicked), 1e-2)
                   .transmission;

  SimConfig moving = base;
  moving.potential.drift_velocity = rep.velocity;
  moving.potential.drift_start = t0;
  Trajectory tm = propagate(moving);
  rep.t_moving =
      asymptotic_transmission(tm, moving, scenarios::plateau_window(moving), 1e-2)
          .transmission;
  return rep;
}

HeliumReport helium_scenario(bool with_sensitivity, int parallelism) {
  HeliumReport rep;
  rep.config = scenarios::helium_step(0.02, true);

  SimConfig baseline = rep.config;
  baseline.kicks.clear();
  Trajectory tb = propagate(baseline);
  rep.t_baseline =
      asymptotic_transmission(tb, baseline, scenarios::plateau_window(baseline), 1e-2)
          .transmission;

  Trajectory tk = propagate(rep.config);
  rep.t_kicked =
      asymptotic_transmission(tk, rep.config, scenarios::plateau_window(rep.config), 1e-2)
          .transmission;
  if (!tk.kick_brackets.empty())
    rep.energy_transfer =
        energy_transfer(tk.kick_brackets[0].before, tk.kick_brackets[0].after);
  const double q = rep.config.kicks[0].q;
  rep.expected_energy_transfer = rep.config.particle.hbar * rep.config.particle.hbar *
                                 q * q / (2.0 * rep.config.particle.mass);

  if (with_sensitivity) {
    std::atomic<std::size_t> next{0};
    const std::vector<double> fractions = {0.02, 0.05, 0.10};
    std::vector<double> ts(fractions.size());
    auto worker = [&]() {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= fractions.size()) return;
        SimConfig c = scenarios::helium_step(fractions[i], true);
        Trajectory t = propagate(c);
        ts[i] = asymptotic_transmission(t, c, scenarios::plateau_window(c), 1e-2)
                    .transmission;
      }
    };
    const int n_threads = std::clamp(parallelism, 1, static_cast<int>(fractions.size()));
    std::vector<std::thread> pool;
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    for (std::size_t i = 0; i < fractions.size(); ++i)
      rep.sensitivity.emplace_back(fractions[i], ts[i]);
  }
  return rep;
}

namespace {

KickEnergyReport kick_energy(const SimConfig& base, double q, double t_kick) {
  SimConfig c = base;
  c.kicks.push_back({q, t_kick, 0.0, 1});
  c.t_end = std::min(c.t_end, t_kick + 20.0 * c.dt);  // only the bracket is needed
  Trajectory traj = propagate(c);
  KickEnergyReport rep;
  rep.t_kick = t_kick;
  rep.e_before = traj.kick_brackets.at(0).before.e_tot;
  rep.e_after = traj.kick_brackets.at(0).after.e_tot;
  rep.delta_e = rep.e_after - rep.e_before;
  rep.expected = c.particle.hbar * c.particle.hbar * q * q / (2.0 * c.particle.mass);
  return rep;
}

} // namespace

KickEnergyReport kick_energy_at_step(double q) {
  SimConfig base = scenarios::electron_step();
  const double t0 = scenarios::arrival_time(base);

  // Locate the <p> zero crossing around t0 from an unkicked run; that is the
  // instant of full interaction where the kick transfers hbar^2 q^2 / 2m only.
  SimConfig scan = base;
  scan.t_end = t0 + 1.5e-15;
  scan.record_every = 4;
  Trajectory traj = propagate(scan);
  double t_cross = -1.0;
  for (std::size_t i = 1; i < traj.records.size(); ++i) {
    const auto& r0 = traj.records[i - 1];
    const auto& r1 = traj.records[i];
    if (r0.t > t0 - 1.5e-15 && r0.mean_p >= 0.0 && r1.mean_p < 0.0) {
      const double w = r0.mean_p / (r0.mean_p - r1.mean_p);
      t_cross = r0.t + w * (r1.t - r0.t);
      break;
    }
  }
  if (t_cross < 0.0)
    throw ConvergenceError("kick_energy_at_step: no <p> zero crossing near t0");
  return kick_energy(base, q, t_cross);
}

KickEnergyReport kick_energy_free(double q) {
  return kick_energy(scenarios::electron_step(), q, 0.0);
}

} // namespace qevap
