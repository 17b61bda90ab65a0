#include "qevap/propagator.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qevap/errors.hpp"
#include "qevap/observables.hpp"

namespace qevap {

namespace {

// Crank-Nicolson kernel:  (1 + a Lap + i b V) psi+ = (1 - a Lap - i b V) psi
// with a = i dt hbar / (4 m dx^2), b = dt / (2 hbar), Lap the 3-point stencil
// folded into the tridiagonal coefficients. The implicit matrix is factored
// once (Thomas algorithm) and reused while the potential is static.
struct CnKernel {
  std::size_t n = 0;
  cdouble alpha;                 // off-diagonal of the implicit matrix is -alpha
  std::vector<cdouble> diag_im;  // implicit diagonal
  std::vector<cdouble> diag_ex;  // explicit diagonal
  std::vector<cdouble> inv_u;    // reciprocal U diagonal of the LU factorization
  std::vector<cdouble> l;        // L multipliers
  std::vector<cdouble> work;

  void build(const Grid1D& grid, const PotentialSpec& pot, double t_mid, double dt,
             const ParticleSpec& particle) {
    n = grid.n_points;
    const double dx = grid.dx();
    alpha = cdouble(0.0, dt * particle.hbar / (4.0 * particle.mass * dx * dx));
    const double b = dt / (2.0 * particle.hbar);
    diag_im.resize(n);
    diag_ex.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const cdouble v(0.0, b * potential_at(pot, grid.x(i), t_mid));
      diag_im[i] = 1.0 + 2.0 * alpha + v;
      diag_ex[i] = 1.0 - 2.0 * alpha - v;
    }
    factor();
  }

  void factor() {
    inv_u.resize(n);
    l.resize(n);
    work.resize(n);
    cdouble u = diag_im[0];
    for (std::size_t i = 0;;) {
      if (std::abs(u) < 1e-300)
        throw NumericsError("cn_step: tridiagonal pivot collapse (check dt, dx)");
      inv_u[i] = 1.0 / u;
      if (++i == n) break;
      l[i] = -alpha * inv_u[i - 1];
      u = diag_im[i] + l[i] * alpha;
    }
  }

  // psi <- A+^{-1} A- psi
  void step(std::vector<cdouble>& psi) {
    // explicit sweep into work
    work[0] = diag_ex[0] * psi[0] + alpha * psi[1];
    for (std::size_t i = 1; i + 1 < n; ++i)
      work[i] = diag_ex[i] * psi[i] + alpha * (psi[i - 1] + psi[i + 1]);
    work[n - 1] = diag_ex[n - 1] * psi[n - 1] + alpha * psi[n - 2];
    // forward substitution (in place)
    for (std::size_t i = 1; i < n; ++i) work[i] -= l[i] * work[i - 1];
    // back substitution
    psi[n - 1] = work[n - 1] * inv_u[n - 1];
    for (std::size_t i = n - 1; i-- > 0;)
      psi[i] = (work[i] + alpha * psi[i + 1]) * inv_u[i];
  }
};

bool potential_moves(const PotentialSpec& p) { return p.drift_velocity != 0.0; }

double edge_cell_probability(const std::vector<cdouble>& amp, double dx) {
  double m = 0.0;
  const std::size_t n = amp.size();
  const std::size_t k = std::min<std::size_t>(10, n / 2);
  for (std::size_t i = 0; i < k; ++i)
    m = std::max(m, std::max(std::norm(amp[i]), std::norm(amp[n - 1 - i])));
  return m * dx;
}

} // namespace

WaveFunction cn_step(const WaveFunction& psi, const PotentialSpec& pot, double t,
                     double dt, const ParticleSpec& particle) {
  if (!(dt > 0.0)) throw ConfigError("dt: must be > 0");
  CnKernel kernel;
  kernel.build(psi.grid, pot, t + 0.5 * dt, dt, particle);
  WaveFunction out = psi;
  kernel.step(out.amp);
  return out;
}

WaveFunction apply_kick_instant(const WaveFunction& psi, double q) {
  if (std::abs(q) >= M_PI / psi.grid.dx())
    throw ConfigError("q: |q| >= pi/dx would alias on this grid");
  WaveFunction out = psi;
  for (std::size_t i = 0; i < out.amp.size(); ++i)
    out.amp[i] *= std::polar(1.0, q * psi.grid.x(i));
  return out;
}

WaveFunction apply_kick_gradual(const WaveFunction& psi, double q, double delta_t,
                                int n_substeps, const PotentialSpec& pot, double t,
                                double dt, const ParticleSpec& particle) {
  if (!(delta_t > 0.0)) throw ConfigError("delta_t: must be > 0 (use the instant kick)");
  if (n_substeps < 1) throw ConfigError("n_substeps: must be >= 1");
  const double sub = delta_t / n_substeps;
  const long sub_steps = std::lround(sub / dt);
  if (sub_steps < 1) throw ConfigError("delta_t: not resolvable by dt at this n_substeps");
  WaveFunction out = psi;
  double tc = t;
  for (int j = 0; j < n_substeps; ++j) {
    out = apply_kick_instant(out, q / n_substeps);
    for (long s = 0; s < sub_steps; ++s) {
      out = cn_step(out, pot, tc, dt, particle);
      tc += dt;
    }
  }
  return out;
}

Trajectory propagate(const SimConfig& config) {
  config.validate();
  const ScaledConfig sc = to_dimensionless(config);
  const SimConfig& c = sc.config;
  const ScaleFactors& f = sc.factors;

  const long n_steps = std::lround(c.t_end / c.dt);
  if (n_steps < 1) throw ConfigError("time.t_end_s: shorter than one step");

  // Sub-kick schedule: step index -> transferred wave number, plus the
  // bracket boundaries of each KickEvent.
  std::map<long, double> schedule;
  std::vector<std::pair<long, long>> bracket_steps(c.kicks.size());
  for (std::size_t ki = 0; ki < c.kicks.size(); ++ki) {
    const KickEvent& k = c.kicks[ki];
    long first = n_steps, last = -1;
    if (k.delta_t <= 0.0) {
      const long s = std::clamp(std::lround(k.t_k / c.dt), 0L, n_steps);
      schedule[s] += k.q;
      first = last = s;
    } else {
      const int nsub = std::max(1, k.n_substeps);
      for (int j = 0; j < nsub; ++j) {
        const double tj = k.t_k - 0.5 * k.delta_t + (j + 0.5) * k.delta_t / nsub;
        const long s = std::clamp(std::lround(tj / c.dt), 0L, n_steps);
        schedule[s] += k.q / nsub;
        first = std::min(first, s);
        last = std::max(last, s);
      }
    }
    bracket_steps[ki] = {first, last};
  }

  std::vector<long> snap_steps;
  snap_steps.reserve(c.snapshot_times.size());
  for (double ts : c.snapshot_times)
    snap_steps.push_back(std::clamp(std::lround(ts / c.dt), 0L, n_steps));

  WaveFunction psi = make_gaussian_packet(c.grid, c.packet);
  CnKernel kernel;
  const bool moving = potential_moves(c.potential);
  if (!moving) kernel.build(c.grid, c.potential, 0.5 * c.dt, c.dt, c.particle);

  Trajectory traj;
  const double dx = c.grid.dx();
  const double left = c.potential.left_edge();

  auto record = [&](long s) {
    ExpectationRecord e = expectation_values(psi, c.potential, s * c.dt, c.particle);
    TrajectoryRecord r;
    static_cast<ExpectationRecord&>(r) = e;
    r.transmission = region_probability(psi, c.x_transmit);
    r.reflection = norm_squared(psi) - region_probability(psi, left);
    traj.records.push_back(r);
    const double edge = edge_cell_probability(psi.amp, dx);
    traj.max_edge_probability = std::max(traj.max_edge_probability, edge);
  };
  auto snapshot = [&](long s) {
    for (std::size_t i = 0; i < snap_steps.size(); ++i)
      if (snap_steps[i] == s) traj.snapshots.emplace_back(s * c.dt, psi);
  };
  auto kicks_at = [&](long s) {
    const auto it = schedule.find(s);
    if (it == schedule.end()) return;
    for (std::size_t ki = 0; ki < c.kicks.size(); ++ki)
      if (bracket_steps[ki].first == s) {
        KickBracket b;
        b.kick_index = ki;
        b.before = expectation_values(psi, c.potential, s * c.dt, c.particle);
        traj.kick_brackets.push_back(b);
      }
    psi = apply_kick_instant(psi, it->second);
    for (auto& b : traj.kick_brackets)
      if (bracket_steps[b.kick_index].second == s)
        b.after = expectation_values(psi, c.potential, s * c.dt, c.particle);
  };

  record(0);
  snapshot(0);
  for (long s = 0; s < n_steps; ++s) {
    kicks_at(s);
    if (moving) kernel.build(c.grid, c.potential, (s + 0.5) * c.dt, c.dt, c.particle);
    kernel.step(psi.amp);
    const long done = s + 1;
    if (done == n_steps || done % c.record_every == 0) record(done);
    snapshot(done);
  }
  kicks_at(n_steps);

  traj.boundary_warning = traj.max_edge_probability > 1e-8;

  // Convert everything back to the caller's units.
  for (auto& r : traj.records) {
    r.t *= f.time;
    r.mean_x *= f.length;
    r.mean_p *= f.momentum();
    r.e_kin *= f.energy;
    r.e_pot *= f.energy;
    r.e_tot *= f.energy;
  }
  for (auto& b : traj.kick_brackets) {
    for (ExpectationRecord* e : {&b.before, &b.after}) {
      e->t *= f.time;
      e->mean_x *= f.length;
      e->mean_p *= f.momentum();
      e->e_kin *= f.energy;
      e->e_pot *= f.energy;
      e->e_tot *= f.energy;
    }
  }
  std::vector<std::pair<double, WaveFunction>> snaps;
  snaps.reserve(traj.snapshots.size());
  for (auto& [ts, w] : traj.snapshots) snaps.emplace_back(ts * f.time, rescale(w, f));
  traj.snapshots = std::move(snaps);
  traj.final_state = rescale(psi, f);
  return traj;
}

} // namespace qevap
