#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qevap/constants.hpp"
#include "qevap/errors.hpp"
#include "qevap/observables.hpp"
#include "qevap/propagator.hpp"
#include "qevap/scaling.hpp"
#include "qevap/spectrum.hpp"

using namespace qevap;
using namespace qevap::constants;

namespace {

// small free-particle configuration, cheap enough for per-step assertions
SimConfig mini_config() {
  SimConfig c;
  c.particle = {electron_mass, hbar};
  c.grid = Grid1D(-4e-9, 4e-9, 5335);  // dx ~ 1.5 pm
  c.potential = PotentialSpec::make_step(10.0 * electron_volt, 3.5e-9);
  c.packet = {-1e-9, 0.3e-9, 3e9};
  c.dt = 2.5e-18;
  c.t_end = 2.5e-15;
  c.x_transmit = 3.6e-9;
  c.record_every = 50;
  return c;
}

} // namespace

TEST_CASE("potential_at: shapes, drift, smoothing limit") {
  auto step = PotentialSpec::make_step(10.0 * electron_volt, 0.0);
  CHECK(potential_at(step, -1e-12, 0.0) == 0.0);
  CHECK(potential_at(step, 1e-12, 0.0) == 10.0 * electron_volt);

  step.drift_velocity = 1000.0;
  CHECK(potential_at(step, 0.5e-12, 1e-15) == 0.0);  // edge moved to 1e-12 m
  CHECK(potential_at(step, 1.5e-12, 1e-15) == 10.0 * electron_volt);
  step.drift_start = 2e-15;  // not yet moving
  CHECK(potential_at(step, 0.5e-12, 1e-15) == 10.0 * electron_volt);

  auto barrier = PotentialSpec::make_barrier(10.0 * electron_volt, 0.0, 1e-9);
  CHECK(potential_at(barrier, 0.5e-9, 0.0) == 10.0 * electron_volt);
  CHECK(potential_at(barrier, 1.5e-9, 0.0) == 0.0);
  CHECK(potential_at(barrier, -0.5e-9, 0.0) == 0.0);

  auto smooth = PotentialSpec::make_smoothed_step(10.0 * electron_volt, 0.0, 0.0);
  for (double x : {-3e-10, -1e-12, 1e-12, 3e-10})
    CHECK(potential_at(smooth, x, 0.0) == potential_at(step, x, 2e-15));
  smooth.ramp_width = 1e-10;
  CHECK(potential_at(smooth, 0.0, 0.0) == doctest::Approx(5.0 * electron_volt));
}

TEST_CASE("cn_step: free-packet drift, spreading, unitarity") {
  SimConfig c = mini_config();
  c.potential = PotentialSpec::make_step(10.0 * electron_volt, 3.9e-9);  // far away
  WaveFunction psi = make_gaussian_packet(c.grid, c.packet);

  const int steps = 1000;
  for (int s = 0; s < steps; ++s)
    psi = cn_step(psi, c.potential, s * c.dt, c.dt, c.particle);

  const double t = steps * c.dt;
  const ExpectationRecord r = expectation_values(psi, c.potential, t, c.particle);
  const double drift = hbar * c.packet.k_bar / electron_mass * t;
  CHECK(r.mean_x - c.packet.x_i == doctest::Approx(drift).epsilon(0.005));
  CHECK(r.norm == doctest::Approx(1.0).epsilon(1e-9));

  // analytic free-Gaussian spreading
  double var = 0.0;
  for (std::size_t i = 0; i < psi.amp.size(); ++i) {
    const double d = psi.grid.x(i) - r.mean_x;
    var += d * d * std::norm(psi.amp[i]);
  }
  var *= psi.grid.dx();
  const double s0 = c.packet.sigma;
  const double spread = hbar * t / (2.0 * electron_mass * s0 * s0);
  const double expected = s0 * s0 * (1.0 + spread * spread);
  CHECK(var == doctest::Approx(expected).epsilon(0.01));
}

TEST_CASE("cn_step: norm preserved over 6000 steps") {
  SimConfig c = mini_config();
  WaveFunction psi = make_gaussian_packet(c.grid, c.packet);
  Trajectory traj;
  for (int s = 0; s < 6000; ++s)
    psi = cn_step(psi, c.potential, s * c.dt, c.dt, c.particle);
  CHECK(norm_squared(psi) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("apply_kick_instant: unitary, identity, momentum shift") {
  SimConfig c = mini_config();
  WaveFunction psi = make_gaussian_packet(c.grid, c.packet);
  const double q = 1e8;

  WaveFunction kicked = apply_kick_instant(psi, q);
  CHECK(norm_squared(kicked) == doctest::Approx(norm_squared(psi)).epsilon(1e-14));

  WaveFunction same = apply_kick_instant(psi, 0.0);
  for (std::size_t i = 0; i < psi.amp.size(); i += 97)
    CHECK(same.amp[i] == psi.amp[i]);

  const ExpectationRecord r0 = expectation_values(psi, c.potential, 0.0, c.particle);
  const ExpectationRecord r1 = expectation_values(kicked, c.potential, 0.0, c.particle);
  CHECK(r1.mean_p - r0.mean_p == doctest::Approx(hbar * q).epsilon(1e-9));

  CHECK_THROWS_AS(apply_kick_instant(psi, M_PI / c.grid.dx()), ConfigError);
}

TEST_CASE("apply_kick_gradual: instant limit and resolvability error") {
  SimConfig c = mini_config();
  WaveFunction psi = make_gaussian_packet(c.grid, c.packet);

  // n_substeps = 1 with delta_t = dt is one kick plus one evolution step
  WaveFunction a = apply_kick_gradual(psi, 1e8, c.dt, 1, c.potential, 0.0, c.dt,
                                      c.particle);
  WaveFunction b = cn_step(apply_kick_instant(psi, 1e8), c.potential, 0.0, c.dt,
                           c.particle);
  double max_diff = 0.0;
  for (std::size_t i = 0; i < a.amp.size(); ++i)
    max_diff = std::max(max_diff, std::abs(a.amp[i] - b.amp[i]));
  CHECK(max_diff == 0.0);

  CHECK_THROWS_AS(apply_kick_gradual(psi, 1e8, 0.0, 1, c.potential, 0.0, c.dt, c.particle),
                  ConfigError);
  CHECK_THROWS_AS(
      apply_kick_gradual(psi, 1e8, c.dt, 8, c.potential, 0.0, c.dt, c.particle),
      ConfigError);  // sub-window below dt
}

TEST_CASE("propagate: record ordering, T+R bound, determinism") {
  SimConfig c = mini_config();
  c.kicks.push_back({1e8, 1.0e-15, 0.0, 1});
  Trajectory t1 = propagate(c);
  Trajectory t2 = propagate(c);

  REQUIRE(t1.records.size() > 3);
  for (std::size_t i = 1; i < t1.records.size(); ++i) {
    CHECK(t1.records[i].t > t1.records[i - 1].t);
    CHECK(t1.records[i].transmission + t1.records[i].reflection <= 1.0 + 1e-6);
    CHECK(t1.records[i].norm == doctest::Approx(1.0).epsilon(1e-6));
  }
  REQUIRE(t1.final_state.amp.size() == t2.final_state.amp.size());
  for (std::size_t i = 0; i < t1.final_state.amp.size(); i += 31)
    CHECK(t1.final_state.amp[i] == t2.final_state.amp[i]);  // bit-identical

  REQUIRE(t1.kick_brackets.size() == 1);
  CHECK(t1.kick_brackets[0].after.e_tot > t1.kick_brackets[0].before.e_tot);
}

TEST_CASE("propagate: kick before interaction shifts the spectrum") {
  SimConfig c = mini_config();
  c.potential = PotentialSpec::make_step(10.0 * electron_volt, 3.9e-9);
  c.t_end = 1.25e-15;  // packet stays >= 4 sigma from the step
  const double bin = 2.0 * M_PI / ((c.grid.n_points - 1) * c.grid.dx());
  const double q = 20.0 * bin;
  c.kicks.push_back({q, 0.0, 0.0, 1});

  Trajectory traj = propagate(c);
  auto final_spec = momentum_spectrum(traj.final_state);

  WaveFunction psi0 = make_gaussian_packet(c.grid, c.packet);
  auto init_spec = momentum_spectrum(psi0);

  double l2 = 0.0, ref = 0.0;
  for (std::size_t j = 0; j + 20 < init_spec.size(); ++j) {
    const double d = final_spec[j + 20].density - init_spec[j].density;
    l2 += d * d;
    ref += init_spec[j].density * init_spec[j].density;
  }
  CHECK(std::sqrt(l2 / ref) < 0.01);
}

TEST_CASE("propagate: SI and dimensionless runs agree") {
  SimConfig c = mini_config();
  c.kicks.push_back({1e8, 1.0e-15, 0.0, 1});
  const double t_si = propagate(c).records.back().transmission;
  const ScaledConfig sc = to_dimensionless(c);
  const double t_scaled = propagate(sc.config).records.back().transmission;
  CHECK(t_scaled == doctest::Approx(t_si).epsilon(1e-6));
}

TEST_CASE("propagate: boundary contamination warning") {
  SimConfig c = mini_config();
  c.grid = Grid1D(-2e-9, 2e-9, 2668);
  c.potential = PotentialSpec::make_step(10.0 * electron_volt, 1.9e-9);
  c.packet = {-0.7e-9, 0.17e-9, 3e9};  // reaches the left wall after reflection? no:
  c.t_end = 6e-15;                     // long enough to spread into both walls
  c.x_transmit = 1.95e-9;
  Trajectory traj = propagate(c);
  CHECK(traj.boundary_warning);
  CHECK(traj.max_edge_probability > 1e-8);
}

TEST_CASE("config validation errors") {
  SimConfig c = mini_config();
  c.kicks.push_back({1e8, 5e-15, 0.0, 1});  // beyond t_end
  CHECK_THROWS_AS(propagate(c), ConfigError);
  c = mini_config();
  c.kicks.push_back({M_PI / c.grid.dx() * 1.01, 1e-15, 0.0, 1});
  CHECK_THROWS_AS(propagate(c), ConfigError);
  c = mini_config();
  c.dt = -1.0;
  CHECK_THROWS_AS(propagate(c), ConfigError);
  c = mini_config();
  c.x_transmit = 100.0;
  CHECK_THROWS_AS(propagate(c), ConfigError);
  c = mini_config();
  c.kicks.push_back({1e8, 2e-15, 0.0, 1});
  c.kicks.push_back({1e8, 1e-15, 0.0, 1});  // unsorted
  CHECK_THROWS_AS(propagate(c), ConfigError);
}
