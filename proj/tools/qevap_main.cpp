// Command-line front end: scenario bundles, parameter sweeps and the
// semi-analytic transmission model, emitting plot-ready CSV/JSONL plus a
// manifest sufficient to re-run every job.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "qevap/analytic.hpp"
#include "qevap/config_io.hpp"
#include "qevap/errors.hpp"
#include "qevap/experiments.hpp"
#include "qevap/observables.hpp"

namespace fs = std::filesystem;
using namespace qevap;

namespace {

struct CommonOpts {
  std::string out = "qevap-out";
  int parallel = 1;
  double tol = 1e-2;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_option("--parallel", o.parallel, "sweep concurrency")->check(CLI::PositiveNumber);
  cmd->add_option("--tol", o.tol, "plateau/fit tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--format", o.format, "csv|jsonl")
      ->check(CLI::IsMember({"csv", "jsonl"}));
}

std::string ext(const CommonOpts& o) { return o.format == "csv" ? ".csv" : ".jsonl"; }

fs::path make_out_dir(const CommonOpts& o) {
  fs::create_directories(o.out);
  return fs::path(o.out);
}

std::vector<std::string> base_metadata(const SimConfig& config) {
  return {std::string("tool: ") + tool_version, "config_hash: " + config_hash(config)};
}

void write_trajectory(const Trajectory& traj, const SimConfig& config,
                      const fs::path& path, const CommonOpts& o) {
  SeriesDoc doc;
  doc.metadata = base_metadata(config);
  doc.columns = {"t_s", "norm", "mean_x_m", "mean_p_kgms", "E_kin_J", "E_tot_J", "T", "R"};
  for (const auto& r : traj.records)
    doc.rows.push_back({r.t, r.norm, r.mean_x, r.mean_p, r.e_kin, r.e_tot,
                        r.transmission, r.reflection});
  write_series(doc, path, o.format);
}

void write_snapshots(const Trajectory& traj, const SimConfig& config,
                     const fs::path& dir, const std::string& prefix,
                     const CommonOpts& o) {
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    const auto& [t, psi] = traj.snapshots[i];
    SeriesDoc doc;
    doc.metadata = base_metadata(config);
    doc.metadata.push_back("snapshot_t_s: " + format_si(t));
    doc.columns = {"x_m", "re_psi", "im_psi"};
    doc.rows.reserve(psi.amp.size());
    for (std::size_t j = 0; j < psi.amp.size(); ++j)
      doc.rows.push_back({psi.grid.x(j), psi.amp[j].real(), psi.amp[j].imag()});
    write_series(doc, dir / (prefix + "snapshot_" + std::to_string(i) + ext(o)), o.format);
  }
}

std::string json_escape_free(const std::string& s) { return s; }  // keys are [a-z0-9._]

void write_sweep_points(const std::vector<SweepPoint>& points, const fs::path& path) {
  std::ofstream out(path);
  for (const auto& pt : points) {
    out << "{\"index\":" << pt.index << ",\"value\":" << format_si(pt.value)
        << ",\"T\":" << format_si(pt.transmission) << ",\"config\":{";
    bool first = true;
    for (const auto& [k, v] : to_key_values(pt.config)) {
      out << (first ? "" : ",") << "\"" << json_escape_free(k) << "\":\"" << v << "\"";
      first = false;
    }
    out << "}}\n";
  }
}

void warn_boundary(const Trajectory& traj, const std::string& name) {
  if (traj.boundary_warning)
    std::cerr << "warning: " << name << ": probability reached the grid edge ("
              << format_si(traj.max_edge_probability) << " per cell)\n";
}

std::vector<double> default_q_fractions() { return {0.0025, 0.005, 0.01, 0.02}; }

std::vector<double> parse_or(const std::vector<double>& given,
                             const std::vector<double>& fallback) {
  return given.empty() ? fallback : given;
}

int run_simulate(const std::string& config_path, const CommonOpts& o) {
  const SimConfig config = read_config(config_path);
  config.validate();  // fail before any output exists
  const fs::path dir = make_out_dir(o);
  Trajectory traj = propagate(config);
  warn_boundary(traj, "simulate");
  write_trajectory(traj, config, dir / ("records" + ext(o)), o);
  write_snapshots(traj, config, dir, "", o);
  write_manifest(config, dir / "manifest.txt",
                 {"command: simulate",
                  "boundary_warning: " + std::to_string(traj.boundary_warning)});
  return 0;
}

int run_fig1(const CommonOpts& o) {
  auto runs = run_fig1_scenarios();
  const fs::path dir = make_out_dir(o);
  std::ofstream sum(dir / ("fig1_summary" + ext(o)));
  if (o.format == "csv") {
    sum << "# " << tool_version << "\n";
    sum << "scenario,T,plateau_residual,t_evaluated_s\n";
  }
  for (auto& run : runs) {
    if (o.format == "csv")
      sum << run.name << "," << format_si(run.transmission.transmission) << ","
          << format_si(run.transmission.plateau_residual) << ","
          << format_si(run.transmission.t_evaluated) << "\n";
    else
      sum << "{\"scenario\":\"" << run.name
          << "\",\"T\":" << format_si(run.transmission.transmission)
          << ",\"plateau_residual\":" << format_si(run.transmission.plateau_residual)
          << ",\"t_evaluated_s\":" << format_si(run.transmission.t_evaluated) << "}\n";
    warn_boundary(run.trajectory, run.name);
    write_trajectory(run.trajectory, run.config, dir / (run.name + "_records" + ext(o)), o);
    write_snapshots(run.trajectory, run.config, dir, run.name + "_", o);
    write_manifest(run.config, dir / (run.name + "_manifest.txt"),
                   {"command: fig1", "scenario: " + run.name,
                    "T: " + format_si(run.transmission.transmission)});
    std::cout << run.name << "  T = " << format_si(run.transmission.transmission) << "\n";
  }
  return 0;
}

int run_sweep_time(std::vector<double> t_values, const CommonOpts& o) {
  SweepSpec spec;
  spec.base = scenarios::electron_step();
  const double t0 = scenarios::arrival_time(spec.base);
  spec.base.kicks.push_back({1e8, t0, 0.0, 1});
  spec.axis = SweepAxis::kick_time;
  if (t_values.empty())
    for (int i = -4; i <= 4; ++i) t_values.push_back(t0 + 0.3e-15 * i);
  spec.values = t_values;
  spec.parallelism = o.parallel;
  KickTimeSweep sweep = sweep_kick_time(spec);

  const fs::path dir = make_out_dir(o);
  SeriesDoc doc;
  doc.metadata = base_metadata(spec.base);
  doc.metadata.push_back("fit_T_max: " + format_si(sweep.fit.t_max));
  doc.metadata.push_back("fit_t0_s: " + format_si(sweep.fit.t0));
  doc.metadata.push_back("fit_delta_t_s: " + format_si(sweep.fit.delta_t));
  doc.metadata.push_back("fit_rms_residual_log10: " +
                         format_si(sweep.fit.rms_residual_log10));
  doc.columns = {"t_k_s", "T", "plateau_residual"};
  for (const auto& pt : sweep.points)
    doc.rows.push_back({pt.value, pt.transmission, pt.plateau_residual});
  write_series(doc, dir / ("sweep_time" + ext(o)), o.format);
  write_sweep_points(sweep.points, dir / "points.jsonl");
  write_manifest(spec.base, dir / "manifest.txt", {"command: sweep-time"});
  std::cout << "fit: T_max = " << format_si(sweep.fit.t_max)
            << ", t0 = " << format_si(sweep.fit.t0)
            << " s, 2*delta_t = " << format_si(2.0 * sweep.fit.delta_t) << " s\n";
  return 0;
}

int run_sweep_q(const std::string& which, std::vector<double> q_values,
                const CommonOpts& o) {
  QSweepCase qcase = which == "a"   ? QSweepCase::pre_barrier
                     : which == "b" ? QSweepCase::during_barrier
                                    : QSweepCase::during_step;
  const SimConfig base = qcase == QSweepCase::during_step
                             ? scenarios::electron_step()
                             : scenarios::electron_barrier();
  if (q_values.empty()) {
    const double kb = base.packet.k_bar;
    for (double f : default_q_fractions()) q_values.push_back(-f * kb);
    std::reverse(q_values.begin(), q_values.end());
    for (double f : default_q_fractions()) q_values.push_back(f * kb);
    std::sort(q_values.begin(), q_values.end());
  }
  auto points = sweep_q(qcase, q_values, o.parallel);
  const fs::path dir = make_out_dir(o);
  SeriesDoc doc;
  doc.metadata = base_metadata(points.front().config);
  doc.metadata.push_back("case: " + which);
  doc.columns = {"q_per_m", "T", "plateau_residual"};
  for (const auto& pt : points)
    doc.rows.push_back({pt.value, pt.transmission, pt.plateau_residual});
  write_series(doc, dir / ("sweep_q_" + which + ext(o)), o.format);
  write_sweep_points(points, dir / "points.jsonl");
  write_manifest(points.front().config, dir / "manifest.txt",
                 {"command: sweep-q", "case: " + which});
  return 0;
}

int run_ramp_sweep(std::vector<double> widths, const CommonOpts& o) {
  const SimConfig base = scenarios::electron_step();
  if (widths.empty()) {
    const double lam = 2.0 * M_PI / base.packet.k_bar;
    widths = {0.0, lam / 8.0, lam / 4.0, lam / 2.0, lam};
  }
  auto points = ramp_width_sweep(widths, o.parallel);
  const fs::path dir = make_out_dir(o);
  SeriesDoc doc;
  doc.metadata = base_metadata(points.front().config);
  doc.columns = {"ramp_width_m", "T", "plateau_residual"};
  for (const auto& pt : points)
    doc.rows.push_back({pt.value, pt.transmission, pt.plateau_residual});
  write_series(doc, dir / ("ramp_sweep" + ext(o)), o.format);
  write_sweep_points(points, dir / "points.jsonl");
  write_manifest(points.front().config, dir / "manifest.txt", {"command: ramp-sweep"});
  return 0;
}

int run_moving_step(double q, const CommonOpts& o) {
  MovingStepReport rep = moving_potential_equivalence(q);
  const fs::path dir = make_out_dir(o);
  SeriesDoc doc;
  doc.metadata = {std::string("tool: ") + tool_version,
                  "velocity_mps: " + format_si(rep.velocity)};
  doc.columns = {"q_per_m", "T_kick", "T_moving"};
  doc.rows.push_back({q, rep.t_kick, rep.t_moving});
  write_series(doc, dir / ("moving_step" + ext(o)), o.format);
  std::cout << "T_kick = " << format_si(rep.t_kick)
            << ", T_moving = " << format_si(rep.t_moving) << "\n";
  return 0;
}

int run_helium(bool sensitivity, const CommonOpts& o) {
  HeliumReport rep = helium_scenario(sensitivity, o.parallel);
  const fs::path dir = make_out_dir(o);
  SeriesDoc doc;
  doc.metadata = base_metadata(rep.config);
  doc.metadata.push_back("energy_transfer_J: " + format_si(rep.energy_transfer));
  doc.metadata.push_back("expected_energy_transfer_J: " +
                         format_si(rep.expected_energy_transfer));
  doc.columns = {"delta_k_fraction", "T_baseline", "T_kicked"};
  doc.rows.push_back({0.02, rep.t_baseline, rep.t_kicked});
  for (const auto& [frac, t] : rep.sensitivity)
    if (frac != 0.02) doc.rows.push_back({frac, -1.0, t});
  write_series(doc, dir / ("helium" + ext(o)), o.format);
  write_manifest(rep.config, dir / "manifest.txt", {"command: helium"});
  std::cout << "T_baseline = " << format_si(rep.t_baseline)
            << ", T_kicked = " << format_si(rep.t_kicked) << "\n";
  return 0;
}

int run_analytic(std::vector<double> q_values, const CommonOpts& o) {
  const SimConfig base = scenarios::electron_step();
  const StepEigenParams params = StepEigenParams::from_potential(
      base.potential.v0, base.particle.mass, base.particle.hbar);
  const SpectralAmplitude f = packet_spectral_amplitude(
      base.packet, params, scenarios::arrival_time(base));
  if (q_values.empty()) {
    const double kb = base.packet.k_bar;
    for (double fr : default_q_fractions()) {
      q_values.push_back(-fr * kb);
      q_values.push_back(fr * kb);
    }
    std::sort(q_values.begin(), q_values.end());
  }
  const SmallQFit fit = small_q_coefficient(f, params);
  const fs::path dir = make_out_dir(o);
  SeriesDoc doc;
  doc.metadata = base_metadata(base);
  doc.metadata.push_back("small_q_alpha_m2: " + format_si(fit.alpha));
  doc.metadata.push_back("small_q_max_rel_deviation: " + format_si(fit.max_rel_deviation));
  doc.columns = {"q_per_m", "T_analytic", "plateau_residual", "tail_fraction"};
  for (double q : q_values) {
    const AnalyticTransmission at = analytic_transmission(f, q, params);
    doc.rows.push_back({q, at.transmission, at.plateau_residual, at.tail_fraction});
  }
  write_series(doc, dir / ("analytic" + ext(o)), o.format);
  write_manifest(base, dir / "manifest.txt", {"command: analytic"});
  return 0;
}

int run_compare(std::vector<double> q_values, const CommonOpts& o) {
  const SimConfig base = scenarios::electron_step();
  if (q_values.empty()) {
    const double kb = base.packet.k_bar;
    q_values = {-0.01 * kb, -0.005 * kb, 0.005 * kb, 0.01 * kb, 0.02 * kb};
  }
  const StepEigenParams params = StepEigenParams::from_potential(
      base.potential.v0, base.particle.mass, base.particle.hbar);
  const SpectralAmplitude f = packet_spectral_amplitude(
      base.packet, params, scenarios::arrival_time(base));
  auto points = sweep_q(QSweepCase::during_step, q_values, o.parallel);
  const fs::path dir = make_out_dir(o);
  SeriesDoc doc;
  doc.metadata = base_metadata(base);
  doc.columns = {"q_per_m", "T_tdse", "T_analytic", "ratio"};
  for (const auto& pt : points) {
    const double ta = analytic_transmission(f, pt.value, params).transmission;
    doc.rows.push_back({pt.value, pt.transmission, ta, ta / pt.transmission});
  }
  write_series(doc, dir / ("compare" + ext(o)), o.format);
  write_manifest(base, dir / "manifest.txt", {"command: compare"});
  for (const auto& row : doc.rows)
    std::cout << "q = " << format_si(row[0]) << "  T_tdse = " << format_si(row[1])
              << "  T_analytic = " << format_si(row[2]) << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"1D momentum-kick Schroedinger scattering toolkit"};
  app.require_subcommand(1);

  CommonOpts o;
  std::string config_path, qcase = "c";
  std::vector<double> t_values, q_values, widths;
  double moving_q = 1e8;
  bool sensitivity = false;

  auto* simulate = app.add_subcommand("simulate", "single run from a config file");
  simulate->add_option("config", config_path, "key-value config file")->required();
  auto* fig1 = app.add_subcommand("fig1", "the four barrier/step kick scenarios");
  auto* sweep_time_cmd = app.add_subcommand("sweep-time", "transmission vs kick time");
  sweep_time_cmd->add_option("--t-values", t_values, "kick times, s");
  auto* sweep_q_cmd = app.add_subcommand("sweep-q", "transmission vs kick wave number");
  sweep_q_cmd->add_option("--case", qcase, "a|b|c")->check(CLI::IsMember({"a", "b", "c"}));
  sweep_q_cmd->add_option("--q-values", q_values, "kick wave numbers, m^-1");
  auto* ramp = app.add_subcommand("ramp-sweep", "transmission vs step ramp width");
  ramp->add_option("--widths", widths, "ramp widths, m");
  auto* moving = app.add_subcommand("moving-step", "kick vs moving potential");
  moving->add_option("--q", moving_q, "equivalent kick wave number, m^-1");
  auto* helium = app.add_subcommand("helium", "cold metastable helium prediction");
  helium->add_flag("--sensitivity", sensitivity, "also sweep the packet width");
  auto* analytic_cmd = app.add_subcommand("analytic", "semi-analytic transmission");
  analytic_cmd->add_option("--q-values", q_values, "kick wave numbers, m^-1");
  auto* compare = app.add_subcommand("compare", "solver vs semi-analytic table");
  compare->add_option("--q-values", q_values, "kick wave numbers, m^-1");

  for (CLI::App* cmd : {simulate, fig1, sweep_time_cmd, sweep_q_cmd, ramp, moving,
                        helium, analytic_cmd, compare})
    add_common(cmd, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return run_simulate(config_path, o);
    if (fig1->parsed()) return run_fig1(o);
    if (sweep_time_cmd->parsed()) return run_sweep_time(t_values, o);
    if (sweep_q_cmd->parsed()) return run_sweep_q(qcase, q_values, o);
    if (ramp->parsed()) return run_ramp_sweep(widths, o);
    if (moving->parsed()) return run_moving_step(moving_q, o);
    if (helium->parsed()) return run_helium(sensitivity, o);
    if (analytic_cmd->parsed()) return run_analytic(q_values, o);
    if (compare->parsed()) return run_compare(q_values, o);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const ConvergenceError& e) {
    std::cerr << "convergence error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
