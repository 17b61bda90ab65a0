#ifndef QEVAP_ANALYTIC_HPP
#define QEVAP_ANALYTIC_HPP

#include <cstddef>
#include <vector>

#include "qevap/constants.hpp"
#include "qevap/packet.hpp"
#include "qevap/wavefunction.hpp"

namespace qevap {

// Potential-step eigenproblem parameters, kappa0 = sqrt(2 m v0)/hbar.
struct StepEigenParams {
  double kappa0 = 0.0;  // m^-1
  double v0 = 0.0;      // J
  double m = 0.0;       // kg
  double hbar = constants::hbar;

  static StepEigenParams from_potential(double v0, double m, double hbar);
  void check_consistency() const;  // kappa0^2 == 2 m v0 / hbar^2 to 1e-12 relative
};

enum class Orientation { plus, minus };

// Real scattering amplitudes of the degenerate states above the step.
// k_prime is the wave number on the free side (energy hbar^2 k'^2 / 2m),
// k_pp = sqrt(k'^2 - kappa0^2) the wave number above the step.
struct AboveAmplitudes {
  double k_prime = 0.0;
  double k_pp = 0.0;
  double r = 0.0;  // reflection amplitude
  double t = 0.0;  // transmission amplitude
};
AboveAmplitudes above_state_amplitudes(double k_prime, Orientation o,
                                       const StepEigenParams& p);

// Nondegenerate eigenfunction below the step height (0 <= k < kappa0):
// incident + totally reflected wave for x < 0, evanescent tail for x > 0,
// prefactor 1/sqrt(2 pi).
cdouble eigen_below(double k, const StepEigenParams& p, double x);

// Degenerate eigenfunctions above the step (k' > kappa0), unit incident
// amplitude and the same 1/sqrt(2 pi) prefactor. Orientation::plus is
// left-incident (delta-normalized in k'), Orientation::minus right-incident
// (delta-normalized in its incoming wave number k'').
cdouble eigen_above(double k_prime, Orientation o, const StepEigenParams& p, double x);

// Closed-form expansion amplitudes of e^{iqx} psi_k over the states psi_{-k'}
// (c_minus) and psi_{+k'} (c_plus). Both are proportional to q as q -> 0 and
// decay algebraically in k'. Throws ConvergenceError near a pole of the
// formulae (caller must refine its quadrature around it).
struct CoefficientPair {
  cdouble c_minus;
  cdouble c_plus;
  double k = 0.0;
  double k_prime = 0.0;
  double q = 0.0;
};
CoefficientPair coefficients(double k, double k_prime, double q, const StepEigenParams& p);

// Brute-force overlap  int psi_{+-k'}^*(x) e^{iqx} psi_k(x) dx  on [-L, L]
// with an e^{-eps|x|} convergence factor, Richardson-extrapolated eps -> 0.
// Independent of the closed forms above; this is their oracle.
struct OracleOptions {
  double wavelengths = 200.0;  // half-domain L in units of 2 pi / k
  int eps_levels = 4;          // eps = {8,16,32,64}/L, cubic extrapolation
  double points_per_period = 160.0;
};
cdouble overlap_oracle(double k, double k_prime, Orientation o, double q,
                       const StepEigenParams& p, const OracleOptions& opt = {});

// Sampled amplitude f(k) of the packet over the sub-step eigenbasis,
// int |f|^2 dk = 1 within 1e-4.
struct SpectralAmplitude {
  std::vector<double> k;
  std::vector<cdouble> f;

  double norm_squared() const;
  double mean_k() const;
  double mean_k_squared() const;
};

// f(k) of a Gaussian packet evolved to `at_time` in the step eigenbasis
// (free-space Fourier amplitude times the e^{-i hbar k^2 t / 2m} phase; exact
// for a packet launched far from the edge).
SpectralAmplitude packet_spectral_amplitude(const PacketSpec& packet,
                                            const StepEigenParams& p, double at_time,
                                            std::size_t n_nodes = 96);

struct AnalyticOptions {
  double kp_max_factor = 8.0;   // k' integration cut in units of kappa0
  std::size_t n_kp = 1200;      // k' nodes (sqrt-spaced towards kappa0)
  double plateau_tol = 1e-2;    // relative T change between evaluation times
  double tail_tol = 1e-2;       // admissible estimated beyond-cut fraction
  int max_times = 7;
};

struct AnalyticTransmission {
  double transmission = 0.0;
  double t_evaluated = 0.0;      // time of the converged evaluation, s
  double plateau_residual = 0.0;
  double tail_fraction = 0.0;    // estimated contribution beyond kp_max
};

// Evaluates the supra-barrier transmission integral: the x > 0 field is
// rebuilt from the expansion coefficients and the above-step eigenfunctions
// with the free time factor, and int_0^inf |field|^2 dx is evaluated at
// increasing times until it plateaus, standing in for the t -> infinity
// limit.
AnalyticTransmission analytic_transmission(const SpectralAmplitude& f, double q,
                                           const StepEigenParams& p,
                                           const AnalyticOptions& opt = {});

// Least-squares fit T(q) = alpha q^2 over small q samples.
struct SmallQFit {
  double alpha = 0.0;              // m^2
  double max_rel_deviation = 0.0;  // worst |T/(alpha q^2) - 1| over the sample
};
SmallQFit small_q_coefficient(const SpectralAmplitude& f, const StepEigenParams& p,
                              std::vector<double> q_samples = {});

// Average energies around a kick: E_f at the step carries no cross term
// (E_i + hbar^2 q^2 / 2m identically); the free-space variant does.
struct PostKickEnergy {
  double e_initial = 0.0;
  double e_final_at_step = 0.0;
  double e_final_free = 0.0;
};
PostKickEnergy post_kick_energy(const SpectralAmplitude& f, double q,
                                const StepEigenParams& p);

} // namespace qevap

#endif
