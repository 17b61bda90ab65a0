#include "qevap/analytic.hpp"

#include <algorithm>
#include <cmath>

#include "qevap/errors.hpp"

namespace qevap {

namespace {
constexpr double inv_sqrt_2pi = 0.3989422804014327;  // 1/sqrt(2 pi)
}

StepEigenParams StepEigenParams::from_potential(double v0, double m, double hbar) {
  StepEigenParams p;
  p.v0 = v0;
  p.m = m;
  p.hbar = hbar;
  p.kappa0 = std::sqrt(2.0 * m * v0) / hbar;
  return p;
}

void StepEigenParams::check_consistency() const {
  if (!(kappa0 > 0.0)) throw ConfigError("StepEigenParams.kappa0: must be > 0");
  const double rhs = 2.0 * m * v0 / (hbar * hbar);
  if (std::abs(kappa0 * kappa0 - rhs) > 1e-12 * rhs)
    throw ConfigError("StepEigenParams: kappa0^2 != 2 m v0 / hbar^2");
}

AboveAmplitudes above_state_amplitudes(double k_prime, Orientation o,
                                       const StepEigenParams& p) {
  if (!(k_prime > p.kappa0))
    throw ConfigError("eigen_above: k_prime must exceed kappa0");
  AboveAmplitudes a;
  a.k_prime = k_prime;
  a.k_pp = std::sqrt(k_prime * k_prime - p.kappa0 * p.kappa0);
  if (o == Orientation::plus) {
    a.r = (k_prime - a.k_pp) / (k_prime + a.k_pp);
    a.t = 2.0 * k_prime / (k_prime + a.k_pp);
  } else {
    a.r = (a.k_pp - k_prime) / (a.k_pp + k_prime);
    a.t = 2.0 * a.k_pp / (a.k_pp + k_prime);
  }
  return a;
}

cdouble eigen_below(double k, const StepEigenParams& p, double x) {
  if (!(k >= 0.0 && k < p.kappa0))
    throw ConfigError("eigen_below: need 0 <= k < kappa0");
  const double kappa = std::sqrt(p.kappa0 * p.kappa0 - k * k);
  const cdouble denom(k, kappa);
  if (x < 0.0) {
    const cdouble refl = cdouble(k, -kappa) / denom;  // unimodular
    return inv_sqrt_2pi * (std::polar(1.0, k * x) + refl * std::polar(1.0, -k * x));
  }
  return inv_sqrt_2pi * (2.0 * k / denom) * std::exp(-kappa * x);
}

cdouble eigen_above(double k_prime, Orientation o, const StepEigenParams& p, double x) {
  const AboveAmplitudes a = above_state_amplitudes(k_prime, o, p);
  if (o == Orientation::plus) {
    if (x < 0.0)
      return inv_sqrt_2pi *
             (std::polar(1.0, k_prime * x) + a.r * std::polar(1.0, -k_prime * x));
    return inv_sqrt_2pi * a.t * std::polar(1.0, a.k_pp * x);
  }
  if (x >= 0.0)
    return inv_sqrt_2pi * (std::polar(1.0, -a.k_pp * x) + a.r * std::polar(1.0, a.k_pp * x));
  return inv_sqrt_2pi * a.t * std::polar(1.0, -k_prime * x);
}

CoefficientPair coefficients(double k, double k_prime, double q, const StepEigenParams& p) {
  if (!(k >= 0.0 && k < p.kappa0 && k_prime > p.kappa0))
    throw ConfigError("coefficients: need 0 <= k < kappa0 < k_prime");
  if (q == 0.0) throw ConfigError("coefficients: q must be nonzero");
  const double k0 = p.kappa0;
  const double kappa = std::sqrt(k0 * k0 - k * k);
  const double kpp = std::sqrt(k_prime * k_prime - k0 * k0);
  const double scale = k0 * k0;

  const double d_minus = (k_prime + q) * (k_prime + q) - k * k;
  const double d_plus1 = k_prime * k_prime - (k + q) * (k + q);
  const double d_plus2 = k_prime * k_prime - (k - q) * (k - q);
  const cdouble kq(kappa, -q);
  const cdouble d_minus2 = kq * kq + (kpp * kpp);
  const cdouble d_ratio_den(kappa, kpp - q);
  if (std::abs(d_minus) < 1e-8 * scale || std::abs(d_plus1) < 1e-8 * scale ||
      std::abs(d_plus2) < 1e-8 * scale || std::abs(d_minus2) < 1e-8 * scale ||
      std::abs(d_ratio_den) < 1e-8 * k0)
    throw ConvergenceError("coefficients: evaluation too close to a pole of the "
                           "closed forms; refine the quadrature around it");

  const cdouble common = cdouble(0.0, 4.0) * scale * k /
                         (M_PI * (k_prime + kpp) * cdouble(k, kappa));
  CoefficientPair c;
  c.k = k;
  c.k_prime = k_prime;
  c.q = q;
  c.c_minus = common * kpp * q / d_minus / d_minus2;
  c.c_plus = common * k_prime * q / (d_plus1 * d_plus2) *
             (cdouble(kappa, kpp + q) / d_ratio_den);
  return c;
}

cdouble overlap_oracle(double k, double k_prime, Orientation o, double q,
                       const StepEigenParams& p, const OracleOptions& opt) {
  if (!(k > 0.0 && k < p.kappa0 && k_prime > p.kappa0))
    throw ConfigError("overlap_oracle: need 0 < k < kappa0 < k_prime");
  const double lambda = 2.0 * M_PI / k;
  const double half_domain = opt.wavelengths * lambda;
  // Resolve the fastest oscillation present in the product.
  const double a_max = k + std::abs(q) + k_prime + p.kappa0;
  const double h = 2.0 * M_PI / (a_max * opt.points_per_period);
  const std::size_t n_half = static_cast<std::size_t>(std::ceil(half_domain / h));
  const std::size_t n = 2 * n_half;  // even interval count for Simpson

  std::vector<double> eps(opt.eps_levels);
  for (int j = 0; j < opt.eps_levels; ++j)
    eps[j] = (8.0 * static_cast<double>(1 << j)) / half_domain;  // {8,16,...}/L

  std::vector<cdouble> sums(eps.size(), cdouble{0.0, 0.0});
  const double dx = 2.0 * half_domain / static_cast<double>(n);
  for (std::size_t i = 0; i <= n; ++i) {
    const double x = -half_domain + dx * static_cast<double>(i);
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    const cdouble val = w * std::conj(eigen_above(k_prime, o, p, x)) *
                        std::polar(1.0, q * x) * eigen_below(k, p, x);
    const double ax = std::abs(x);
    for (std::size_t j = 0; j < eps.size(); ++j) sums[j] += val * std::exp(-eps[j] * ax);
  }
  for (auto& s : sums) s *= dx / 3.0;

  // Richardson in eps: the damped integral expands as v0 + c1 eps + c2 eps^2 + ...
  std::vector<cdouble> tbl = sums;  // tbl[j] at eps[j], eps halves downward
  std::size_t levels = tbl.size();
  for (std::size_t round = 1; round < levels; ++round) {
    const double f = std::pow(2.0, static_cast<double>(round));
    for (std::size_t j = 0; j + round < levels; ++j)
      tbl[j] = (f * tbl[j] - tbl[j + 1]) / (f - 1.0);
  }
  // tbl[0] extrapolated from the smallest eps chain; check against one level less.
  std::vector<cdouble> check(sums.begin(), sums.end() - 1);
  for (std::size_t round = 1; round < check.size(); ++round) {
    const double f = std::pow(2.0, static_cast<double>(round));
    for (std::size_t j = 0; j + round < check.size(); ++j)
      check[j] = (f * check[j] - check[j + 1]) / (f - 1.0);
  }
  const double scale = std::max(std::abs(tbl[0]), 1e-300);
  if (std::abs(tbl[0] - check[0]) / scale > 5e-3 && std::abs(tbl[0]) > 1e-14)
    throw ConvergenceError("overlap_oracle: eps extrapolation not converged");
  return tbl[0];
}

double SpectralAmplitude::norm_squared() const {
  std::vector<double> d(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) d[i] = std::norm(f[i]);
  return trapezoid(d, k.size() > 1 ? k[1] - k[0] : 0.0);
}

double SpectralAmplitude::mean_k() const {
  std::vector<double> d(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) d[i] = k[i] * std::norm(f[i]);
  return trapezoid(d, k[1] - k[0]) / norm_squared();
}

double SpectralAmplitude::mean_k_squared() const {
  std::vector<double> d(k.size());
  for (std::size_t i = 0; i < k.size(); ++i) d[i] = k[i] * k[i] * std::norm(f[i]);
  return trapezoid(d, k[1] - k[0]) / norm_squared();
}

SpectralAmplitude packet_spectral_amplitude(const PacketSpec& packet,
                                            const StepEigenParams& p, double at_time,
                                            std::size_t n_nodes) {
  const double dk = packet.delta_k();
  const double lo = std::max(1e-12 * p.kappa0, packet.k_bar - 6.0 * dk);
  const double hi = std::min(p.kappa0 * (1.0 - 1e-12), packet.k_bar + 6.0 * dk);
  if (!(lo < hi)) throw ConfigError("packet_spectral_amplitude: empty k window");
  SpectralAmplitude s;
  s.k.resize(n_nodes);
  s.f.resize(n_nodes);
  const double amp = std::pow(2.0 * packet.sigma * packet.sigma / M_PI, 0.25);
  const double om = p.hbar / (2.0 * p.m);
  for (std::size_t i = 0; i < n_nodes; ++i) {
    const double kk = lo + (hi - lo) * static_cast<double>(i) / (n_nodes - 1);
    s.k[i] = kk;
    const double d = kk - packet.k_bar;
    const double mag = amp * std::exp(-packet.sigma * packet.sigma * d * d);
    const double phase = -d * packet.x_i - om * kk * kk * at_time;
    s.f[i] = std::polar(mag, phase);
  }
  return s;
}

namespace {

// B_-, B_+ = int dk f(k) C_{-+}(k, k', q). When a pole of the closed forms
// sits inside the packet's k support (large backward kicks), the nodes are
// re-laid symmetrically about the pole so the pairs cancel its odd part
// (principal-value placement); f is linearly interpolated there.
struct KIntegrator {
  const SpectralAmplitude& f;
  double dk;

  explicit KIntegrator(const SpectralAmplitude& fin) : f(fin) {
    dk = f.k.size() > 1 ? f.k[1] - f.k[0] : 0.0;
  }

  cdouble interp(double kk) const {
    const double pos = (kk - f.k.front()) / dk;
    const auto i = static_cast<std::size_t>(std::clamp(
        pos, 0.0, static_cast<double>(f.k.size() - 2)));
    const double w = pos - static_cast<double>(i);
    return f.f[i] * (1.0 - w) + f.f[i + 1] * w;
  }

  void accumulate(double k_prime, double q, const StepEigenParams& p, cdouble& b_minus,
                  cdouble& b_plus) const {
    b_minus = b_plus = cdouble{0.0, 0.0};
    const double pole = k_prime + q;  // shared simple pole of Eqs for C-+ in k
    const bool pole_inside = pole > f.k.front() + dk && pole < f.k.back() - dk;
    if (!pole_inside) {
      for (std::size_t i = 0; i < f.k.size(); ++i) {
        const double w = (i == 0 || i + 1 == f.k.size()) ? 0.5 : 1.0;
        const CoefficientPair c = coefficients(f.k[i], k_prime, q, p);
        b_minus += w * f.f[i] * c.c_minus;
        b_plus += w * f.f[i] * c.c_plus;
      }
      b_minus *= dk;
      b_plus *= dk;
      return;
    }
    // Midpoint grid offset so that the pole falls exactly between two nodes.
    const std::size_t n = f.k.size() * 2;
    const double h = (f.k.back() - f.k.front()) / static_cast<double>(n);
    const double start = pole - h * (std::floor((pole - f.k.front()) / h) + 0.5);
    for (std::size_t i = 0; i < n; ++i) {
      const double kk = start + h * static_cast<double>(i);
      if (kk < f.k.front() || kk > f.k.back()) continue;
      const CoefficientPair c = coefficients(kk, k_prime, q, p);
      const cdouble fv = interp(kk);
      b_minus += fv * c.c_minus * h;
      b_plus += fv * c.c_plus * h;
    }
  }
};

} // namespace

AnalyticTransmission analytic_transmission(const SpectralAmplitude& f, double q,
                                           const StepEigenParams& p,
                                           const AnalyticOptions& opt) {
  if (std::abs(f.norm_squared() - 1.0) > 1e-4)
    throw ConfigError("analytic_transmission: f is not normalized");
  AnalyticTransmission out;
  if (q == 0.0) return out;  // no kick populates nothing above the step

  // Small-transfer regime: the kicked mean energy must stay below the step.
  const double mean_k = f.mean_k();
  const double mean_k2 = f.mean_k_squared();
  const double e_kicked = p.hbar * p.hbar * (mean_k2 + 2.0 * mean_k * q + q * q) /
                          (2.0 * p.m);
  if (e_kicked >= p.v0)
    throw ConfigError("analytic_transmission: kicked energy above v0 (not a small "
                      "momentum transfer)");

  // k' grid, sqrt-spaced so nodes crowd the threshold where C_- varies fastest.
  const double k0 = p.kappa0;
  const double kp_max = opt.kp_max_factor * k0;
  const std::size_t n_kp = opt.n_kp;
  std::vector<double> kp(n_kp), wk(n_kp), kpp(n_kp);
  for (std::size_t j = 0; j < n_kp; ++j) {
    const double u = static_cast<double>(j + 1) / static_cast<double>(n_kp);
    kp[j] = k0 + (kp_max - k0) * u * u;
    kpp[j] = std::sqrt(kp[j] * kp[j] - k0 * k0);
  }
  wk[0] = 0.5 * (kp[1] - kp[0]) + (kp[0] - k0);
  for (std::size_t j = 1; j + 1 < n_kp; ++j) wk[j] = 0.5 * (kp[j + 1] - kp[j - 1]);
  wk[n_kp - 1] = 0.5 * (kp[n_kp - 1] - kp[n_kp - 2]);

  // Expansion coefficients integrated against f; then the x > 0 field
  //   phi(x,t) = int dk' e^{-i hbar k'^2 t / 2m} [ a e^{ik''x} + b e^{-ik''x} ]
  // with the k'/k'' Jacobian on the right-incident channel.
  KIntegrator ki(f);
  std::vector<cdouble> a(n_kp), b(n_kp);
  double sigma_est = 1.0 / (2.0 * std::sqrt(std::max(mean_k2 - mean_k * mean_k, 1e-300)));
  for (std::size_t j = 0; j < n_kp; ++j) {
    cdouble bm, bp;
    ki.accumulate(kp[j], q, p, bm, bp);
    const AboveAmplitudes am = above_state_amplitudes(kp[j], Orientation::minus, p);
    const AboveAmplitudes ap = above_state_amplitudes(kp[j], Orientation::plus, p);
    const double jac = kp[j] / kpp[j];
    a[j] = (jac * bm * am.r + bp * ap.t) * inv_sqrt_2pi;
    b[j] = jac * bm * inv_sqrt_2pi;
  }

  // Tail beyond the cut, from the algebraic decay of the spectral density
  // s(k') = (k''/k') |a sqrt(2pi)|^2 fitted over the last octave.
  {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t cnt = 0;
    double integral = 0.0;
    for (std::size_t j = 0; j < n_kp; ++j) {
      const double s = (kpp[j] / kp[j]) * (std::norm(a[j]) + std::norm(b[j])) * 2.0 * M_PI;
      integral += wk[j] * s;
      if (kp[j] > 0.5 * kp_max && s > 0.0) {
        const double lx = std::log(kp[j]), ly = std::log(s);
        sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
        ++cnt;
      }
    }
    if (cnt >= 2) {
      const double slope = (static_cast<double>(cnt) * sxy - sx * sy) /
                           (static_cast<double>(cnt) * sxx - sx * sx);
      const double s_end = (kpp[n_kp - 1] / kp[n_kp - 1]) *
                           (std::norm(a[n_kp - 1]) + std::norm(b[n_kp - 1])) * 2.0 * M_PI;
      if (slope < -1.0)
        out.tail_fraction = s_end * kp_max / (-slope - 1.0) / std::max(integral, 1e-300);
      else
        out.tail_fraction = 1.0;  // decay too shallow to bound
    }
    if (out.tail_fraction > opt.tail_tol)
      throw ConvergenceError("analytic_transmission: k' tail beyond the cut exceeds "
                             "the tolerance; raise kp_max_factor");
  }

  // Plateau over a doubling time schedule. The x grid resolves the fastest
  // k'' and extends to the ballistic front at each evaluation time.
  const double om = p.hbar / (2.0 * p.m);
  const double kpp_max = kpp.back();
  const double dxf = 0.2 / kpp_max;
  const double tau_unit = p.m * sigma_est / (p.hbar * k0);
  double t_prev = 0.0, T_prev = -1.0;
  for (int it = 0; it < opt.max_times; ++it) {
    const double tau = 6.0 * tau_unit * std::pow(2.0, it);
    const double x_max = 2.0 * om * kpp_max * tau + 12.0 * sigma_est;
    const std::size_t nx = static_cast<std::size_t>(x_max / dxf) + 1;
    std::vector<cdouble> phi(nx, cdouble{0.0, 0.0});
    for (std::size_t j = 0; j < n_kp; ++j) {
      const cdouble ph = std::polar(wk[j], -om * kp[j] * kp[j] * tau);
      const cdouble fwd_step = std::polar(1.0, kpp[j] * dxf);
      cdouble fwd = ph * a[j];
      cdouble bwd = ph * b[j];
      const cdouble bwd_step = std::conj(fwd_step);
      for (std::size_t i = 0; i < nx; ++i) {
        phi[i] += fwd + bwd;
        fwd *= fwd_step;
        bwd *= bwd_step;
      }
    }
    std::vector<double> dens(nx);
    for (std::size_t i = 0; i < nx; ++i) dens[i] = std::norm(phi[i]);
    const double T = trapezoid(dens, dxf);
    if (T_prev >= 0.0) {
      out.plateau_residual = std::abs(T - T_prev) / std::max(T, 1e-300);
      if (out.plateau_residual < opt.plateau_tol) {
        out.transmission = T;
        out.t_evaluated = tau;
        return out;
      }
    }
    T_prev = T;
    t_prev = tau;
  }
  (void)t_prev;
  throw ConvergenceError("analytic_transmission: no plateau reached at the largest "
                         "evaluation time");
}

SmallQFit small_q_coefficient(const SpectralAmplitude& f, const StepEigenParams& p,
                              std::vector<double> q_samples) {
  const double kb = f.mean_k();
  if (q_samples.empty())
    q_samples = {0.0025 * kb, 0.00375 * kb, 0.005 * kb};
  double num = 0.0, den = 0.0;
  std::vector<double> ts(q_samples.size());
  for (std::size_t i = 0; i < q_samples.size(); ++i) {
    ts[i] = analytic_transmission(f, q_samples[i], p).transmission;
    const double q2 = q_samples[i] * q_samples[i];
    num += ts[i] * q2;
    den += q2 * q2;
  }
  SmallQFit fit;
  fit.alpha = num / den;
  for (std::size_t i = 0; i < q_samples.size(); ++i) {
    const double model = fit.alpha * q_samples[i] * q_samples[i];
    fit.max_rel_deviation =
        std::max(fit.max_rel_deviation, std::abs(ts[i] / model - 1.0));
  }
  if (fit.max_rel_deviation > 0.10)
    throw ConvergenceError("small_q_coefficient: fit residual above 10%");
  return fit;
}

PostKickEnergy post_kick_energy(const SpectralAmplitude& f, double q,
                                const StepEigenParams& p) {
  PostKickEnergy e;
  const double h22m = p.hbar * p.hbar / (2.0 * p.m);
  const double k2 = f.mean_k_squared();
  const double k1 = f.mean_k();
  e.e_initial = h22m * k2;
  e.e_final_at_step = e.e_initial + h22m * q * q;
  e.e_final_free = h22m * (k2 + 2.0 * k1 * q + q * q);
  return e;
}

} // namespace qevap
