#include "qevap/baselines.hpp"

#include <cmath>

#include "qevap/errors.hpp"

namespace qevap {

double classical_supra_barrier_probability(double k_bar, double delta_k, double v0,
                                           double m, double hbar) {
  if (!(delta_k > 0.0)) throw ConfigError("delta_k: must be > 0");
  const double arg = (std::sqrt(m * v0) / hbar - k_bar / std::sqrt(2.0)) / delta_k;
  return 0.5 * std::erfc(arg);
}

double monochromatic_barrier_transmission(double e, double v0, double width, double m,
                                          double hbar) {
  if (!(e > 0.0 && e < v0))
    throw ConfigError("energy: monochromatic closed form needs 0 < E < v0");
  const double kappa = std::sqrt(2.0 * m * (v0 - e)) / hbar;
  const double ka = kappa * width;
  const double c = v0 * v0 / (4.0 * e * (v0 - e));
  if (ka > 300.0) return std::exp(std::log(4.0 / c) - 2.0 * ka);  // sinh overflow guard
  const double s = std::sinh(ka);
  return 1.0 / (1.0 + c * s * s);
}

} // namespace qevap
