#include "qevap/potential.hpp"

#include <cmath>

namespace qevap {

PotentialSpec PotentialSpec::make_barrier(double v0, double x0, double x1) {
  PotentialSpec p;
  p.kind = PotentialKind::barrier;
  p.v0 = v0;
  p.x0 = x0;
  p.x1 = x1;
  p.validate();
  return p;
}

PotentialSpec PotentialSpec::make_step(double v0, double x_edge) {
  PotentialSpec p;
  p.kind = PotentialKind::step;
  p.v0 = v0;
  p.x_edge = x_edge;
  p.validate();
  return p;
}

PotentialSpec PotentialSpec::make_smoothed_step(double v0, double x_edge, double w) {
  PotentialSpec p;
  p.kind = PotentialKind::smoothed_step;
  p.v0 = v0;
  p.x_edge = x_edge;
  p.ramp_width = w;
  p.validate();
  return p;
}

void PotentialSpec::validate() const {
  if (!(v0 > 0.0)) throw ConfigError("potential.v0_J: must be > 0");
  if (kind == PotentialKind::barrier && !(x0 < x1))
    throw ConfigError("potential.x0_m: barrier needs x0 < x1");
  if (ramp_width < 0.0) throw ConfigError("potential.ramp_width_m: must be >= 0");
}

double potential_at(const PotentialSpec& pot, double x, double t) {
  const double shift = pot.drift_velocity * std::max(0.0, t - pot.drift_start);
  const double u = x - shift;
  switch (pot.kind) {
    case PotentialKind::barrier:
      return (u >= pot.x0 && u <= pot.x1) ? pot.v0 : 0.0;
    case PotentialKind::step:
      return u >= pot.x_edge ? pot.v0 : 0.0;
    case PotentialKind::smoothed_step: {
      if (pot.ramp_width == 0.0) return u >= pot.x_edge ? pot.v0 : 0.0;
      return 0.5 * pot.v0 * (1.0 + std::tanh((u - pot.x_edge) / pot.ramp_width));
    }
  }
  return 0.0;
}

std::string to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::barrier: return "barrier";
    case PotentialKind::step: return "step";
    case PotentialKind::smoothed_step: return "smoothed_step";
  }
  return "?";
}

} // namespace qevap
