#ifndef QEVAP_POTENTIAL_HPP
#define QEVAP_POTENTIAL_HPP

#include <string>

#include "qevap/errors.hpp"

namespace qevap {

enum class PotentialKind { barrier, step, smoothed_step };

// Barrier / step / smoothed-step geometry with an optional drift velocity.
// The drift displaces the profile by drift_velocity * (t - drift_start) for
// t > drift_start (a potential "set moving" at drift_start).
struct PotentialSpec {
  PotentialKind kind = PotentialKind::step;
  double v0 = 0.0;          // height, J
  double x0 = 0.0;          // barrier left edge, m
  double x1 = 0.0;          // barrier right edge, m
  double x_edge = 0.0;      // step edge, m
  double ramp_width = 0.0;  // smoothed-step tanh width, m (0 reduces to step)
  double drift_velocity = 0.0;  // m/s
  double drift_start = 0.0;     // s

  static PotentialSpec make_barrier(double v0, double x0, double x1);
  static PotentialSpec make_step(double v0, double x_edge);
  static PotentialSpec make_smoothed_step(double v0, double x_edge, double w);

  // Left boundary of the classically forbidden footprint at t = 0.
  double left_edge() const { return kind == PotentialKind::barrier ? x0 : x_edge; }
  // Right boundary (barrier exit; the edge itself for steps).
  double right_edge() const { return kind == PotentialKind::barrier ? x1 : x_edge; }

  void validate() const;
};

// V(x, t), honouring the drift.
double potential_at(const PotentialSpec& pot, double x, double t);

std::string to_string(PotentialKind k);

} // namespace qevap

#endif
