#ifndef QEVAP_GRID_HPP
#define QEVAP_GRID_HPP

#include <cstddef>

#include "qevap/errors.hpp"

namespace qevap {

// Uniform spatial mesh on [x_min, x_max] with n_points nodes.
struct Grid1D {
  double x_min = 0.0;
  double x_max = 0.0;
  std::size_t n_points = 0;

  Grid1D() = default;
  Grid1D(double xmin, double xmax, std::size_t n) : x_min(xmin), x_max(xmax), n_points(n) {
    if (n < 3) throw ConfigError("grid.n_points: need at least 3 points");
    if (!(xmin < xmax)) throw ConfigError("grid.x_min: must be < grid.x_max");
  }

  double dx() const { return (x_max - x_min) / static_cast<double>(n_points - 1); }
  double x(std::size_t i) const { return x_min + dx() * static_cast<double>(i); }

  bool contains(double x) const { return x >= x_min && x <= x_max; }

  bool operator==(const Grid1D&) const = default;
};

} // namespace qevap

#endif
