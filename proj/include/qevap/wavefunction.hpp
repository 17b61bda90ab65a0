#ifndef QEVAP_WAVEFUNCTION_HPP
#define QEVAP_WAVEFUNCTION_HPP

#include <complex>
#include <vector>

#include "qevap/grid.hpp"

namespace qevap {

using cdouble = std::complex<double>;

// Complex amplitudes on a Grid1D, units m^(-1/2); the evolving state psi(x,t).
struct WaveFunction {
  Grid1D grid;
  std::vector<cdouble> amp;

  WaveFunction() = default;
  explicit WaveFunction(const Grid1D& g) : grid(g), amp(g.n_points, cdouble{0.0, 0.0}) {}
};

// Trapezoid quadrature of the sampled values f on the grid spacing dx.
double trapezoid(const std::vector<double>& f, double dx);

// int |psi|^2 dx by the trapezoid rule.
double norm_squared(const WaveFunction& psi);

// Scale amplitudes so norm_squared == 1. Throws NumericsError on a null state.
void normalize(WaveFunction& psi);

// <phi|psi> = int conj(phi) psi dx (trapezoid); grids must match.
cdouble inner_product(const WaveFunction& phi, const WaveFunction& psi);

} // namespace qevap

#endif
