#ifndef QEVAP_SPECTRUM_HPP
#define QEVAP_SPECTRUM_HPP

#include <vector>

#include "qevap/wavefunction.hpp"

namespace qevap {

// One spectral bin: wave number (m^-1) and density |f(k)|^2 (m), normalized so
// that sum |f|^2 dk equals the squared norm of psi.
struct SpectrumBin {
  double k;
  double density;
};

// Discrete Fourier transform of the amplitudes mapped to physical wave
// numbers, sorted ascending in k. Bin spacing is 2 pi / (n dx).
std::vector<SpectrumBin> momentum_spectrum(const WaveFunction& psi);

} // namespace qevap

#endif
