#ifndef QEVAP_ERRORS_HPP
#define QEVAP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qevap {

// Invalid configuration or argument; the message names the offending key.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

// A plateau, fit or quadrature did not converge to its tolerance.
struct ConvergenceError : std::runtime_error {
  explicit ConvergenceError(const std::string& msg) : std::runtime_error(msg) {}
};

// Numerical breakdown (e.g. tridiagonal pivot collapse).
struct NumericsError : std::runtime_error {
  explicit NumericsError(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace qevap

#endif
