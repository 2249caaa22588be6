#pragma once

#include <stdexcept>
#include <string>

namespace hmvm {

/// Thrown when a cell loses admissibility (rho <= 0 or T <= 0) during a run.
/// Carries enough context for the driver to dump diagnostics and exit with
/// the physics-abort code.
class PositivityError : public std::runtime_error {
public:
  PositivityError(std::string what, std::size_t cell, double rho, double T)
      : std::runtime_error(std::move(what)), cell_index(cell), rho(rho), temperature(T) {}
  std::size_t cell_index;
  double rho;
  double temperature;
};

/// Thrown when an iterative solve (Picard loop of the implicit-B scheme)
/// fails to reach tolerance within its iteration cap.
class ConvergenceError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

} // namespace hmvm
