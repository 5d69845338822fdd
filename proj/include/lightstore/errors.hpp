#ifndef LIGHTSTORE_ERRORS_HPP
#define LIGHTSTORE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace lightstore {

// Base for failures of a numerical procedure or a violated runtime
// precondition. Construction-time argument validation uses the standard
// std::domain_error / std::invalid_argument / std::out_of_range instead.
class SimulationError : public std::runtime_error {
 public:
  explicit SimulationError(const std::string& what) : std::runtime_error(what) {}
};

// Pulse spectrum does not decay below threshold before the grid edge;
// propagation would wrap the spectrum silently.
class AliasingError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

// Adaptive quadrature stopped above the requested tolerance.
class QuadratureError : public SimulationError {
 public:
  QuadratureError(const std::string& what, double achieved, double requested)
      : SimulationError(what + " (achieved " + std::to_string(achieved) +
                        ", requested " + std::to_string(requested) + ")"),
        achieved_tolerance(achieved),
        requested_tolerance(requested) {}
  double achieved_tolerance;
  double requested_tolerance;
};

// Step or grid spacing violates a stability bound of the lattice integrator.
class StabilityError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

// Fourier cutoff too small for the requested echo order.
class CutoffError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

// Echo windows cannot be resolved on the given grid (period too short for the
// pulse, or grid too short for even one echo window).
class ResolutionError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

// Output energy too small for a meaningful delay estimate.
class UndetectableDelayError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

// Protocol timeline event placed after the coherence it relies on has rephased.
class TooLateError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

// Operation not defined for this spectral profile kind.
class UnsupportedProfileError : public SimulationError {
 public:
  using SimulationError::SimulationError;
};

}  // namespace lightstore

#endif
