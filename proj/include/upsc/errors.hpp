#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace upsc {

/// Base class for all errors raised by this library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Evaluation point is at or numerically indistinguishable from a pole.
struct PoleProximity : Error {
  std::complex<double> s;
  explicit PoleProximity(std::complex<double> point, double den_mag)
      : Error("evaluation too close to a pole at s = (" +
              std::to_string(point.real()) + ", " + std::to_string(point.imag()) +
              "), |den(s)| = " + std::to_string(den_mag)),
        s(point) {}
};

/// Division by the identically-zero rational function.
struct DivisionByZeroFunction : Error {
  DivisionByZeroFunction() : Error("division by the zero rational function") {}
};

/// Low-pass bandwidth must be strictly positive.
struct InvalidBandwidth : Error {
  explicit InvalidBandwidth(double alpha)
      : Error("low-pass bandwidth must be > 0, got " + std::to_string(alpha)) {}
};

/// Voltage setpoint must be strictly positive.
struct InvalidSetpoint : Error {
  explicit InvalidSetpoint(double e_set)
      : Error("E_set must be > 0, got " + std::to_string(e_set)) {}
};

/// A controller parameter violates its admissible range.
struct InvalidParameter : Error {
  using Error::Error;
};

/// |det D(jw)| fell below the singularity guard.
struct SingularD : Error {
  double omega;
  double det_mag;
  SingularD(double w, double mag)
      : Error("D(jw) singular at omega = " + std::to_string(w) +
              ", |det D| = " + std::to_string(mag)),
        omega(w), det_mag(mag) {}
};

/// Parameter name not recognized by the sweep/event machinery.
struct UnknownParameter : Error {
  explicit UnknownParameter(const std::string& name)
      : Error("unknown parameter name: " + name) {}
};

/// Identification phasor still drifting after the settle window.
struct NotSettled : Error {
  using Error::Error;
};

/// Simulation state exceeded the divergence bound.
struct Divergence : Error {
  double t_last;
  explicit Divergence(double t)
      : Error("simulation diverged, last finite time t = " + std::to_string(t)),
        t_last(t) {}
};

/// Scenario file rejected; line carries the offending location (0 = global).
struct ConfigError : Error {
  int line;
  ConfigError(int l, const std::string& what)
      : Error("scenario line " + std::to_string(l) + ": " + what), line(l) {}
  explicit ConfigError(const std::string& what) : Error(what), line(0) {}
};

}  // namespace upsc
