#pragma once

#include <stdexcept>
#include <string>

namespace eitpt {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Stationarity system is singular or nearly so: the drives and decay paths
// leave more than one stationary population distribution (non-communicating
// level classes).
struct DegenerateSteadyState : Error {
  double condition;
  explicit DegenerateSteadyState(double cond)
      : Error("steady-state system is degenerate (condition estimate " +
              std::to_string(cond) + ")"),
        condition(cond) {}
};

// A perturbation denominator D1 or D2 vanished.
struct PoleAtResonance : Error {
  explicit PoleAtResonance(const std::string& which)
      : Error("perturbation denominator vanished: " + which) {}
};

// Third-order coefficients divide by the pump rate.
struct PumpRequired : Error {
  PumpRequired() : Error("third-order coefficients require Gamma31 > 0") {}
};

// Neither reading of the undetermined closed-form constant reproduces the
// second-order oracle; message carries the oracle values.
struct AmbiguousClosedForm : Error {
  explicit AmbiguousClosedForm(const std::string& detail)
      : Error("closed-form second-order coefficients are ambiguous; " + detail) {}
};

struct GridMismatch : Error {
  explicit GridMismatch(const std::string& detail) : Error("grid mismatch: " + detail) {}
};

struct PeriodMismatch : Error {
  explicit PeriodMismatch(const std::string& detail) : Error("period mismatch: " + detail) {}
};

struct NoBalancePoint : Error {
  double balance_lo, balance_hi;
  NoBalancePoint(double lo, double hi)
      : Error("gain balance does not change sign over the bracket (" +
              std::to_string(lo) + ", " + std::to_string(hi) + ")"),
        balance_lo(lo), balance_hi(hi) {}
};

struct NoThresholdFound : Error {
  double max_w, max_im;
  NoThresholdFound(double w, double im)
      : Error("no PT-breaking threshold up to W = " + std::to_string(w) +
              " (max imaginary spread " + std::to_string(im) + ")"),
        max_w(w), max_im(im) {}
};

// Split-step state turned non-finite.
struct NumericalBlowup : Error {
  int step;
  explicit NumericalBlowup(int at_step)
      : Error("propagation produced a non-finite value at step " + std::to_string(at_step)),
        step(at_step) {}
};

struct ConfigError : Error {
  explicit ConfigError(const std::string& detail) : Error("config: " + detail) {}
};

}  // namespace eitpt
