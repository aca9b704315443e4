#pragma once

#include <stdexcept>
#include <string>

namespace qproj {

// Base for all library errors. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ZeroWeight : public Error {
 public:
  explicit ZeroWeight(int stage)
      : Error("weight b[" + std::to_string(stage) + "] is zero"), stage_(stage) {}
  int stage() const { return stage_; }

 private:
  int stage_;
};

class UnknownName : public Error {
 public:
  explicit UnknownName(const std::string& name) : Error("unknown name: " + name) {}
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

class OrderCycle : public Error {
 public:
  using Error::Error;
};

class NotEquivariant : public Error {
 public:
  explicit NotEquivariant(double residual)
      : Error("tableau violates the symplecticity condition, residual " +
              std::to_string(residual)),
        residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// Stage solver failure. `stage` is -1 for coupled (fully implicit) solves and
// `step` is filled in by trajectory drivers.
class NonConvergence : public Error {
 public:
  NonConvergence(int stage, int iterations, double residual, int step = -1)
      : Error(describe(stage, iterations, residual, step)),
        stage_(stage),
        iterations_(iterations),
        residual_(residual),
        step_(step) {}

  int stage() const { return stage_; }
  int iterations() const { return iterations_; }
  double residual() const { return residual_; }
  int step() const { return step_; }

  NonConvergence at_step(int step) const {
    return NonConvergence(stage_, iterations_, residual_, step);
  }

 private:
  static std::string describe(int stage, int iterations, double residual, int step) {
    std::string msg = "stage solve did not converge (stage " + std::to_string(stage) +
                      ", " + std::to_string(iterations) + " iterations, residual " +
                      std::to_string(residual) + ")";
    if (step >= 0) msg += " at step " + std::to_string(step);
    return msg;
  }

  int stage_;
  int iterations_;
  double residual_;
  int step_;
};

class DegenerateSpectrum : public Error {
 public:
  DegenerateSpectrum(const std::string& what, double value, int step = -1)
      : Error(what + " (" + std::to_string(value) + ")" +
              (step >= 0 ? " at step " + std::to_string(step) : std::string())),
        reason_(what),
        value_(value),
        step_(step) {}

  double value() const { return value_; }
  int step() const { return step_; }
  DegenerateSpectrum at_step(int step) const { return DegenerateSpectrum(reason_, value_, step); }

 private:
  std::string reason_;
  double value_;
  int step_;
};

class SingularFactor : public Error {
 public:
  using Error::Error;
};

class NotAntiHermitian : public Error {
 public:
  explicit NotAntiHermitian(double defect)
      : Error("matrix is not anti-Hermitian, defect " + std::to_string(defect)) {}
};

class ParseError : public Error {
 public:
  using Error::Error;
};

}  // namespace qproj
