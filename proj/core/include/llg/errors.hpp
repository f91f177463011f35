#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace llg {

struct SolveReport {
  int iterations = 0;
  double final_relative_residual = 0.0;
  bool converged = false;
};

// Base class for runtime failures of the numerical pipeline (as opposed to
// invalid_argument for caller mistakes). The CLI maps these to exit code 1.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public NumericalError {
 public:
  SolverError(const std::string& msg, const SolveReport& rep) : NumericalError(msg), report_(rep) {}
  const SolveReport& report() const { return report_; }

 private:
  SolveReport report_;
};

class BlowupError : public NumericalError {
 public:
  BlowupError(const std::string& msg, std::int64_t step, double time)
      : NumericalError(msg), step_(step), time_(time) {}
  std::int64_t step() const { return step_; }
  double time() const { return time_; }

 private:
  std::int64_t step_;
  double time_;
};

class DegenerateProjectionError : public NumericalError {
 public:
  DegenerateProjectionError(const std::string& msg, std::int64_t cell, double magnitude)
      : NumericalError(msg), cell_(cell), magnitude_(magnitude) {}
  std::int64_t cell() const { return cell_; }
  double magnitude() const { return magnitude_; }

 private:
  std::int64_t cell_;
  double magnitude_;
};

}  // namespace llg
