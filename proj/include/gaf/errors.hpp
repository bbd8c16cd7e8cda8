#pragma once

#include <optional>
#include <stdexcept>
#include <string>

namespace gaf {

/// Base class for all errors raised by the solver library. The `kind()` tag
/// is what the CLI prints in its machine-readable error line.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

/// The generalized Vandermonde matrix of an element is numerically singular.
class UnisolvenceFailure : public Error {
 public:
  UnisolvenceFailure(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  const char* kind() const noexcept override { return "UnisolvenceFailure"; }
  double condition() const noexcept { return condition_; }

 private:
  double condition_;
};

/// A state outside the admissible set of the model (Euler: rho <= 0 or p <= 0).
class InadmissibleState : public Error {
 public:
  explicit InadmissibleState(const std::string& what) : Error(what) {}
  InadmissibleState(const std::string& what, int cell_i, int cell_j,
                    std::optional<double> time = std::nullopt)
      : Error(what), cell_i_(cell_i), cell_j_(cell_j), time_(time) {}
  const char* kind() const noexcept override { return "InadmissibleState"; }

  std::optional<int> cell_i() const noexcept { return cell_i_; }
  std::optional<int> cell_j() const noexcept { return cell_j_; }
  std::optional<double> time() const noexcept { return time_; }

 private:
  std::optional<int> cell_i_;
  std::optional<int> cell_j_;
  std::optional<double> time_;
};

class ZeroSignalSpeed : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "ZeroSignalSpeed"; }
};

class EigensolverFailure : public Error {
 public:
  using Error::Error;
  const char* kind() const noexcept override { return "EigensolverFailure"; }
};

}  // namespace gaf
