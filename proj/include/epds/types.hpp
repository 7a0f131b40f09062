#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace epds {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Raised for inconsistent shapes, invalid parameters and malformed configs.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Raised when a simulation produces a non-finite state.
class NumericalAbort : public std::runtime_error {
 public:
  NumericalAbort(long step, double time, const std::string& what)
      : std::runtime_error(what), step_(step), time_(time) {}

  long step() const noexcept { return step_; }
  double time() const noexcept { return time_; }

 private:
  long step_;
  double time_;
};

inline bool all_finite(const Vector& v) { return v.allFinite(); }

}  // namespace epds
