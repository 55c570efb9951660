#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace plap {

/// Argument outside the analysis window [0, M] or similar domain violation.
class domain_error : public std::runtime_error {
public:
  explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Caller passed a value that violates an operation precondition.
class argument_error : public std::runtime_error {
public:
  explicit argument_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// The input nonlinearity violates a hypothesis an analysis requires
/// (zero continuum, sign condition, ...). Carries a witness in the message.
class hypothesis_error : public std::runtime_error {
public:
  explicit hypothesis_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// An iterative solver hit its step cap before reaching its tolerance.
class convergence_error : public std::runtime_error {
public:
  convergence_error(const std::string& msg, std::vector<double> trace = {})
      : std::runtime_error(msg), energy_trace(std::move(trace)) {}
  std::vector<double> energy_trace;
};

/// A quantity that is nonnegative for valid inputs came out negative, or a
/// similar internal contradiction.
class internal_error : public std::logic_error {
public:
  explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

/// Divergent singular integral (time-of-level at v = rho for an entry whose
/// endpoint order makes the integral infinite).
class divergence_error : public std::runtime_error {
public:
  explicit divergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad run configuration (missing field, non-positive size, unwritable path).
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace plap
