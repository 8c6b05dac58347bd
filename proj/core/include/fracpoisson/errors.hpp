#ifndef FRACPOISSON_ERRORS_HPP
#define FRACPOISSON_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fracpoisson {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Result (or a required intermediate) exceeds the representable range.
class OverflowError : public Error {
 public:
  using Error::Error;
};

/// Requested accuracy is unattainable (cancellation, unreachable tolerance,
/// quadrature non-convergence). Carries the bound that was achievable.
class PrecisionError : public Error {
 public:
  explicit PrecisionError(const std::string& what, double achievable = 0.0)
      : Error(what), achievable_bound_(achievable) {}
  double achievable_bound() const { return achievable_bound_; }

 private:
  double achievable_bound_;
};

/// A structural precondition was violated (wrong coefficient family,
/// degenerate binning, inconsistent vector metadata).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// ODE integration could not proceed (step-size underflow). Reports how far
/// the integrator got.
class IntegrationError : public Error {
 public:
  explicit IntegrationError(const std::string& what, double tau_reached)
      : Error(what), tau_reached_(tau_reached) {}
  double tau_reached() const { return tau_reached_; }

 private:
  double tau_reached_;
};

/// Probability mass defect exceeded its ceiling during integration.
class ConservationError : public Error {
 public:
  using Error::Error;
};

/// A simulation exceeded its hard safety limit (pathological draw count).
class RunawayError : public Error {
 public:
  using Error::Error;
};

}  // namespace fracpoisson

#endif  // FRACPOISSON_ERRORS_HPP
