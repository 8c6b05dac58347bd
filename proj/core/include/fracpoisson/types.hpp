#ifndef FRACPOISSON_TYPES_HPP
#define FRACPOISSON_TYPES_HPP

#include <cmath>
#include <string>

#include "fracpoisson/errors.hpp"

namespace fracpoisson {

/// The parameter pair (beta, lambda) of the fractional Poisson process.
/// beta is the waiting-time exponent, lambda the rate in units of
/// 1/time^beta. Valid iff 0 < beta <= 1 and lambda > 0.
struct ProcessParams {
  double beta;
  double lambda;

  ProcessParams(double beta_, double lambda_) : beta(beta_), lambda(lambda_) {
    validate();
  }

  void validate() const {
    if (!(beta > 0.0) || !(beta <= 1.0) || !std::isfinite(beta)) {
      throw DomainError("ProcessParams: beta must lie in (0, 1], got " +
                        std::to_string(beta));
    }
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
      throw DomainError("ProcessParams: lambda must be positive, got " +
                        std::to_string(lambda));
    }
  }

  bool operator==(const ProcessParams&) const = default;
};

}  // namespace fracpoisson

#endif  // FRACPOISSON_TYPES_HPP
