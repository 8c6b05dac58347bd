#ifndef FRACPOISSON_DETAIL_QUADRATURE_HPP
#define FRACPOISSON_DETAIL_QUADRATURE_HPP

#include <functional>
#include <vector>

namespace fracpoisson::detail {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  int evaluations = 0;
  bool converged = false;
};

/// Globally adaptive Gauss-Kronrod 7/15 quadrature of f over [a, b] to the
/// requested absolute tolerance. The rule is open (endpoints are never
/// evaluated), so integrable endpoint behaviour is tolerated. Optional
/// breakpoints pre-split the interval.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a,
                              double b, double abs_tol,
                              int max_intervals = 4000,
                              const std::vector<double>& breakpoints = {});

}  // namespace fracpoisson::detail

#endif  // FRACPOISSON_DETAIL_QUADRATURE_HPP
