#ifndef FRACPOISSON_ODEGEN_HPP
#define FRACPOISSON_ODEGEN_HPP

#include <cstddef>
#include <vector>

#include "fracpoisson/types.hpp"

// Generator of the first-order ODE representation in transformed time
// tau = t^beta: constant coefficients A[n][k], the truncated linear system
// dP/dtau = A P, and its integration from the delta initial condition.
//
// A[n][k] = (-1)^{n+1} (lambda / beta)
//             sum_{j=max(n-1,0)}^{k} (-1)^j C(j+1, n) C(k, j)
//                                     Gamma(beta j + 1) / Gamma(beta j + beta)
//
// which vanishes identically for k < n - 1. At beta = 1 the inner sum
// telescopes and the generator degenerates to the classical birth bidiagonal
// (lambda on the subdiagonal, -lambda on the diagonal); the same summation
// path produces this, with no special-casing.

namespace fracpoisson::odegen {

/// Dense truncation of the generator. Column k is complete (its full
/// support n = 0..k+1 lies inside the truncation) iff k <= N-2; every
/// complete column sums to zero.
class GeneratorMatrix {
 public:
  GeneratorMatrix(std::size_t N, const ProcessParams& params,
                  std::vector<double> entries);

  std::size_t size() const { return n_; }
  const ProcessParams& params() const { return params_; }
  double at(std::size_t n, std::size_t k) const { return entries_[n * n_ + k]; }
  bool column_complete(std::size_t k) const { return k + 2 <= n_; }
  /// Sum over the retained rows of column k.
  double column_sum(std::size_t k) const;
  /// y = A x on the truncation.
  std::vector<double> apply(const std::vector<double>& x) const;

 private:
  std::size_t n_;
  ProcessParams params_;
  std::vector<double> entries_;  // row-major
};

/// Integration record: states at tau_grid[0] = 0 (the delta initial
/// condition) and at every requested grid point, with the mass defect
/// |sum P - 1| observed at each of them.
struct Trajectory {
  ProcessParams params;
  std::vector<double> tau_grid;
  std::vector<std::vector<double>> states;
  std::vector<double> conservation_log;
};

/// Single coefficient A[n][k]. Exact zero for k < n-1. The inner
/// alternating sum is evaluated at adaptive precision; the cancellation
/// monitor (max term times working epsilon against 1e-9 |result| + 1e-300)
/// raises PrecisionError naming (n, k) if even the precision cap fails.
double coefficient(std::size_t n, std::size_t k, const ProcessParams& params);

/// Full N x N truncation (N >= 2), columns assembled in parallel.
/// Verifies the zero-sum invariant of every complete column.
GeneratorMatrix generator_matrix(std::size_t N, const ProcessParams& params);

/// Integrates dP/dtau = A P from delta_{n,0}, reporting at the caller's
/// ascending grid points in (0, tau_end]. Local error per step <= step_tol;
/// a mass defect above 1e-6 aborts with ConservationError.
Trajectory evolve(const GeneratorMatrix& gen, double tau_end,
                  const std::vector<double>& grid, double step_tol);

/// The time transformation and its inverse.
double tau_of_t(double t, double beta);
double t_of_tau(double tau, double beta);

/// Evaluates the right side of the ODE system two ways -- the phi-form
/// intermediate sum and the assembled sum_k A[n][k] P(k, tau) -- and
/// returns the absolute difference (the numerical shadow of the
/// double-series interchange).
double proofstep_check(std::size_t n, double tau, const ProcessParams& params,
                       std::size_t max_terms);

}  // namespace fracpoisson::odegen

#endif  // FRACPOISSON_ODEGEN_HPP
