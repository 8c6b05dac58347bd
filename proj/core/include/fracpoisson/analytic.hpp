#ifndef FRACPOISSON_ANALYTIC_HPP
#define FRACPOISSON_ANALYTIC_HPP

#include <cstddef>
#include <vector>

#include "fracpoisson/types.hpp"

// Analytic solution layer for the fractional counting process: the signed
// building blocks phi(j, tau), the probability series P(n, t), vector
// truncations with a certified tail bound, the probability generating
// function, factorial moments, and the fractional-derivative residual check.

namespace fracpoisson::analytic {

/// One signed series element phi(j, tau) = (-1)^j (lambda tau)^j /
/// Gamma(beta j + 1), carried as index plus value. The sign is (-1)^j
/// whenever the value is nonzero, and phi(0, .) = 1.
struct PhiValue {
  std::size_t index;
  double value;
};

/// Truncated probability vector (states 0..trunc-1) at a fixed observation
/// time, plus a certified upper bound on the discarded tail mass. Entries
/// are clamped into [0, 1]; sum + tail_bound stays within 1e-9 of 1
/// whenever the truncation is adequate for the requested time.
struct ProbVector {
  ProcessParams params;
  double time;
  std::size_t trunc;
  std::vector<double> values;
  double tail_bound;

  double sum() const;
  double normalization_defect() const;  // |sum + tail_bound - 1|
};

/// phi(j, tau) evaluated through log-space magnitude and explicit sign.
/// tau is the transformed time t^beta; callers convert.
PhiValue phi(std::size_t j, double tau, const ProcessParams& params);

/// P(n, t) = (-1)^n sum_{j>=n} C(j, n) phi(j, t^beta), summed until the
/// certified geometric remainder drops below tol, then clamped to [0, 1].
/// Throws PrecisionError when tol is unreachable.
double pmf(std::size_t n, double t, const ProcessParams& params, double tol);

/// States 0..N-1 with a certified Markov tail bound (factorial-moment bound
/// minimized over the moment order).
ProbVector pmf_vector(std::size_t N, double t, const ProcessParams& params,
                      double tol);

/// E_beta(lambda t^beta (s - 1)) for s in [0, 1]; equals sum_n s^n P(n, t).
double generating_function(double s, double t, const ProcessParams& params);

/// k-th factorial moment k! (lambda t^beta)^k / Gamma(beta k + 1), k >= 1.
double factorial_moment(std::size_t k, double t, const ProcessParams& params);

/// Certified upper bound on |sum_{j > j_cut} C(j, n) phi(j, t^beta)| by
/// geometric domination once successive term ratios fall below 1/2.
/// Returns +infinity if the ratio condition is not yet met at j_cut
/// (caller extends the sum). Requires j_cut >= n.
double series_tail_bound(std::size_t n, std::size_t j_cut, double t,
                         const ProcessParams& params);

/// Termwise-differentiated series for dP(n, .)/dt at time t > 0.
double pmf_time_derivative(std::size_t n, double t, const ProcessParams& params,
                           double tol);

/// Evaluates the fractional (Dzerbayshan-Caputo) derivative of P(n, .) at t
/// by adaptive quadrature with substitutions regularizing both the s = t
/// kernel singularity and the s = 0 derivative singularity, and returns it
/// minus lambda (P(n-1, t) - P(n, t)). Magnitude ~ max(10 quad_tol, 1e-6)
/// when everything is consistent.
double caputo_residual(std::size_t n, double t, const ProcessParams& params,
                       double quad_tol);

}  // namespace fracpoisson::analytic

#endif  // FRACPOISSON_ANALYTIC_HPP
