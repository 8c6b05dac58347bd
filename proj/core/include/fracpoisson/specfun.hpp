#ifndef FRACPOISSON_SPECFUN_HPP
#define FRACPOISSON_SPECFUN_HPP

// Special-function kernel: Gamma on the positive reals and the one-parameter
// Mittag-Leffler function E_beta on the non-positive real axis. Everything
// here is a pure function; safe to call concurrently.

namespace fracpoisson::specfun {

/// Gamma(x) for x > 0. Relative error <= 1e-14 on (0, 170].
/// Throws DomainError for x <= 0, OverflowError once Gamma(x) exceeds the
/// double range (work with log_gamma instead).
double gamma(double x);

/// ln Gamma(x) for x > 0, relative error <= 1e-13 (absolute ~1e-15 near the
/// zeros at x = 1 and x = 2). Throws DomainError for x <= 0.
double log_gamma(double x);

/// E_beta(z) = sum_m z^m / Gamma(beta m + 1) for 0 < beta <= 1 and z <= 0,
/// with certified absolute error <= 1e-12. The result lies in (0, 1].
///
/// The defining series alternates and loses digits as |z| grows; the
/// evaluation escalates its working precision until the certified bound
/// holds, so the validity domain is determined at runtime. Beyond it a
/// PrecisionError carries the achievable bound. z > 0 is out of scope
/// (DomainError).
double mittag_leffler(double beta, double z);

}  // namespace fracpoisson::specfun

#endif  // FRACPOISSON_SPECFUN_HPP
