#include "fracpoisson/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fracpoisson/detail/compensated.hpp"
#include "fracpoisson/detail/gamma_ld.hpp"
#include "fracpoisson/detail/log.hpp"
#include "fracpoisson/detail/quadrature.hpp"
#include "fracpoisson/detail/series.hpp"
#include "fracpoisson/errors.hpp"
#include "fracpoisson/specfun.hpp"

namespace fracpoisson::analytic {

namespace detail_ = fracpoisson::detail;

namespace {

constexpr double kLogDblMax = 709.782712893383996;

long double log_binomial_ld(std::size_t j, std::size_t n) {
  return detail_::log_gamma_ld(static_cast<long double>(j) + 1.0L) -
         detail_::log_gamma_ld(static_cast<long double>(n) + 1.0L) -
         detail_::log_gamma_ld(static_cast<long double>(j - n) + 1.0L);
}

void check_time(double t, const char* who) {
  if (!(t >= 0.0) || !std::isfinite(t)) {
    throw DomainError(std::string(who) + ": time must be >= 0, got " +
                      std::to_string(t));
  }
}

// Shared core of pmf / pmf_time_derivative: sums
//   (-1)^n sum_{j >= j0} C(j, n) (-1)^j w(j) x^j / Gamma(beta j + 1)
// where w(j) = 1 for the probability series and w(j) = beta j / t for the
// time derivative (termwise differentiation in the original time variable).
double signed_binomial_series(std::size_t n, double x, double beta,
                              bool derivative, double t, double tol,
                              const char* what) {
  if (x == 0.0) return (!derivative && n == 0) ? 1.0 : 0.0;
  const std::size_t j0 = derivative ? std::max<std::size_t>(n, 1) : n;
  const long double log_x = logl(static_cast<long double>(x));
  const long double log_t = derivative ? logl(static_cast<long double>(t)) : 0.0L;

  const auto log_term = [=](int i) {
    const std::size_t j = j0 + static_cast<std::size_t>(i);
    const long double lc = log_binomial_ld(j, n);
    const long double lg =
        detail_::log_gamma_ld(static_cast<long double>(beta) * j + 1.0L);
    detail_::LogTerm lt;
    lt.sign = ((n + j) % 2 == 0) ? 1 : -1;
    lt.log_mag = lc + j * log_x - lg;
    lt.log_scale = lc + fabsl(j * log_x) + fabsl(lg);
    if (derivative) {
      lt.log_mag += logl(static_cast<long double>(beta) * j) - log_t;
      lt.log_scale += 16.0L + fabsl(log_t);
    }
    return lt;
  };
  const auto big_term = [=](int i, detail_::BigFloat& out) {
    const std::size_t j = j0 + static_cast<std::size_t>(i);
    const long prec = out.precision();
    detail_::BigFloat g(prec), arg(prec), one(prec), xs(prec), c(prec);
    arg.set_d(beta);
    arg.mul_si(static_cast<long>(j));
    one.set_si(1);
    arg.add(one);
    g.gamma_of(arg);
    xs.set_d(x);
    out.pow_ui(xs, static_cast<unsigned long>(j));
    c.set_binomial(static_cast<unsigned long>(j), static_cast<unsigned long>(n));
    out.mul(c);
    out.div(g);
    if (derivative) {
      detail_::BigFloat w(prec);
      w.set_d(beta);
      w.mul_si(static_cast<long>(j));
      out.mul(w);
      detail_::BigFloat td(prec);
      td.set_d(t);
      out.div(td);
    }
    if ((n + j) % 2 != 0) out.neg();
  };

  return detail_::sum_signed_series(log_term, big_term, tol, 2'000'000, what)
      .value;
}

// Markov bound on the discarded mass sum_{m >= N} P(m, t): the k-th
// factorial moment over the falling factorial N(N-1)...(N-k+1), minimized
// over the moment order.
double markov_tail_bound(std::size_t N, double t, const ProcessParams& params) {
  if (t == 0.0 || N == 0) return 0.0;
  const long double log_x =
      logl(static_cast<long double>(params.lambda)) +
      static_cast<long double>(params.beta) * logl(static_cast<long double>(t));
  const std::size_t k_max = std::min<std::size_t>(N - 1, 64);
  long double best = std::numeric_limits<long double>::infinity();
  for (std::size_t k = 1; k <= k_max; ++k) {
    long double log_fm =
        detail_::log_gamma_ld(static_cast<long double>(k) + 1.0L) +
        static_cast<long double>(k) * log_x -
        detail_::log_gamma_ld(static_cast<long double>(params.beta) * k + 1.0L);
    long double log_fall = 0.0L;
    for (std::size_t i = 0; i < k; ++i) {
      log_fall += logl(static_cast<long double>(N - i));
    }
    best = std::min(best, log_fm - log_fall);
  }
  const long double bound = expl(best);
  return static_cast<double>(std::min(bound, 1.0L));
}

}  // namespace

double ProbVector::sum() const {
  detail_::NeumaierSum<long double> s;
  for (double v : values) s.add(v);
  return static_cast<double>(s.value());
}

double ProbVector::normalization_defect() const {
  return std::fabs(sum() + tail_bound - 1.0);
}

PhiValue phi(std::size_t j, double tau, const ProcessParams& params) {
  params.validate();
  check_time(tau, "phi");
  if (j == 0) return {0, 1.0};
  if (tau == 0.0) return {j, 0.0};
  const long double log_mag =
      static_cast<long double>(j) *
          logl(static_cast<long double>(params.lambda) * tau) -
      detail_::log_gamma_ld(static_cast<long double>(params.beta) * j + 1.0L);
  if (log_mag > kLogDblMax) {
    throw OverflowError("phi: |phi(" + std::to_string(j) +
                        ", tau)| overflows double range");
  }
  const double mag = static_cast<double>(expl(log_mag));
  return {j, (j % 2 == 0) ? mag : -mag};
}

double pmf(std::size_t n, double t, const ProcessParams& params, double tol) {
  params.validate();
  check_time(t, "pmf");
  if (!(tol > 0.0)) {
    throw DomainError("pmf: tolerance must be positive");
  }
  if (t == 0.0) return n == 0 ? 1.0 : 0.0;
  const double x = params.lambda * std::pow(t, params.beta);
  double value =
      signed_binomial_series(n, x, params.beta, false, t, tol, "pmf");
  if (value < 0.0) {
    // Dips within the certified evaluation error are benign rounding and
    // get clamped; anything deeper means genuine cancellation failure.
    const double floor = std::max(1e-12, tol);
    if (value < -floor) {
      throw PrecisionError("pmf: entry " + std::to_string(n) +
                               " fell below the clamp floor (" +
                               std::to_string(value) +
                               "); cancellation beyond validity",
                           -value);
    }
    detail_::log(detail_::LogLevel::info,
                 "pmf: clamped %.3e to 0 at n=%zu, t=%.6g", value, n, t);
    value = 0.0;
  }
  return std::min(value, 1.0);
}

ProbVector pmf_vector(std::size_t N, double t, const ProcessParams& params,
                      double tol) {
  if (N < 1) throw DomainError("pmf_vector: truncation must be >= 1");
  ProbVector out{params, t, N, {}, 0.0};
  out.values.resize(N);
  for (std::size_t n = 0; n < N; ++n) {
    out.values[n] = pmf(n, t, params, tol);
  }
  out.tail_bound = markov_tail_bound(N, t, params);
  const double defect = out.normalization_defect();
  if (defect > 1e-9) {
    detail_::log(detail_::LogLevel::warn,
                 "pmf_vector: normalization defect %.3e at N=%zu, t=%.6g "
                 "(truncation too small for a tight tail bound)",
                 defect, N, t);
  }
  return out;
}

double generating_function(double s, double t, const ProcessParams& params) {
  params.validate();
  check_time(t, "generating_function");
  if (!(s >= 0.0) || !(s <= 1.0)) {
    throw DomainError("generating_function: s must lie in [0, 1], got " +
                      std::to_string(s));
  }
  const double z = params.lambda * std::pow(t, params.beta) * (s - 1.0);
  return specfun::mittag_leffler(params.beta, z);
}

double factorial_moment(std::size_t k, double t, const ProcessParams& params) {
  params.validate();
  check_time(t, "factorial_moment");
  if (k < 1) throw DomainError("factorial_moment: order must be >= 1");
  if (t == 0.0) return 0.0;
  const long double log_x =
      logl(static_cast<long double>(params.lambda)) +
      static_cast<long double>(params.beta) * logl(static_cast<long double>(t));
  const long double log_fm =
      detail_::log_gamma_ld(static_cast<long double>(k) + 1.0L) +
      static_cast<long double>(k) * log_x -
      detail_::log_gamma_ld(static_cast<long double>(params.beta) * k + 1.0L);
  if (log_fm > kLogDblMax) {
    throw OverflowError("factorial_moment: order " + std::to_string(k) +
                        " overflows double range");
  }
  return static_cast<double>(expl(log_fm));
}

double series_tail_bound(std::size_t n, std::size_t j_cut, double t,
                         const ProcessParams& params) {
  params.validate();
  check_time(t, "series_tail_bound");
  if (j_cut < n) {
    throw DomainError("series_tail_bound: j_cut must be >= n");
  }
  if (t == 0.0) return 0.0;
  const long double beta = params.beta;
  const long double log_x =
      logl(static_cast<long double>(params.lambda)) +
      beta * logl(static_cast<long double>(t));
  const std::size_t j = j_cut + 1;
  // Term ratio at index j; both factors decrease monotonically in j, so
  // rho(j) dominates every later ratio.
  const long double rho =
      expl(log_x + logl(static_cast<long double>(j + 1)) -
           logl(static_cast<long double>(j + 1 - n)) +
           detail_::log_gamma_ld(beta * j + 1.0L) -
           detail_::log_gamma_ld(beta * (j + 1) + 1.0L));
  if (!(rho <= 0.5L)) {
    return std::numeric_limits<double>::infinity();
  }
  const long double log_term =
      log_binomial_ld(j, n) + j * log_x -
      detail_::log_gamma_ld(beta * j + 1.0L);
  return static_cast<double>(expl(log_term) / (1.0L - rho));
}

double pmf_time_derivative(std::size_t n, double t, const ProcessParams& params,
                           double tol) {
  params.validate();
  if (!(t > 0.0)) {
    throw DomainError("pmf_time_derivative: time must be > 0");
  }
  const double x = params.lambda * std::pow(t, params.beta);
  return signed_binomial_series(n, x, params.beta, true, t, tol,
                                "pmf_time_derivative");
}

double caputo_residual(std::size_t n, double t, const ProcessParams& params,
                       double quad_tol) {
  params.validate();
  if (!(t > 0.0)) throw DomainError("caputo_residual: time must be > 0");
  if (!(quad_tol > 0.0)) {
    throw DomainError("caputo_residual: quadrature tolerance must be > 0");
  }
  const double beta = params.beta;
  const double series_tol = std::min(1e-13, quad_tol * 1e-2);
  const double p_here = pmf(n, t, params, series_tol);
  const double p_below = (n == 0) ? 0.0 : pmf(n - 1, t, params, series_tol);
  const double balance = params.lambda * (p_below - p_here);

  if (beta == 1.0) {
    return pmf_time_derivative(n, t, params, series_tol) - balance;
  }

  // Tolerance for the integrand series tracks the s^{beta j0 - 1} endpoint
  // growth so the request stays effectively relative.
  const double lead_exp = beta * static_cast<double>(std::max<std::size_t>(n, 1)) - 1.0;
  const auto deriv = [&](double s) {
    const double scale = std::pow(s, std::min(0.0, lead_exp));
    return pmf_time_derivative(n, s, params, std::max(1e-15, 1e-13 * scale));
  };

  // Left half [0, t/2]: s = w^{1/beta} absorbs the s^{beta j - 1} endpoint
  // behaviour of the differentiated series into polynomial terms in w.
  const double w_end = std::pow(0.5 * t, beta);
  const auto left_integrand = [&](double w) {
    const double s = std::pow(w, 1.0 / beta);
    return std::pow(t - s, -beta) * deriv(s) * (1.0 / beta) *
           std::pow(w, 1.0 / beta - 1.0);
  };
  // Right half [t/2, t]: u = (t - s)^{1-beta} flattens the kernel
  // singularity at s = t exactly.
  const double u_end = std::pow(0.5 * t, 1.0 - beta);
  const auto right_integrand = [&](double u) {
    const double s = t - std::pow(u, 1.0 / (1.0 - beta));
    return deriv(s) / (1.0 - beta);
  };

  const double piece_tol = 0.5 * quad_tol;
  const auto left =
      detail_::integrate_adaptive(left_integrand, 0.0, w_end, piece_tol);
  const auto right =
      detail_::integrate_adaptive(right_integrand, 0.0, u_end, piece_tol);
  if (!left.converged || !right.converged) {
    throw PrecisionError(
        "caputo_residual: quadrature did not converge to " +
            std::to_string(quad_tol),
        left.error_estimate + right.error_estimate);
  }
  const double caputo =
      (left.value + right.value) / specfun::gamma(1.0 - beta);
  return caputo - balance;
}

}  // namespace fracpoisson::analytic
