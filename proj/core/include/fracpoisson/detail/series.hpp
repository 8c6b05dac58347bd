#ifndef FRACPOISSON_DETAIL_SERIES_HPP
#define FRACPOISSON_DETAIL_SERIES_HPP

#include <mpfr.h>

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>

#include "fracpoisson/detail/bigfloat.hpp"
#include "fracpoisson/detail/compensated.hpp"
#include "fracpoisson/errors.hpp"

// Summation engine for the signed series this library lives on
// (probability series, Mittag-Leffler series, generator inner sums).
//
// Callers describe term j two ways:
//   * in log space, sign * exp(log_mag), for the native fast path;
//   * as an exact builder writing the term into a BigFloat, for the
//     adaptive-precision fallback.
//
// Requirement on the series: |t_{j+1}/t_j| is non-increasing in j once it
// drops below 1 (true for binomial-times-power-over-Gamma terms, since both
// the binomial ratio and the Gamma ratio decrease monotonically). Under that
// guarantee the geometric remainder bound T_{J+1}/(1-r) is certified as soon
// as the observed ratio r falls to 1/2 or less.

namespace fracpoisson::detail {

struct LogTerm {
  int sign;              // +1 / -1, or 0 for an exactly zero term
  long double log_mag;   // ln|term|
  long double log_scale; // sum of |magnitudes| entering log_mag, for error accounting
};

struct SeriesResult {
  double value = 0.0;
  double error_bound = 0.0;     // certified absolute error: rounding + tail
  double log_max_term = -std::numeric_limits<double>::infinity();
  double sum_abs = 0.0;
  int terms_used = 0;
  bool used_bigfloat = false;
  long precision_bits = 64;
};

using LogTermFn = std::function<LogTerm(int)>;
using BigTermFn = std::function<void(int, BigFloat&)>;

inline constexpr long kSeriesPrecisionCap = 8192;

// Native long-double pass. Returns false if the certified rounding bound
// cannot meet abs_tol (caller then escalates to the BigFloat pass).
inline bool sum_series_native(const LogTermFn& term, double abs_tol,
                              double tail_share, int max_terms,
                              SeriesResult& out) {
  static constexpr long double kEps = 5.42101086242752217e-20L;  // 2^-64
  NeumaierSum<long double> sum;
  long double sum_abs = 0.0L, rounding = 0.0L;
  long double prev_mag = -std::numeric_limits<long double>::infinity();
  long double log_max = -std::numeric_limits<long double>::infinity();
  long double tail = std::numeric_limits<long double>::infinity();
  int j = 0;
  for (; j < max_terms; ++j) {
    const LogTerm lt = term(j);
    if (lt.sign == 0) {
      // Zero terms only arise for a zero expansion argument; everything
      // after is zero as well.
      tail = 0.0L;
      ++j;
      break;
    }
    if (lt.log_mag > 11300.0L) return false;  // beyond long double range
    const long double mag = expl(lt.log_mag);
    sum.add(lt.sign > 0 ? mag : -mag);
    sum_abs += mag;
    rounding += mag * (lt.log_scale + 8.0L) * 3.0L * kEps;
    if (lt.log_mag > log_max) log_max = lt.log_mag;
    if (std::isfinite(static_cast<double>(prev_mag))) {
      const long double r = expl(lt.log_mag - prev_mag);
      if (r <= 0.5L) {
        tail = mag * r / (1.0L - r);
        if (tail <= tail_share * abs_tol) {
          ++j;
          break;
        }
      }
    }
    prev_mag = lt.log_mag;
  }
  if (!(tail < std::numeric_limits<long double>::infinity())) return false;
  const long double err = rounding + 2.0L * kEps * sum_abs + tail;
  out.value = static_cast<double>(sum.value());
  out.error_bound = static_cast<double>(err);
  out.log_max_term = static_cast<double>(log_max);
  out.sum_abs = static_cast<double>(sum_abs);
  out.terms_used = j;
  out.used_bigfloat = false;
  out.precision_bits = 64;
  return err <= abs_tol;
}

// Adaptive-precision pass. Doubles the working precision until the certified
// bound meets abs_tol or the cap is reached.
inline bool sum_series_bigfloat(const BigTermFn& term, double abs_tol,
                                double tail_share, int max_terms,
                                long start_prec, SeriesResult& out) {
  for (long prec = start_prec; prec <= kSeriesPrecisionCap; prec *= 2) {
    BigFloat sum(prec), t(prec), abs_t(prec);
    double log2_sum_abs = -std::numeric_limits<double>::infinity();
    double log2_max = -std::numeric_limits<double>::infinity();
    double prev_log2 = std::numeric_limits<double>::quiet_NaN();
    double tail = std::numeric_limits<double>::infinity();
    int j = 0;
    bool ended = false;
    for (; j < max_terms; ++j) {
      term(j, t);
      if (t.is_zero()) {
        tail = 0.0;
        ++j;
        ended = true;
        break;
      }
      sum.add(t);
      const double l2 = t.log2_abs();
      if (l2 > log2_max) log2_max = l2;
      log2_sum_abs = (log2_sum_abs < l2)
                         ? l2 + std::log2(1.0 + std::exp2(log2_sum_abs - l2))
                         : log2_sum_abs + std::log2(1.0 + std::exp2(l2 - log2_sum_abs));
      if (!std::isnan(prev_log2)) {
        const double r = std::exp2(l2 - prev_log2);
        if (r <= 0.5) {
          tail = std::exp2(l2) * r / (1.0 - r);
          if (tail <= tail_share * abs_tol) {
            ++j;
            ended = true;
            break;
          }
        }
      }
      prev_log2 = l2;
    }
    if (!ended) {
      out.error_bound = std::numeric_limits<double>::infinity();
      out.terms_used = j;
      return false;  // ran out of terms; more precision will not help
    }
    const double rounding =
        (static_cast<double>(j) + 6.0) *
        std::exp2(log2_sum_abs + 2.0 - static_cast<double>(prec));
    const double err = rounding + tail;
    out.value = sum.to_double();
    out.error_bound = err;
    out.log_max_term = log2_max * 0.6931471805599453;  // back to natural log
    out.sum_abs = std::exp2(log2_sum_abs);
    out.terms_used = j;
    out.used_bigfloat = true;
    out.precision_bits = prec;
    if (err <= abs_tol) return true;
  }
  return false;
}

/// Sums a signed series with a certified absolute error <= abs_tol, choosing
/// the cheapest adequate precision. Throws PrecisionError (with the
/// achievable bound) if even the precision cap cannot certify abs_tol.
inline SeriesResult sum_signed_series(const LogTermFn& log_term,
                                      const BigTermFn& big_term,
                                      double abs_tol, int max_terms,
                                      const char* what) {
  SeriesResult res;
  if (sum_series_native(log_term, abs_tol, 0.5, max_terms, res)) return res;
  // Seed the fallback precision from the native diagnostics when available.
  long start = 128;
  if (res.sum_abs > 0.0 && abs_tol > 0.0) {
    const double need =
        std::log2(res.sum_abs / abs_tol) + std::log2(res.terms_used + 8.0) + 16.0;
    if (need > 64.0) start = std::max(start, static_cast<long>(need + 64.0));
    while (start > kSeriesPrecisionCap) start /= 2;
  }
  if (sum_series_bigfloat(big_term, abs_tol, 0.5, max_terms, start, res)) {
    return res;
  }
  throw PrecisionError(
      std::string(what) +
          ": requested tolerance unreachable; achievable bound " +
          std::to_string(res.error_bound),
      res.error_bound);
}

}  // namespace fracpoisson::detail

#endif  // FRACPOISSON_DETAIL_SERIES_HPP
