#ifndef FRACPOISSON_MC_HPP
#define FRACPOISSON_MC_HPP

#include <cstdint>
#include <vector>

#include "fracpoisson/analytic.hpp"
#include "fracpoisson/detail/rng.hpp"
#include "fracpoisson/types.hpp"

// Monte Carlo layer: waiting-time draws by inverse-transform sampling of the
// survival function, renewal counting paths, empirical PMFs, and
// goodness-of-fit statistics against the analytic solution.
//
// Determinism contract: every path (or draw) derives its stream from
// (master seed, index), so serial and parallel runs agree bit for bit for
// any worker count.
//
// Caveat: for beta < 1 the waiting times are heavy-tailed with infinite
// mean; keep horizons modest (expected counts grow like t^beta only).

namespace fracpoisson::mc {

using RngState = fracpoisson::detail::Xoshiro256pp;

/// One realization: strictly increasing arrival times in (0, horizon].
struct SamplePath {
  std::vector<double> arrival_times;
  double horizon = 0.0;

  /// N(t): arrivals up to and including t.
  std::size_t count_at(double t) const;
};

/// Histogram of N(t) across an ensemble of paths.
struct EmpiricalPmf {
  double time = 0.0;
  std::vector<std::uint64_t> counts;
  std::uint64_t total_paths = 0;
};

struct GofResult {
  double statistic = 0.0;
  std::size_t dof = 0;
  double p_value = 0.0;
};

/// Survival prob(T_w > t) of the waiting-time law, valid on the whole
/// positive axis (series where it certifies, completely-monotone integral
/// representation in the far tail). Cached per parameter pair.
double waiting_time_survival(const ProcessParams& params, double t);

/// Inverse CDF: the t with |prob(T_w < t) - u| <= 1e-10, via bracketed
/// root-finding seeded from a cached monotone tabulation.
double waiting_time_quantile(const ProcessParams& params, double u);

/// One waiting-time draw.
double sample_waiting_time(RngState& rng, const ProcessParams& params);

/// Renewal construction: cumulative waiting-time draws until the horizon is
/// passed. Throws RunawayError past 1e9 draws.
SamplePath simulate_path(RngState& rng, const ProcessParams& params,
                         double t_end);

/// n_paths independent paths, path i on stream (seed, i). `threads` = 0
/// picks the hardware default; the result is identical for every choice.
std::vector<SamplePath> simulate_ensemble(const ProcessParams& params,
                                          double t_end, std::size_t n_paths,
                                          std::uint64_t seed,
                                          unsigned threads = 0);

/// n single waiting-time draws, draw i on stream (seed, i).
std::vector<double> sample_waiting_times(const ProcessParams& params,
                                         std::size_t n, std::uint64_t seed,
                                         unsigned threads = 0);

/// Histogram of N(t) across paths; t must not exceed any path horizon.
EmpiricalPmf empirical_pmf(const std::vector<SamplePath>& paths, double t);

/// Pearson chi-square of the histogram against the analytic vector, bins
/// pooled so every expected count is >= 5, the tail mass pooled into the
/// last bin via the vector's tail bound.
GofResult chi_square_gof(const EmpiricalPmf& emp,
                         const analytic::ProbVector& model);

/// One-sample Kolmogorov-Smirnov distance of the draws against the
/// waiting-time CDF.
double ks_statistic_waiting_times(std::vector<double> draws,
                                  const ProcessParams& params);

/// Asymptotic KS critical value at level alpha for n samples.
double ks_critical_value(std::size_t n, double alpha);

/// Asymptotic KS p-value for distance d at n samples.
double ks_pvalue(double d, std::size_t n);

}  // namespace fracpoisson::mc

#endif  // FRACPOISSON_MC_HPP
