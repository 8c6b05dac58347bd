#ifndef FRACPOISSON_DETAIL_STATS_HPP
#define FRACPOISSON_DETAIL_STATS_HPP

#include <cstddef>

namespace fracpoisson::detail {

/// Regularized upper incomplete gamma Q(a, x), a > 0, x >= 0.
double gamma_q(double a, double x);

/// Survival function of the chi-square distribution with `dof` degrees of
/// freedom at `x`.
double chi_square_sf(double x, std::size_t dof);

/// Asymptotic Kolmogorov distribution survival Q_KS(x) =
/// 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2).
double kolmogorov_sf(double x);

}  // namespace fracpoisson::detail

#endif  // FRACPOISSON_DETAIL_STATS_HPP
