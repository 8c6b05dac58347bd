#include "fracpoisson/detail/ode.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fracpoisson/errors.hpp"

namespace fracpoisson::detail {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5.0;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double b1 = 35.0 / 384.0, b3 = 500.0 / 1113.0, b4 = 125.0 / 192.0,
                 b5 = -2187.0 / 6784.0, b6 = 11.0 / 84.0;
// 4th-order embedded weights.
constexpr double e1 = 5179.0 / 57600.0, e3 = 7571.0 / 16695.0,
                 e4 = 393.0 / 640.0, e5 = -92097.0 / 339200.0,
                 e6 = 187.0 / 2100.0, e7 = 1.0 / 40.0;

constexpr long kMaxSteps = 10'000'000;

}  // namespace

void integrate_dopri5(const OdeRhs& rhs, double t0, std::vector<double> y0,
                      const std::vector<double>& grid, double tol,
                      const OdeObserver& observe) {
  const std::size_t dim = y0.size();
  std::vector<double> y = std::move(y0);
  std::vector<double> k1(dim), k2(dim), k3(dim), k4(dim), k5(dim), k6(dim),
      k7(dim), ytmp(dim), ynew(dim);

  double t = t0;
  rhs(t, y, k1);  // FSAL seed

  const double t_end = grid.empty() ? t0 : grid.back();
  if (t_end <= t0) {
    for (double g : grid) observe(g, y);
    return;
  }

  // Initial step from the magnitude of the seed derivative.
  double dnorm = 0.0;
  for (double v : k1) dnorm = std::max(dnorm, std::fabs(v));
  double h = std::min(0.01 * (t_end - t0), 0.1 / (1.0 + dnorm));

  std::size_t next_grid = 0;
  double err_prev = 1.0;
  long steps = 0;

  while (next_grid < grid.size()) {
    if (++steps > kMaxSteps) {
      throw IntegrationError(
          "integrate_dopri5: step cap of 1e7 exhausted at t = " +
              std::to_string(t),
          t);
    }
    bool hit_grid = false;
    if (t + h >= grid[next_grid] - 1e-14 * (1.0 + std::fabs(t))) {
      h = grid[next_grid] - t;
      hit_grid = true;
    }
    if (h < 1e-14 * (1.0 + std::fabs(t))) {
      if (hit_grid) {
        // Grid point is within roundoff of the current time.
        observe(grid[next_grid], y);
        ++next_grid;
        h = std::max(h, 1e-6 * (t_end - t0));
        continue;
      }
      throw IntegrationError(
          "integrate_dopri5: step size underflow at t = " + std::to_string(t),
          t);
    }

    for (std::size_t i = 0; i < dim; ++i) ytmp[i] = y[i] + h * a21 * k1[i];
    rhs(t + h / 5.0, ytmp, k2);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    rhs(t + 3.0 * h / 10.0, ytmp, k3);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    rhs(t + 4.0 * h / 5.0, ytmp, k4);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] =
          y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    rhs(t + 8.0 * h / 9.0, ytmp, k5);
    for (std::size_t i = 0; i < dim; ++i)
      ytmp[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] +
                            a64 * k4[i] + a65 * k5[i]);
    rhs(t + h, ytmp, k6);
    for (std::size_t i = 0; i < dim; ++i)
      ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] +
                            b6 * k6[i]);
    rhs(t + h, ynew, k7);

    double err = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
      const double y4 = y[i] + h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                                    e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double scale =
          tol + tol * std::max(std::fabs(y[i]), std::fabs(ynew[i]));
      const double e = (ynew[i] - y4) / scale;
      err += e * e;
    }
    err = std::sqrt(err / static_cast<double>(dim));

    if (err <= 1.0) {
      t += h;
      y.swap(ynew);
      k1.swap(k7);  // FSAL
      if (hit_grid) {
        observe(grid[next_grid], y);
        ++next_grid;
      }
      // PI controller (Gustafsson).
      const double fac = 0.9 * std::pow(err > 1e-10 ? err : 1e-10, -0.7 / 5.0) *
                         std::pow(err_prev, 0.4 / 5.0);
      h *= std::clamp(fac, 0.2, 5.0);
      err_prev = std::max(err, 1e-10);
    } else {
      h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.9);
    }
  }
}

}  // namespace fracpoisson::detail
