#ifndef FRACPOISSON_DETAIL_ODE_HPP
#define FRACPOISSON_DETAIL_ODE_HPP

#include <functional>
#include <vector>

namespace fracpoisson::detail {

/// Right-hand side callback: writes dy/dt for the given state into `dydt`
/// (already sized like `y`).
using OdeRhs = std::function<void(double t, const std::vector<double>& y,
                                  std::vector<double>& dydt)>;

/// Called after integration reaches each requested grid point, with the
/// state at that point.
using OdeObserver = std::function<void(double t, const std::vector<double>& y)>;

/// Dormand-Prince 5(4) with PI step-size control. Integrates from (t0, y0)
/// through every point of the ascending `grid`, invoking the observer at
/// each one (steps are clamped to land on grid points exactly). Local error
/// per step is kept at `tol` (mixed absolute/relative). Throws
/// IntegrationError on step-size underflow or when the hard cap of 1e7
/// steps is exhausted.
void integrate_dopri5(const OdeRhs& rhs, double t0, std::vector<double> y0,
                      const std::vector<double>& grid, double tol,
                      const OdeObserver& observe);

}  // namespace fracpoisson::detail

#endif  // FRACPOISSON_DETAIL_ODE_HPP
