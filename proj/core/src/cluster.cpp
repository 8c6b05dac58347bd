#include "fracpoisson/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "fracpoisson/detail/compensated.hpp"
#include "fracpoisson/detail/ode.hpp"
#include "fracpoisson/detail/rng.hpp"
#include "fracpoisson/errors.hpp"

namespace fracpoisson::cluster {

namespace detail_ = fracpoisson::detail;

ClusterSystem::ClusterSystem(std::size_t N, std::vector<double> a,
                             std::vector<double> b, double z,
                             std::vector<double> c)
    : n_(N), a_(std::move(a)), b_(std::move(b)), z_(z), c_(std::move(c)) {
  if (N < 1) throw ContractError("ClusterSystem: size must be >= 1");
  const std::size_t dim = (N + 1) * (N + 1);
  if (a_.size() != dim || b_.size() != dim) {
    throw ContractError("ClusterSystem: coefficient tables must be (N+1)^2");
  }
  if (c_.size() != N) {
    throw ContractError("ClusterSystem: state must hold clusters 1..N");
  }
  if (!(z_ > 0.0)) throw ContractError("ClusterSystem: z must be positive");
  for (std::size_t n = 0; n <= N; ++n) {
    for (std::size_t k = 0; k <= N; ++k) {
      const double an = a_[n * (N + 1) + k];
      const double bn = b_[n * (N + 1) + k];
      if (an < 0.0 || bn < 0.0) {
        throw ContractError("ClusterSystem: coefficients must be >= 0");
      }
      if (an != a_[k * (N + 1) + n] || bn != b_[k * (N + 1) + n]) {
        throw ContractError("ClusterSystem: coefficients must be symmetric");
      }
    }
  }
  for (double v : c_) {
    if (v < 0.0) throw ContractError("ClusterSystem: concentrations must be >= 0");
  }
}

double ClusterSystem::c(std::size_t m) const {
  if (m == 0) return 1.0;
  if (m > n_) return 0.0;
  return c_[m - 1];
}

void ClusterSystem::set_state(std::vector<double> c) {
  if (c.size() != n_) throw ContractError("ClusterSystem: state size mismatch");
  c_ = std::move(c);
}

bool ClusterSystem::is_linear() const {
  if (a(0, 0) != 0.0) return false;
  for (std::size_t n = 1; n <= n_; ++n) {
    for (std::size_t k = 1; k <= n_; ++k) {
      if (a(n, k) != 0.0) return false;
    }
  }
  return true;
}

double cluster_current(std::size_t n, std::size_t k, const ClusterSystem& sys) {
  if (n > sys.size() || k > sys.size()) {
    throw ContractError("cluster_current: index outside truncation");
  }
  return sys.a(n, k) * sys.z() * sys.c(n) * sys.c(k) -
         sys.b(n, k) * sys.c(n + k + 1);
}

std::vector<double> cluster_rhs(const ClusterSystem& sys) {
  const std::size_t N = sys.size();
  std::vector<double> rhs(N, 0.0);
  for (std::size_t n = 1; n <= N; ++n) {
    detail_::NeumaierSum<long double> acc;
    for (std::size_t k = 1; k <= n; ++k) {
      acc.add(0.5L * static_cast<long double>(cluster_current(n - k, k - 1, sys)));
    }
    for (std::size_t k = 1; k <= N; ++k) {
      acc.add(-static_cast<long double>(cluster_current(n, k - 1, sys)));
    }
    rhs[n - 1] = static_cast<double>(acc.value());
  }
  return rhs;
}

std::vector<double> linear_cluster_rhs(const ClusterSystem& sys) {
  if (!sys.is_linear()) {
    throw ContractError(
        "linear_cluster_rhs: coefficient family is not linear "
        "(a must vanish off the reservoir column, including a(0,0))");
  }
  const std::size_t N = sys.size();
  std::vector<double> rhs(N, 0.0);
  for (std::size_t n = 1; n <= N; ++n) {
    detail_::NeumaierSum<long double> acc;
    acc.add(static_cast<long double>(sys.a(n - 1, 0)) * sys.z() * sys.c(n - 1));
    long double frag_loss = 0.0L;
    for (std::size_t k = 1; k <= n; ++k) {
      frag_loss += 0.5L * static_cast<long double>(sys.b(n - k, k - 1));
    }
    acc.add(-(static_cast<long double>(sys.a(n, 0)) * sys.z() + frag_loss) *
            sys.c(n));
    for (std::size_t k = 1; k + n <= N; ++k) {
      acc.add(static_cast<long double>(sys.b(n, k - 1)) * sys.c(n + k));
    }
    rhs[n - 1] = static_cast<double>(acc.value());
  }
  return rhs;
}

std::vector<double> FppEmbeddingReport::stencil_rhs(
    const std::vector<double>& c) const {
  if (c.size() != size) {
    throw ContractError("FppEmbeddingReport: state size mismatch");
  }
  const auto at = [&](std::size_t m) -> double {  // c_m, boundary conventions
    if (m == 0) return 1.0;
    if (m > size) return 0.0;
    return c[m - 1];
  };
  std::vector<double> rhs(size, 0.0);
  for (std::size_t m = 1; m <= size; ++m) {
    detail_::NeumaierSum<long double> acc;
    acc.add(static_cast<long double>(gain[m - 1]) * at(m - 1));
    acc.add(-static_cast<long double>(loss[m - 1]) * at(m));
    const auto& row = gains_above[m - 1];
    for (std::size_t k = 1; k <= row.size(); ++k) {
      acc.add(static_cast<long double>(row[k - 1]) * at(m + k));
    }
    rhs[m - 1] = static_cast<double>(acc.value());
  }
  return rhs;
}

FppEmbeddingReport embed_fpp_generator(const odegen::GeneratorMatrix& gen,
                                       std::size_t samples,
                                       std::uint64_t seed) {
  const std::size_t N = gen.size();
  FppEmbeddingReport rep;
  rep.size = N;
  rep.z = 1.0;
  rep.gain.resize(N, 0.0);
  rep.loss.resize(N, 0.0);
  rep.gains_above.resize(N);
  rep.reservoir_b.assign(N == 0 ? 0 : N - 1, 0.0);
  rep.min_b_entry = std::numeric_limits<double>::infinity();

  for (std::size_t m = 1; m <= N; ++m) {
    rep.gain[m - 1] = (m >= 2) ? gen.at(m - 1, m - 2) : 0.0;
    rep.loss[m - 1] = -gen.at(m - 1, m - 1);
    auto& row = rep.gains_above[m - 1];
    row.resize(N - m);
    for (std::size_t k = 1; k + m <= N; ++k) {
      const double v = gen.at(m - 1, m - 1 + k);
      row[k - 1] = v;
      if (v < 0.0) ++rep.negative_b_entries;
      rep.min_b_entry = std::min(rep.min_b_entry, v);
    }
  }
  if (!std::isfinite(rep.min_b_entry)) rep.min_b_entry = 0.0;

  // Reservoir closure row: b(0, q) carries the partial column sum
  // sum_{r<q} A[r][q], which makes the B-form loss decomposition
  //   loss_m = a(m,0) z + 1/2 (sum_{k<m} b(m-k,k-1) + b(0,m-1))
  // close exactly through column conservation.
  for (std::size_t q = 1; q < N; ++q) {
    detail_::NeumaierSum<long double> s;
    for (std::size_t r = 0; r < q; ++r) s.add(gen.at(r, q));
    rep.reservoir_b[q - 1] = static_cast<double>(s.value());
  }
  double worst_decomp = 0.0;
  for (std::size_t m = 1; m < N; ++m) {  // row N lacks a(N,0) inside the truncation
    const double a_m0_z = gen.at(m, m - 1);
    detail_::NeumaierSum<long double> half;
    for (std::size_t k = 1; k < m; ++k) {
      half.add(rep.gains_above[m - k - 1][k - 1]);
    }
    if (m >= 2) half.add(rep.reservoir_b[m - 2]);  // b(0, m-1); b(0,0) = 0
    const double recomposed = a_m0_z + 0.5 * static_cast<double>(half.value());
    worst_decomp = std::max(worst_decomp, std::fabs(recomposed - rep.loss[m - 1]));
  }
  rep.loss_decomposition_defect = worst_decomp;

  detail_::Xoshiro256pp rng(seed);
  double worst = 0.0;
  for (std::size_t s = 0; s < samples; ++s) {
    std::vector<double> c(N);
    for (auto& v : c) v = rng.uniform_open();
    const auto lhs = rep.stencil_rhs(c);
    const auto rhs = gen.apply(c);  // counts 0..N-1 <-> clusters 1..N
    for (std::size_t i = 0; i < N; ++i) {
      worst = std::max(worst, std::fabs(lhs[i] - rhs[i]));
    }
  }
  rep.residual = worst;
  return rep;
}

ClusterTrajectory integrate_cluster(const ClusterSystem& sys, double t_end,
                                    const std::vector<double>& grid,
                                    double step_tol) {
  if (!(t_end > 0.0)) throw DomainError("integrate_cluster: t_end must be > 0");
  double prev = 0.0;
  for (double g : grid) {
    if (!(g > prev) || !(g <= t_end)) {
      throw DomainError("integrate_cluster: grid must ascend within (0, t_end]");
    }
    prev = g;
  }
  ClusterSystem work = sys;
  const auto rhs_fn = [&work](double, const std::vector<double>& y,
                              std::vector<double>& dydt) {
    work.set_state(y);
    dydt = cluster_rhs(work);
  };
  ClusterTrajectory traj;
  traj.t_grid.push_back(0.0);
  traj.states.push_back(sys.state());
  const auto observe = [&traj](double t, const std::vector<double>& y) {
    traj.t_grid.push_back(t);
    traj.states.push_back(y);
  };
  detail_::integrate_dopri5(rhs_fn, 0.0, sys.state(), grid, step_tol, observe);
  return traj;
}

}  // namespace fracpoisson::cluster
