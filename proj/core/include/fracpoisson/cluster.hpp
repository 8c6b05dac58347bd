#ifndef FRACPOISSON_CLUSTER_HPP
#define FRACPOISSON_CLUSTER_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fracpoisson/odegen.hpp"

// Discrete coagulation-fragmentation dynamics for clusters 1..N coupled to a
// monomer reservoir: an n-cluster and a k-cluster merge through a created
// 1-cluster into an (n+k+1)-cluster, or the reverse split happens by
// deleting a 1-cluster. The linear specialization (coagulation only against
// the reservoir) carries the same stencil shape as the counting-process
// generator, and embed_fpp_generator makes that identification executable.
//
// Note on the linear reduction: the general gain sum counts the (0,0)
// channel once (it is its own mirror pair), so the reduction to the linear
// stencil is exact only for families with a[0][0] = 0. The generator
// embedding produces such families automatically (state 0 has no feeder).

namespace fracpoisson::cluster {

/// Coefficient family and state for clusters 1..N. c_0 is pinned to 1
/// (reservoir convention); concentrations beyond N read as 0.
/// a and b are symmetric non-negative (N+1) x (N+1) tables indexed from 0.
class ClusterSystem {
 public:
  ClusterSystem(std::size_t N, std::vector<double> a, std::vector<double> b,
                double z, std::vector<double> c);

  std::size_t size() const { return n_; }
  double z() const { return z_; }
  double a(std::size_t n, std::size_t k) const { return a_[n * (n_ + 1) + k]; }
  double b(std::size_t n, std::size_t k) const { return b_[n * (n_ + 1) + k]; }
  /// Concentration with the boundary conventions applied: c(0) = 1,
  /// c(m) = 0 for m > N.
  double c(std::size_t m) const;
  const std::vector<double>& state() const { return c_; }
  void set_state(std::vector<double> c);

  /// True when coagulation acts only against the reservoir (a nonzero only
  /// where one index is 0) and a(0,0) = 0.
  bool is_linear() const;

 private:
  std::size_t n_;
  std::vector<double> a_, b_;  // (N+1) x (N+1), symmetric
  double z_;
  std::vector<double> c_;  // clusters 1..N
};

/// Cluster current W(n, k) = a(n,k) z c_n c_k - b(n,k) c_{n+k+1}.
double cluster_current(std::size_t n, std::size_t k, const ClusterSystem& sys);

/// Full dynamics: dc_n/dt = 1/2 sum_{k=1}^{n} W(n-k, k-1)
///                          - sum_{k=1}^{N} W(n, k-1), for n = 1..N
/// (the infinite loss sum truncated at the system size).
std::vector<double> cluster_rhs(const ClusterSystem& sys);

/// Linear specialization:
/// dc_n/dt = a(n-1,0) z c_{n-1}
///           - (a(n,0) z + 1/2 sum_{k=1}^{n} b(n-k,k-1)) c_n
///           + sum_{k=1}^{N-n} b(n,k-1) c_{n+k}.
/// Throws ContractError if the system is not flagged linear.
std::vector<double> linear_cluster_rhs(const ClusterSystem& sys);

/// Structural identification of the counting-process generator with the
/// linear cluster stencil, cluster m <-> count m-1.
struct FppEmbeddingReport {
  std::size_t size = 0;          // clusters 1..size
  double z = 1.0;
  std::vector<double> gain;      // gain[m-1] = a(m-1,0) z = A[m-1][m-2]
  std::vector<double> loss;      // loss[m-1] = -A[m-1][m-1]
  std::vector<std::vector<double>> gains_above;  // [m-1][k-1] = A[m-1][m-1+k]
  std::vector<double> reservoir_b;  // b(0, q) closure row, q = 1..size-1
  /// max |loss - (a z + 1/2 sum b)| over rows: how exactly the stencil's
  /// loss decomposes in the B-form convention.
  double loss_decomposition_defect = 0.0;
  /// max |stencil rhs - generator rhs| over the sampled random states.
  double residual = 0.0;
  std::size_t negative_b_entries = 0;  // sign pattern, reported not asserted
  double min_b_entry = 0.0;

  /// The linear stencil under the extracted coefficients.
  std::vector<double> stencil_rhs(const std::vector<double>& c) const;
};

/// Extracts the identification from a generator truncation and measures the
/// defining residual on `samples` random non-negative states (deterministic
/// in `seed`).
FppEmbeddingReport embed_fpp_generator(const odegen::GeneratorMatrix& gen,
                                       std::size_t samples = 100,
                                       std::uint64_t seed = 20130516);

/// Integrates the full dynamics with the shared adaptive stepper, reporting
/// at the given ascending grid points.
struct ClusterTrajectory {
  std::vector<double> t_grid;
  std::vector<std::vector<double>> states;
};
ClusterTrajectory integrate_cluster(const ClusterSystem& sys, double t_end,
                                    const std::vector<double>& grid,
                                    double step_tol);

}  // namespace fracpoisson::cluster

#endif  // FRACPOISSON_CLUSTER_HPP
