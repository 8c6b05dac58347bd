// Acceptance suite: runs every top-level correctness gate at its stated
// tolerance and prints one PASS/FAIL line per criterion. Exit status is the
// number of failed criteria.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "fracpoisson/analytic.hpp"
#include "fracpoisson/cluster.hpp"
#include "fracpoisson/detail/rng.hpp"
#include "fracpoisson/mc.hpp"
#include "fracpoisson/odegen.hpp"
#include "fracpoisson/pascal.hpp"
#include "fracpoisson/specfun.hpp"

using namespace fracpoisson;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void report(int id, const char* label, bool pass, const std::string& detail) {
  std::printf("%s  criterion %2d: %s (%s)\n", pass ? "PASS" : "FAIL", id,
              label, detail.c_str());
  if (!pass) ++failures;
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* pattern, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof buf, pattern, a, b);
  return buf;
}

double poisson_pmf(std::size_t n, double mean) {
  double lg = 0.0;
  for (std::size_t i = 2; i <= n; ++i) lg += std::log(static_cast<double>(i));
  return std::exp(-mean + static_cast<double>(n) * std::log(mean) - lg);
}

// --- 1: classical reduction ----------------------------------------------

void criterion_1() {
  const auto t0 = Clock::now();
  const ProcessParams p1(1.0, 1.0);
  double worst_pmf = 0.0;
  for (double t : {0.5, 1.0, 2.0, 5.0, 10.0}) {
    for (std::size_t n = 0; n <= 30; ++n) {
      worst_pmf = std::max(
          worst_pmf, std::fabs(analytic::pmf(n, t, p1, 1e-13) -
                               poisson_pmf(n, t)));
    }
  }
  const auto gen = odegen::generator_matrix(80, p1);
  double worst_gen = 0.0;
  for (std::size_t n = 0; n < 80; ++n) {
    for (std::size_t k = 0; k < 80; ++k) {
      const double want = (k + 1 == n) ? 1.0 : (k == n ? -1.0 : 0.0);
      worst_gen = std::max(worst_gen, std::fabs(gen.at(n, k) - want));
    }
  }
  const double elapsed = seconds_since(t0);
  const bool pass =
      worst_pmf <= 1e-12 && worst_gen <= 1e-10 && elapsed < 1.0;
  report(1, "beta=1 classical reduction", pass,
         fmt("max pmf dev %.2e <= 1e-12, max generator dev %.2e <= 1e-10",
             worst_pmf, worst_gen) +
             fmt(", %.2f s < 1 s", elapsed));
}

// --- 2: ODE-series equivalence -------------------------------------------

void criterion_2() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (double beta : {0.5, 0.7, 0.9}) {
    const ProcessParams params(beta, 1.0);
    const auto gen = odegen::generator_matrix(80, params);
    std::vector<double> tau_grid;
    for (double t : {0.25, 0.5, 1.0, 2.0, 4.0}) {
      tau_grid.push_back(odegen::tau_of_t(t, beta));
    }
    std::sort(tau_grid.begin(), tau_grid.end());
    const auto traj = odegen::evolve(gen, tau_grid.back(), tau_grid, 1e-11);
    for (std::size_t gi = 0; gi < tau_grid.size(); ++gi) {
      const double t = odegen::t_of_tau(tau_grid[gi], beta);
      for (std::size_t n = 0; n < 30; ++n) {
        worst = std::max(worst,
                         std::fabs(traj.states[gi + 1][n] -
                                   analytic::pmf(n, t, params, 1e-12)));
      }
    }
  }
  const double elapsed = seconds_since(t0);
  const bool pass = worst <= 1e-6 && elapsed < 30.0;
  report(2, "ODE representation matches the series", pass,
         fmt("max |ODE - series| %.2e <= 1e-6, %.1f s < 30 s", worst, elapsed));
}

// --- 3: exact transform roundtrip ----------------------------------------

void criterion_3() {
  const auto t0 = Clock::now();
  detail::Xoshiro256pp rng(3141);
  bool exact = true;
  for (int rep = 0; rep < 1000 && exact; ++rep) {
    const std::size_t n = 1 + rng.next() % 60;
    pascal::ExactVector v;
    for (std::size_t i = 0; i < n; ++i) {
      v.values.push_back(static_cast<long long>(rng.next() % 2000001) -
                         1000000);
    }
    const auto back = pascal::apply_inverse_pascal(pascal::apply_pascal(v));
    exact = (back.values == v.values);
  }
  const double elapsed = seconds_since(t0);
  const bool pass = exact && elapsed < 5.0;
  report(3, "signed transform pair is an exact identity", pass,
         std::string(exact ? "1000 random vectors, zero error"
                           : "roundtrip mismatch") +
             fmt(", %.2f s < 5 s", elapsed));
}

// --- 4: rotated inversion on analytic data --------------------------------

void criterion_4() {
  const ProcessParams params(0.7, 1.0);
  double worst = 0.0;
  for (double tau : {1.0, 2.0, 3.0}) {
    const double t = odegen::t_of_tau(tau, 0.7);
    const std::size_t N = 60;
    pascal::RealVector signed_p;
    signed_p.signing = pascal::Signing::alternating;
    for (std::size_t k = 0; k < N; ++k) {
      const double rough = analytic::pmf(k, t, params, 1e-14);
      const double tol = std::max(1e-280, rough * 1e-13);
      const double p = analytic::pmf(k, t, params, tol);
      signed_p.values.push_back((k % 2 == 0 ? 1.0 : -1.0) * p);
    }
    const auto rec = pascal::apply_inverse_pascal(signed_p);
    for (std::size_t m = 0; m <= 20; ++m) {
      worst = std::max(worst, std::fabs(rec.values[m] -
                                        analytic::phi(m, tau, params).value));
    }
  }
  report(4, "rotated inversion recovers phi from probabilities",
         worst <= 1e-8, fmt("max deviation %.2e <= 1e-8", worst));
}

// --- 5: conservation -------------------------------------------------------

void criterion_5() {
  double worst_col = 0.0, worst_defect = 0.0;
  for (double beta : {0.5, 0.7, 0.9, 1.0}) {
    const ProcessParams params(beta, 1.0);
    const auto gen = odegen::generator_matrix(80, params);
    for (std::size_t k = 0; gen.column_complete(k); ++k) {
      double col_max = 0.0;
      for (std::size_t n = 0; n <= k + 1; ++n) {
        col_max = std::max(col_max, std::fabs(gen.at(n, k)));
      }
      worst_col = std::max(worst_col, std::fabs(gen.column_sum(k)) / col_max);
    }
    const auto traj =
        odegen::evolve(gen, 3.0, {0.25, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}, 1e-11);
    for (double d : traj.conservation_log) {
      worst_defect = std::max(worst_defect, d);
    }
  }
  const bool pass = worst_col <= 1e-9 && worst_defect <= 1e-7;
  report(5, "probability conservation (columns and integration)", pass,
         fmt("max relative column sum %.2e <= 1e-9, max mass defect %.2e <= 1e-7",
             worst_col, worst_defect));
}

// --- 6: proof-chain shadow -------------------------------------------------

void criterion_6() {
  double worst = 0.0;
  for (double beta : {0.5, 0.7, 0.9}) {
    const ProcessParams params(beta, 1.0);
    for (double tau : {0.25, 0.5, 1.0, 2.0}) {
      for (std::size_t n = 0; n <= 3; ++n) {
        worst = std::max(worst, odegen::proofstep_check(n, tau, params, 400));
      }
    }
  }
  report(6, "double-series interchange shadow", worst <= 1e-8,
         fmt("max route difference %.2e <= 1e-8", worst));
}

// --- 7: cluster reduction and embedding ------------------------------------

void criterion_7() {
  detail::Xoshiro256pp rng(777);
  const std::size_t N = 30;
  std::vector<double> a((N + 1) * (N + 1), 0.0), b((N + 1) * (N + 1), 0.0);
  for (std::size_t p = 1; p <= N; ++p) {
    const double av = rng.uniform_open();
    a[p * (N + 1) + 0] = a[0 * (N + 1) + p] = av;
  }
  for (std::size_t p = 0; p <= N; ++p) {
    for (std::size_t k = p; k <= N; ++k) {
      const double bv = rng.uniform_open();
      b[p * (N + 1) + k] = b[k * (N + 1) + p] = bv;
    }
  }
  double worst_reduction = 0.0;
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> c(N);
    for (auto& v : c) v = 2.0 * rng.uniform_open();
    cluster::ClusterSystem sys(N, a, b, 1.3, c);
    const auto general = cluster::cluster_rhs(sys);
    const auto linear = cluster::linear_cluster_rhs(sys);
    for (std::size_t i = 0; i < N; ++i) {
      worst_reduction =
          std::max(worst_reduction, std::fabs(general[i] - linear[i]));
    }
  }
  const auto gen = odegen::generator_matrix(40, ProcessParams(0.7, 1.0));
  const auto rep = cluster::embed_fpp_generator(gen, 100, 20130516);
  const bool pass = worst_reduction <= 1e-12 && rep.residual <= 1e-12;
  report(7, "cluster-equation reduction and generator embedding", pass,
         fmt("reduction %.2e <= 1e-12, embedding residual %.2e <= 1e-12",
             worst_reduction, rep.residual));
}

// --- 8: Monte Carlo consistency ---------------------------------------------

void criterion_8() {
  const auto t0 = Clock::now();
  const std::size_t n_draws = 100000, n_paths = 100000;
  bool pass = true;
  std::ostringstream detail;
  for (double beta : {0.5, 0.7, 1.0}) {
    const ProcessParams params(beta, 1.0);
    const auto draws = mc::sample_waiting_times(params, n_draws, 42);
    const double d = mc::ks_statistic_waiting_times(draws, params);
    const double crit = mc::ks_critical_value(n_draws, 0.01);
    pass = pass && d <= crit;

    const auto ensemble = mc::simulate_ensemble(params, 1.0, n_paths, 42);
    const auto emp = mc::empirical_pmf(ensemble, 1.0);
    const auto model = analytic::pmf_vector(40, 1.0, params, 1e-12);
    const auto gof = mc::chi_square_gof(emp, model);
    pass = pass && gof.p_value > 0.001;

    double mean = 0.0;
    for (const auto& path : ensemble) {
      mean += static_cast<double>(path.count_at(1.0));
    }
    mean /= static_cast<double>(n_paths);
    const double m1 = analytic::factorial_moment(1, 1.0, params);
    const double m2 = analytic::factorial_moment(2, 1.0, params);
    const double sigma =
        std::sqrt((m2 + m1 - m1 * m1) / static_cast<double>(n_paths));
    pass = pass && std::fabs(mean - m1) <= 3.0 * sigma;

    char buf[96];
    std::snprintf(buf, sizeof buf, "b=%.1f: KS %.4f/%.4f p %.3f mean|d| %.1fs; ",
                  beta, d, crit, gof.p_value,
                  std::fabs(mean - m1) / sigma);
    detail << buf;
  }
  const double elapsed = seconds_since(t0);
  pass = pass && elapsed < 60.0;
  report(8, "Monte Carlo consistency (KS, chi-square, mean)", pass,
         detail.str() + fmt("%.1f s < 60 s", elapsed));
}

// --- 9: moment identities ---------------------------------------------------

void criterion_9() {
  double worst = 0.0;
  for (double beta : {0.5, 0.7, 0.9, 1.0}) {
    const ProcessParams params(beta, 1.0);
    double m1 = 0.0, m2 = 0.0;
    for (std::size_t n = 0; n < 80; ++n) {
      const double p = analytic::pmf(n, 1.0, params, 1e-14);
      m1 += static_cast<double>(n) * p;
      m2 += static_cast<double>(n) * static_cast<double>(n - 1) * p;
    }
    const double f1 = analytic::factorial_moment(1, 1.0, params);
    const double f2 = analytic::factorial_moment(2, 1.0, params);
    worst = std::max(worst, std::fabs(m1 - f1) / f1);
    worst = std::max(worst, std::fabs(m2 - f2) / f2);
  }
  report(9, "factorial-moment identities", worst <= 1e-6,
         fmt("max relative deviation %.2e <= 1e-6", worst));
}

// --- 10: fractional-derivative residual -------------------------------------

void criterion_10() {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (double beta : {0.5, 0.7}) {
    const ProcessParams params(beta, 1.0);
    for (double t : {0.5, 1.0, 2.0}) {
      for (std::size_t n = 0; n <= 3; ++n) {
        worst = std::max(
            worst, std::fabs(analytic::caputo_residual(n, t, params, 1e-8)));
      }
    }
  }
  const double elapsed = seconds_since(t0);
  const bool pass = worst <= 1e-6 && elapsed < 10.0;
  report(10, "fractional-derivative residual", pass,
         fmt("max |residual| %.2e <= 1e-6, %.1f s < 10 s", worst, elapsed));
}

// --- 11: byte-identical reruns ----------------------------------------------

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

void criterion_11() {
  const char* cli = std::getenv("FRACPOISSON_CLI");
  if (cli == nullptr) {
    report(11, "byte-identical validation reruns", false,
           "FRACPOISSON_CLI not set");
    return;
  }
  const std::string a = "/tmp/fracpoisson_acc_a.csv";
  const std::string b = "/tmp/fracpoisson_acc_b.csv";
  const std::string cmd = "\"" + std::string(cli) +
                          "\" validate --t-grid 0.25,0.5,1,2,4 --trunc 80 "
                          "--tol 1e-6 --out ";
  const int ra = std::system((cmd + a + " >/dev/null 2>&1").c_str());
  const int rb = std::system((cmd + b + " >/dev/null 2>&1").c_str());
  const std::string ta = slurp(a), tb = slurp(b);
  const bool pass = WEXITSTATUS(ra) == 0 && WEXITSTATUS(rb) == 0 &&
                    !ta.empty() && ta == tb;
  report(11, "byte-identical validation reruns", pass,
         fmt("exit codes %g/%g", WEXITSTATUS(ra), WEXITSTATUS(rb)) +
             (ta == tb ? ", outputs identical" : ", outputs differ"));
  std::remove(a.c_str());
  std::remove(b.c_str());
}

}  // namespace

int main() {
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  if (failures == 0) {
    std::printf("all acceptance criteria passed\n");
  } else {
    std::printf("%d acceptance criteria FAILED\n", failures);
  }
  return failures;
}
