#include "fracpoisson/odegen.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "fracpoisson/analytic.hpp"
#include "fracpoisson/detail/bigfloat.hpp"
#include "fracpoisson/detail/compensated.hpp"
#include "fracpoisson/detail/gamma_ld.hpp"
#include "fracpoisson/detail/ode.hpp"
#include "fracpoisson/detail/series.hpp"
#include "fracpoisson/errors.hpp"
#include "fracpoisson/specfun.hpp"

namespace fracpoisson::odegen {

namespace detail_ = fracpoisson::detail;

namespace {

constexpr long kPrecStart = 192;
constexpr long kPrecCap = 8192;

// Gamma(beta j + 1) / Gamma(beta j + beta) for j = 0..j_max at one working
// precision. Both Gamma values are evaluated once, so at beta = 1 the ratio
// is exactly 1 and the telescoping cancellation is genuine.
std::vector<detail_::BigFloat> ratio_cache(double beta, std::size_t j_max,
                                           long prec) {
  std::vector<detail_::BigFloat> out;
  out.reserve(j_max + 1);
  detail_::BigFloat top(prec), bot(prec), arg(prec), one(prec), b(prec);
  one.set_si(1);
  b.set_d(beta);
  for (std::size_t j = 0; j <= j_max; ++j) {
    arg.set_d(beta);
    arg.mul_si(static_cast<long>(j));
    arg.add(one);  // beta j + 1
    top.gamma_of(arg);
    arg.set_d(beta);
    arg.mul_si(static_cast<long>(j));
    arg.add(b);  // beta j + beta
    bot.gamma_of(arg);
    detail_::BigFloat r = top;
    r.div(bot);
    out.push_back(std::move(r));
  }
  return out;
}

struct InnerSum {
  double value = 0.0;        // the inner alternating sum
  double log2_max_term = -1e9;
};

InnerSum inner_sum(std::size_t n, std::size_t k,
                   const std::vector<detail_::BigFloat>& ratios, long prec) {
  InnerSum res;
  detail_::BigFloat sum(prec), term(prec), c(prec);
  const std::size_t j_lo = (n == 0) ? 0 : n - 1;
  for (std::size_t j = j_lo; j <= k; ++j) {
    term.set_binomial(static_cast<unsigned long>(j + 1),
                      static_cast<unsigned long>(n));
    c.set_binomial(static_cast<unsigned long>(k), static_cast<unsigned long>(j));
    term.mul(c);
    term.mul(ratios[j]);
    if (j % 2 != 0) term.neg();
    res.log2_max_term = std::max(res.log2_max_term, term.log2_abs());
    sum.add(term);
  }
  res.value = sum.to_double();
  return res;
}

bool monitor_ok(const InnerSum& s, double lambda_over_beta, long prec) {
  const double max_term_a =
      std::exp2(s.log2_max_term + 1.0 - static_cast<double>(prec)) *
      lambda_over_beta;
  const double result_a = std::fabs(s.value) * lambda_over_beta;
  return max_term_a <= 1e-9 * result_a + 1e-300;
}

double finish(std::size_t n, const InnerSum& s, double lambda_over_beta) {
  const double signed_sum = (n % 2 == 0) ? -s.value : s.value;  // (-1)^{n+1}
  return lambda_over_beta * signed_sum;
}

}  // namespace

GeneratorMatrix::GeneratorMatrix(std::size_t N, const ProcessParams& params,
                                 std::vector<double> entries)
    : n_(N), params_(params), entries_(std::move(entries)) {
  if (entries_.size() != N * N) {
    throw ContractError("GeneratorMatrix: entry buffer does not match size");
  }
}

double GeneratorMatrix::column_sum(std::size_t k) const {
  detail_::NeumaierSum<long double> s;
  for (std::size_t n = 0; n < n_; ++n) s.add(at(n, k));
  return static_cast<double>(s.value());
}

std::vector<double> GeneratorMatrix::apply(const std::vector<double>& x) const {
  if (x.size() != n_) {
    throw ContractError("GeneratorMatrix::apply: dimension mismatch");
  }
  std::vector<double> y(n_, 0.0);
  for (std::size_t n = 0; n < n_; ++n) {
    detail_::NeumaierSum<long double> acc;
    const std::size_t k_lo = (n == 0) ? 0 : n - 1;
    for (std::size_t k = k_lo; k < n_; ++k) {
      acc.add(static_cast<long double>(at(n, k)) * x[k]);
    }
    y[n] = static_cast<double>(acc.value());
  }
  return y;
}

double coefficient(std::size_t n, std::size_t k, const ProcessParams& params) {
  params.validate();
  if (k + 1 < n) return 0.0;  // structural zero, no tolerance
  const double lob = params.lambda / params.beta;
  for (long prec = kPrecStart; prec <= kPrecCap; prec *= 2) {
    const auto ratios = ratio_cache(params.beta, k, prec);
    const InnerSum s = inner_sum(n, k, ratios, prec);
    if (monitor_ok(s, lob, prec)) return finish(n, s, lob);
  }
  throw PrecisionError("coefficient: cancellation beyond validity at (n, k) = (" +
                       std::to_string(n) + ", " + std::to_string(k) + ")");
}

GeneratorMatrix generator_matrix(std::size_t N, const ProcessParams& params) {
  params.validate();
  if (N < 2) throw DomainError("generator_matrix: truncation must be >= 2");
  std::vector<double> entries(N * N, 0.0);
  const double lob = params.lambda / params.beta;

  std::exception_ptr first_error;
  std::mutex error_mutex;

  const auto assemble_column = [&](std::size_t k) {
    const std::size_t n_hi = std::min(k + 1, N - 1);
    for (long prec = kPrecStart;; prec *= 2) {
      if (prec > kPrecCap) {
        throw PrecisionError(
            "generator_matrix: cancellation beyond validity in column " +
            std::to_string(k));
      }
      const auto ratios = ratio_cache(params.beta, k, prec);
      std::vector<double> column(n_hi + 1);
      bool ok = true;
      for (std::size_t n = 0; n <= n_hi; ++n) {
        const InnerSum s = inner_sum(n, k, ratios, prec);
        if (!monitor_ok(s, lob, prec)) {
          ok = false;
          break;
        }
        column[n] = finish(n, s, lob);
      }
      if (ok) {
        for (std::size_t n = 0; n <= n_hi; ++n) entries[n * N + k] = column[n];
        return;
      }
    }
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned workers =
      std::min<unsigned>(hw, static_cast<unsigned>(N));
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t k = w; k < N; k += workers) assemble_column(k);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);

  GeneratorMatrix gen(N, params, std::move(entries));
  for (std::size_t k = 0; gen.column_complete(k); ++k) {
    double col_max = 0.0;
    for (std::size_t n = 0; n <= k + 1; ++n) {
      col_max = std::max(col_max, std::fabs(gen.at(n, k)));
    }
    const double sum = gen.column_sum(k);
    if (std::fabs(sum) > 1e-9 * col_max) {
      throw PrecisionError("generator_matrix: conservation defect " +
                           std::to_string(sum) + " in complete column " +
                           std::to_string(k));
    }
  }
  return gen;
}

Trajectory evolve(const GeneratorMatrix& gen, double tau_end,
                  const std::vector<double>& grid, double step_tol) {
  if (!(tau_end > 0.0)) throw DomainError("evolve: tau_end must be > 0");
  if (!(step_tol > 0.0)) throw DomainError("evolve: step_tol must be > 0");
  if (grid.empty()) throw DomainError("evolve: output grid is empty");
  double prev = 0.0;
  for (double g : grid) {
    if (!(g > prev) || !(g <= tau_end)) {
      throw DomainError("evolve: grid must ascend within (0, tau_end]");
    }
    prev = g;
  }

  const std::size_t N = gen.size();
  Trajectory traj{gen.params(), {}, {}, {}};
  traj.tau_grid.push_back(0.0);
  traj.states.emplace_back(N, 0.0);
  traj.states.back()[0] = 1.0;
  traj.conservation_log.push_back(0.0);

  const auto rhs = [&gen, N](double, const std::vector<double>& y,
                             std::vector<double>& dydt) {
    for (std::size_t n = 0; n < N; ++n) {
      const std::size_t k_lo = (n == 0) ? 0 : n - 1;
      double acc = 0.0;
      for (std::size_t k = k_lo; k < N; ++k) acc += gen.at(n, k) * y[k];
      dydt[n] = acc;
    }
  };
  const auto observe = [&traj](double tau, const std::vector<double>& y) {
    detail_::NeumaierSum<long double> mass;
    for (double v : y) mass.add(v);
    const double defect = std::fabs(static_cast<double>(mass.value()) - 1.0);
    if (defect > 1e-6) {
      throw ConservationError("evolve: mass defect " + std::to_string(defect) +
                              " at tau = " + std::to_string(tau));
    }
    traj.tau_grid.push_back(tau);
    traj.states.push_back(y);
    traj.conservation_log.push_back(defect);
  };

  std::vector<double> y0(N, 0.0);
  y0[0] = 1.0;
  detail_::integrate_dopri5(rhs, 0.0, std::move(y0), grid, step_tol, observe);
  return traj;
}

double tau_of_t(double t, double beta) {
  if (!(beta > 0.0) || !(beta <= 1.0)) {
    throw DomainError("tau_of_t: beta must lie in (0, 1]");
  }
  if (!(t >= 0.0)) throw DomainError("tau_of_t: time must be >= 0");
  return std::pow(t, beta);
}

double t_of_tau(double tau, double beta) {
  if (!(beta > 0.0) || !(beta <= 1.0)) {
    throw DomainError("t_of_tau: beta must lie in (0, 1]");
  }
  if (!(tau >= 0.0)) throw DomainError("t_of_tau: time must be >= 0");
  return std::pow(tau, 1.0 / beta);
}

double proofstep_check(std::size_t n, double tau, const ProcessParams& params,
                       std::size_t max_terms) {
  params.validate();
  if (!(tau >= 0.0)) throw DomainError("proofstep_check: tau must be >= 0");
  const double beta = params.beta;
  const double lob = params.lambda / beta;
  const std::size_t j0 = (n == 0) ? 0 : n - 1;

  if (tau == 0.0) {
    // Only the j = 0 term of the phi route survives, i.e. rows n <= 1.
    const double phi_route =
        (j0 == 0) ? (n % 2 == 0 ? -1.0 : 1.0) * lob / specfun::gamma(beta)
                  : 0.0;
    const double ode_route = coefficient(n, 0, params);
    return std::fabs(phi_route - ode_route);
  }

  // Route (i): the phi-form intermediate sum
  //   (-1)^{n+1} (lambda/beta) sum_j C(j+1, n) x^j (-1)^j / Gamma(beta j + beta)
  const double x = params.lambda * tau;
  const long double log_x = logl(static_cast<long double>(x));
  const auto log_term = [&](int i) {
    const std::size_t j = j0 + static_cast<std::size_t>(i);
    const long double lc =
        detail_::log_gamma_ld(static_cast<long double>(j) + 2.0L) -
        detail_::log_gamma_ld(static_cast<long double>(n) + 1.0L) -
        detail_::log_gamma_ld(static_cast<long double>(j + 1 - n) + 1.0L);
    const long double lg =
        detail_::log_gamma_ld(static_cast<long double>(beta) * j + beta);
    detail_::LogTerm lt;
    lt.sign = ((n + 1 + j) % 2 == 0) ? 1 : -1;
    lt.log_mag = lc + j * log_x - lg;
    lt.log_scale = lc + fabsl(j * log_x) + fabsl(lg);
    return lt;
  };
  const auto big_term = [&](int i, detail_::BigFloat& out) {
    const std::size_t j = j0 + static_cast<std::size_t>(i);
    const long prec = out.precision();
    detail_::BigFloat g(prec), arg(prec), xs(prec), c(prec), b(prec);
    arg.set_d(beta);
    arg.mul_si(static_cast<long>(j));
    b.set_d(beta);
    arg.add(b);
    g.gamma_of(arg);
    xs.set_d(x);
    out.pow_ui(xs, static_cast<unsigned long>(j));
    c.set_binomial(static_cast<unsigned long>(j + 1),
                   static_cast<unsigned long>(n));
    out.mul(c);
    out.div(g);
    if ((n + 1 + j) % 2 != 0) out.neg();
  };
  const double phi_route =
      lob * detail_::sum_signed_series(log_term, big_term, 1e-12,
                                       static_cast<int>(max_terms),
                                       "proofstep_check")
                .value;

  // Route (ii): sum_k A[n][k] P(k, tau); P decays superexponentially past
  // its mode, so the sum is cut once entries stop mattering.
  const double t = t_of_tau(tau, beta);
  detail_::NeumaierSum<long double> acc;
  bool converged = false;
  for (std::size_t k = j0; k < j0 + max_terms; ++k) {
    const double p = analytic::pmf(k, t, params, 1e-14);
    acc.add(static_cast<long double>(coefficient(n, k, params)) * p);
    if (p < 1e-17 && static_cast<double>(k) > x + static_cast<double>(n) + 10.0) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw PrecisionError("proofstep_check: k-sum did not converge within " +
                         std::to_string(max_terms) + " terms");
  }
  const double ode_route = static_cast<double>(acc.value());
  return std::fabs(phi_route - ode_route);
}

}  // namespace fracpoisson::odegen
