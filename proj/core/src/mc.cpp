#include "fracpoisson/mc.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "fracpoisson/detail/compensated.hpp"
#include "fracpoisson/detail/gamma_ld.hpp"
#include "fracpoisson/detail/quadrature.hpp"
#include "fracpoisson/detail/stats.hpp"
#include "fracpoisson/errors.hpp"
#include "fracpoisson/specfun.hpp"

namespace fracpoisson::mc {

namespace detail_ = fracpoisson::detail;

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kProbTol = 1e-10;     // inversion tolerance in probability
constexpr double kTailTarget = 1e-9;   // tabulation reaches survival below this
// Past this argument the alternating series needs escalated precision; the
// integral representation is cheaper and uniformly accurate there.
constexpr double kSeriesSpectralSwitch = 2.5;

// E_beta(-x) through the completely monotone spectral representation
//   E_beta(-x) = sin(beta pi)/(beta pi x) *
//                int_0^inf e^{-v^{1/beta}} / ((v/x)^2 + 2 (v/x) cos(beta pi) + 1) dv
// valid for 0 < beta < 1 and any x > 0; the workhorse for the power-law far
// tail that no series truncation can reach.
double ml_spectral_neg(double beta, double x) {
  const double cosb = std::cos(beta * kPi);
  const double sinb = std::sin(beta * kPi);
  const auto integrand = [&](double v) {
    const double r = v / x;
    return std::exp(-std::pow(v, 1.0 / beta)) /
           (r * r + 2.0 * r * cosb + 1.0);
  };
  const double v_end = std::pow(46.0, beta);  // exp factor < 1e-20 beyond
  std::vector<double> breaks;
  if (cosb < 0.0) {
    // Denominator dip at v = -x cos(beta pi), width ~ x sin(beta pi).
    const double v0 = -x * cosb;
    const double w = std::max(x * sinb, 1e-12 * v0);
    for (double p : {v0 - w, v0, v0 + w}) {
      if (p > 0.0 && p < v_end) breaks.push_back(p);
    }
  }
  const double pref = sinb / (beta * kPi * x);
  const double tol_i =
      std::clamp(0.5e-11 / std::max(pref, 1e-300), 1e-13, 1e-8);
  const auto q =
      detail_::integrate_adaptive(integrand, 0.0, v_end, tol_i, 4000, breaks);
  if (!q.converged) {
    throw PrecisionError("ml_spectral_neg: quadrature did not converge",
                         q.error_estimate * pref);
  }
  return pref * q.value;
}

// Per-(beta, lambda) tabulation of the survival function plus the live
// evaluators the quantile refinement uses.
class SurvivalTable {
 public:
  explicit SurvivalTable(const ProcessParams& params) : params_(params) {
    const double beta = params_.beta;
    // Cache ln Gamma(beta m + 1) for the series hot path.
    lgam_.resize(kMaxCachedTerms);
    for (std::size_t m = 0; m < kMaxCachedTerms; ++m) {
      lgam_[m] = detail_::log_gamma_ld(static_cast<long double>(beta) * m + 1.0L);
    }
    // Upper end: expand until the survival drops below the tail target.
    double t_hi;
    if (beta < 1.0) {
      t_hi = std::pow(1.0 / (specfun::gamma(1.0 - beta) * kTailTarget) /
                          params_.lambda,
                      1.0 / beta);
    } else {
      t_hi = std::log(1.0 / kTailTarget) / params_.lambda;
    }
    for (int i = 0; i < 200 && survival(t_hi) > kTailTarget; ++i) t_hi *= 2.0;
    const double t_lo = std::min(1e-8, t_hi * 1e-10);
    const std::size_t n = 1200;
    t_.resize(n);
    s_.resize(n);
    const double step = std::log(t_hi / t_lo) / static_cast<double>(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
      t_[i] = t_lo * std::exp(step * static_cast<double>(i));
      s_[i] = survival(t_[i]);
      if (i > 0 && s_[i] >= s_[i - 1]) {
        s_[i] = std::nextafter(s_[i - 1], 0.0);  // keep strictly decreasing
      }
    }
    build_inverse_interpolant();
  }

  double survival(double t) const {
    if (t <= 0.0) return 1.0;
    const double x = params_.lambda * std::pow(t, params_.beta);
    if (x == 0.0) return 1.0;
    if (params_.beta < 1.0 && x > kSeriesSpectralSwitch) {
      const double asym = ml_asymptotic_neg(x);
      if (asym >= 0.0) return asym;
      return ml_spectral_neg(params_.beta, x);
    }
    return series_fast(x);
  }

  double quantile(double u) const {
    if (!(u > 0.0) || !(u < 1.0)) {
      throw DomainError("waiting_time_quantile: u must lie in (0, 1)");
    }
    const double target = 1.0 - u;  // survival level to hit
    double lo, hi;                  // survival(lo) >= target >= survival(hi)
    double g_lo, g_hi;
    double guess = 0.0;
    if (target >= s_.front()) {
      hi = t_.front();
      lo = hi / 16.0;
      while (survival(lo) < target) {
        lo /= 16.0;
        if (lo < 1e-300) return 0.0;  // u below double resolution of the CDF
      }
      g_lo = survival(lo) - target;
      g_hi = s_.front() - target;
    } else if (target <= s_.back()) {
      lo = t_.back();
      hi = lo * 4.0;
      int guard = 0;
      while (survival(hi) > target) {
        lo = hi;
        hi *= 4.0;
        if (++guard > 600) {
          throw PrecisionError(
              "waiting_time_quantile: bracketing failed in the far tail");
        }
      }
      g_lo = survival(lo) - target;
      g_hi = survival(hi) - target;
    } else {
      const auto it = std::lower_bound(s_.begin(), s_.end(), target,
                                       [](double s, double v) { return s > v; });
      const std::size_t idx = static_cast<std::size_t>(it - s_.begin());
      lo = t_[idx - 1];
      hi = t_[idx];
      guess = inverse_guess(idx - 1, target);
      // The tabulated values bracket the target by construction; no live
      // evaluations needed to seed the safeguard.
      g_lo = s_[idx - 1] - target;
      g_hi = s_[idx] - target;
    }
    if (std::fabs(g_lo) <= kProbTol) return lo;
    if (std::fabs(g_hi) <= kProbTol) return hi;

    // Secant in (ln t, survival), safeguarded by the bracket and seeded by
    // the monotone-cubic inverse interpolant when available.
    for (int iter = 0; iter < 200; ++iter) {
      const double llo = std::log(lo), lhi = std::log(hi);
      double lmid;
      if (iter == 0 && guess > lo && guess < hi) {
        lmid = std::log(guess);
      } else {
        lmid = llo + (lhi - llo) * (g_lo / (g_lo - g_hi));
        if (!(lmid > llo) || !(lmid < lhi)) lmid = 0.5 * (llo + lhi);
      }
      const double mid = std::exp(lmid);
      const double g_mid = survival(mid) - target;
      if (std::fabs(g_mid) <= kProbTol) return mid;
      if (g_mid > 0.0) {
        lo = mid;
        g_lo = g_mid;
      } else {
        hi = mid;
        g_hi = g_mid;
      }
      if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * hi) {
        return 0.5 * (lo + hi);  // CDF jump at double resolution
      }
    }
    throw PrecisionError(
        "waiting_time_quantile: refinement did not reach the probability "
        "tolerance");
  }

 private:
  static constexpr std::size_t kMaxCachedTerms = 4096;

  // Series sum with the cached ln Gamma values; certifiable for moderate x,
  // deferring to the escalating evaluator otherwise.
  double series_fast(double x) const {
    static constexpr long double kEps = 5.42101086242752217e-20L;  // 2^-64
    const long double log_x = logl(static_cast<long double>(x));
    detail_::NeumaierSum<long double> sum;
    long double sum_abs = 0.0L;
    long double prev = std::numeric_limits<long double>::infinity();
    for (std::size_t m = 0; m < kMaxCachedTerms; ++m) {
      const long double lmag = m * log_x - lgam_[m];
      const long double mag = expl(lmag);
      sum.add((m % 2 == 0) ? mag : -mag);
      sum_abs += mag;
      if (mag < prev && mag < 1e-24L * (sum_abs + 1.0L)) {
        const long double err =
            sum_abs * (fabsl(lmag) + 64.0L) * 4.0L * kEps;
        if (err <= 1e-12L) {
          return static_cast<double>(sum.value());
        }
        break;
      }
      prev = mag;
    }
    return specfun::mittag_leffler(params_.beta, -x);
  }

  // Divergent large-argument expansion
  //   E_beta(-x) ~ sum_{k>=1} (-1)^{k+1} x^{-k} sin(pi beta k) Gamma(beta k) / pi,
  // truncated at its smallest term; usable once that term certifies 1e-11.
  // Returns -1 when it does not certify (caller falls back to quadrature).
  double ml_asymptotic_neg(double x) const {
    const double beta = params_.beta;
    const long double log_x = logl(static_cast<long double>(x));
    detail_::NeumaierSum<long double> sum;
    long double prev_mag = std::numeric_limits<long double>::infinity();
    for (int k = 1; k <= 400; ++k) {
      const long double bk = static_cast<long double>(beta) * k;
      const long double mag =
          expl(detail_::log_gamma_ld(bk) - k * log_x) / 3.14159265358979323846L;
      if (mag >= prev_mag) {  // past the optimal truncation point
        return (mag <= 5e-12L) ? static_cast<double>(sum.value()) : -1.0;
      }
      const long double term =
          mag * sinl(3.14159265358979323846L * bk);
      sum.add((k % 2 == 1) ? term : -term);
      if (mag <= 1e-16L) return static_cast<double>(sum.value());
      prev_mag = mag;
    }
    return -1.0;
  }

  // Monotone cubic (Fritsch-Carlson) interpolant of ln t against -ln s,
  // used to seed the quantile refinement.
  void build_inverse_interpolant() {
    const std::size_t n = t_.size();
    ys_.resize(n);
    zs_.resize(n);
    slope_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
      ys_[i] = -std::log(s_[i]);
      zs_[i] = std::log(t_[i]);
    }
    std::vector<double> h(n - 1), delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = ys_[i + 1] - ys_[i];
      delta[i] = (zs_[i + 1] - zs_[i]) / h[i];
    }
    slope_[0] = delta[0];
    slope_[n - 1] = delta[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (delta[i - 1] * delta[i] <= 0.0) {
        slope_[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
      }
    }
  }

  // t-guess for a survival target inside table cell [idx, idx+1].
  double inverse_guess(std::size_t idx, double target) const {
    const double y = -std::log(target);
    const double h = ys_[idx + 1] - ys_[idx];
    const double th = (y - ys_[idx]) / h;
    const double h00 = (1.0 + 2.0 * th) * (1.0 - th) * (1.0 - th);
    const double h10 = th * (1.0 - th) * (1.0 - th);
    const double h01 = th * th * (3.0 - 2.0 * th);
    const double h11 = th * th * (th - 1.0);
    const double z = h00 * zs_[idx] + h * h10 * slope_[idx] +
                     h01 * zs_[idx + 1] + h * h11 * slope_[idx + 1];
    return std::exp(z);
  }

  ProcessParams params_;
  std::vector<double> t_, s_;
  std::vector<double> ys_, zs_, slope_;
  std::vector<long double> lgam_;
};

const SurvivalTable& table_for(const ProcessParams& params) {
  params.validate();
  static std::mutex mutex;
  static std::map<std::pair<double, double>, std::unique_ptr<SurvivalTable>>
      cache;
  const auto key = std::make_pair(params.beta, params.lambda);
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) {
    it = cache.emplace(key, std::make_unique<SurvivalTable>(params)).first;
  }
  return *it->second;
}

// Deterministic parallel map over indices 0..n-1.
template <typename Fn>
void parallel_indices(std::size_t n, unsigned threads, const Fn& body) {
  unsigned workers = threads == 0 ? std::thread::hardware_concurrency() : threads;
  if (workers == 0) workers = 1;
  workers = std::min<std::size_t>(workers, std::max<std::size_t>(n, 1));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t chunk = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t lo = w * chunk;
    const std::size_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t i = lo; i < hi; ++i) body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

std::size_t SamplePath::count_at(double t) const {
  return static_cast<std::size_t>(
      std::upper_bound(arrival_times.begin(), arrival_times.end(), t) -
      arrival_times.begin());
}

double waiting_time_survival(const ProcessParams& params, double t) {
  if (!(t >= 0.0)) throw DomainError("waiting_time_survival: t must be >= 0");
  return table_for(params).survival(t);
}

double waiting_time_quantile(const ProcessParams& params, double u) {
  return table_for(params).quantile(u);
}

double sample_waiting_time(RngState& rng, const ProcessParams& params) {
  return table_for(params).quantile(rng.uniform_open());
}

SamplePath simulate_path(RngState& rng, const ProcessParams& params,
                         double t_end) {
  if (!(t_end > 0.0)) throw DomainError("simulate_path: t_end must be > 0");
  const SurvivalTable& table = table_for(params);
  SamplePath path;
  path.horizon = t_end;
  double clock = 0.0;
  std::size_t draws = 0;
  for (;;) {
    if (++draws > 1'000'000'000) {
      throw RunawayError("simulate_path: more than 1e9 draws before the horizon");
    }
    clock += table.quantile(rng.uniform_open());
    if (clock > t_end) break;
    path.arrival_times.push_back(clock);
  }
  return path;
}

std::vector<SamplePath> simulate_ensemble(const ProcessParams& params,
                                          double t_end, std::size_t n_paths,
                                          std::uint64_t seed,
                                          unsigned threads) {
  table_for(params);  // build the shared cache before fanning out
  std::vector<SamplePath> paths(n_paths);
  parallel_indices(n_paths, threads, [&](std::size_t i) {
    RngState rng(seed, i);
    paths[i] = simulate_path(rng, params, t_end);
  });
  return paths;
}

std::vector<double> sample_waiting_times(const ProcessParams& params,
                                         std::size_t n, std::uint64_t seed,
                                         unsigned threads) {
  table_for(params);
  std::vector<double> draws(n);
  parallel_indices(n, threads, [&](std::size_t i) {
    RngState rng(seed, i);
    draws[i] = sample_waiting_time(rng, params);
  });
  return draws;
}

EmpiricalPmf empirical_pmf(const std::vector<SamplePath>& paths, double t) {
  EmpiricalPmf emp;
  emp.time = t;
  emp.total_paths = paths.size();
  for (const auto& path : paths) {
    if (t > path.horizon) {
      throw DomainError("empirical_pmf: observation time beyond a path horizon");
    }
    const std::size_t n = path.count_at(t);
    if (n >= emp.counts.size()) emp.counts.resize(n + 1, 0);
    ++emp.counts[n];
  }
  if (emp.counts.empty()) emp.counts.resize(1, 0);
  return emp;
}

GofResult chi_square_gof(const EmpiricalPmf& emp,
                         const analytic::ProbVector& model) {
  if (emp.total_paths == 0) {
    throw ContractError("chi_square_gof: empty ensemble");
  }
  const double m = static_cast<double>(emp.total_paths);
  // Certified-normalized model probabilities, tail mass explicit.
  double norm = model.tail_bound;
  for (double p : model.values) norm += p;
  std::vector<double> probs = model.values;
  for (double& p : probs) p /= norm;
  const double p_tail = model.tail_bound / norm;

  const auto observed = [&](std::size_t n) -> double {
    return n < emp.counts.size() ? static_cast<double>(emp.counts[n]) : 0.0;
  };

  std::vector<double> bin_obs, bin_exp;
  double acc_obs = 0.0, acc_exp = 0.0;
  for (std::size_t n = 0; n < probs.size(); ++n) {
    acc_obs += observed(n);
    acc_exp += probs[n] * m;
    if (acc_exp >= 5.0) {
      bin_obs.push_back(acc_obs);
      bin_exp.push_back(acc_exp);
      acc_obs = acc_exp = 0.0;
    }
  }
  // Tail bin: everything at or beyond the truncation plus leftovers.
  double tail_obs = acc_obs, tail_exp = acc_exp + p_tail * m;
  for (std::size_t n = probs.size(); n < emp.counts.size(); ++n) {
    tail_obs += static_cast<double>(emp.counts[n]);
  }
  if (!bin_obs.empty() && tail_exp < 5.0) {
    bin_obs.back() += tail_obs;
    bin_exp.back() += tail_exp;
  } else {
    bin_obs.push_back(tail_obs);
    bin_exp.push_back(tail_exp);
  }
  if (bin_obs.size() < 2) {
    throw ContractError("chi_square_gof: degenerate binning (dof < 1)");
  }
  double stat = 0.0;
  for (std::size_t i = 0; i < bin_obs.size(); ++i) {
    const double d = bin_obs[i] - bin_exp[i];
    stat += d * d / bin_exp[i];
  }
  GofResult res;
  res.statistic = stat;
  res.dof = bin_obs.size() - 1;
  res.p_value = detail_::chi_square_sf(stat, res.dof);
  return res;
}

double ks_statistic_waiting_times(std::vector<double> draws,
                                  const ProcessParams& params) {
  if (draws.empty()) throw ContractError("ks_statistic_waiting_times: no draws");
  std::sort(draws.begin(), draws.end());
  const SurvivalTable& table = table_for(params);
  const double n = static_cast<double>(draws.size());
  double d = 0.0;
  for (std::size_t i = 0; i < draws.size(); ++i) {
    const double f = 1.0 - table.survival(draws[i]);
    const double lo = static_cast<double>(i) / n;
    const double hi = static_cast<double>(i + 1) / n;
    d = std::max(d, std::max(hi - f, f - lo));
  }
  return d;
}

double ks_critical_value(std::size_t n, double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw DomainError("ks_critical_value: alpha must lie in (0, 1)");
  }
  double lo = 0.2, hi = 4.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (detail_::kolmogorov_sf(mid) > alpha) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi) / std::sqrt(static_cast<double>(n));
}

double ks_pvalue(double d, std::size_t n) {
  return detail_::kolmogorov_sf(d * std::sqrt(static_cast<double>(n)));
}

}  // namespace fracpoisson::mc
