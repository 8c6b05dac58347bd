#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdint>
#include <vector>

#include "fracpoisson/detail/compensated.hpp"
#include "fracpoisson/detail/gamma_ld.hpp"
#include "fracpoisson/detail/ode.hpp"
#include "fracpoisson/detail/quadrature.hpp"
#include "fracpoisson/detail/rng.hpp"
#include "fracpoisson/detail/stats.hpp"
#include "fracpoisson/errors.hpp"

using namespace fracpoisson;

TEST_CASE("adaptive quadrature on smooth and weakly singular integrands") {
  const auto sine = detail::integrate_adaptive(
      [](double x) { return std::sin(x); }, 0.0, 3.14159265358979323846,
      1e-13);
  CHECK(sine.converged);
  CHECK(sine.value == doctest::Approx(2.0).epsilon(1e-13));

  const auto gauss = detail::integrate_adaptive(
      [](double x) { return std::exp(-x * x); }, 0.0, 6.0, 1e-13);
  CHECK(gauss.value ==
        doctest::Approx(0.88622692545275801).epsilon(1e-12));  // sqrt(pi)/2

  // ln x is integrable at 0; the rule is open, so adaptivity digs in.
  const auto logint = detail::integrate_adaptive(
      [](double x) { return std::log(x); }, 0.0, 1.0, 1e-11);
  CHECK(logint.converged);
  CHECK(logint.value == doctest::Approx(-1.0).epsilon(1e-9));

  const auto split = detail::integrate_adaptive(
      [](double x) { return std::fabs(x - 0.3); }, 0.0, 1.0, 1e-13, 4000,
      {0.3});
  CHECK(split.value == doctest::Approx(0.29).epsilon(1e-13));
}

TEST_CASE("regularized incomplete gamma and chi-square survival") {
  // Q(1, x) = e^{-x}
  CHECK(detail::gamma_q(1.0, 2.0) ==
        doctest::Approx(std::exp(-2.0)).epsilon(1e-13));
  // Reference values computed at 50 digits.
  CHECK(detail::chi_square_sf(10.0, 7) ==
        doctest::Approx(0.18857346751345007).epsilon(1e-10));
  CHECK(detail::chi_square_sf(3.2, 4) ==
        doctest::Approx(0.52493094678610406).epsilon(1e-10));
  CHECK(detail::chi_square_sf(0.0, 3) == 1.0);
  CHECK_THROWS_AS(detail::chi_square_sf(1.0, 0), DomainError);
  CHECK_THROWS_AS(detail::gamma_q(-1.0, 1.0), DomainError);
}

TEST_CASE("Kolmogorov survival function") {
  // Q at the alpha = 0.01 critical point.
  CHECK(detail::kolmogorov_sf(1.6276236115189503) ==
        doctest::Approx(0.01).epsilon(1e-6));
  CHECK(detail::kolmogorov_sf(10.0) <= 1e-80);
  CHECK(detail::kolmogorov_sf(0.0) == 1.0);
  // Monotone decreasing.
  double prev = 1.0;
  for (double x = 0.3; x < 2.5; x += 0.1) {
    const double q = detail::kolmogorov_sf(x);
    CHECK(q <= prev);
    prev = q;
  }
}

TEST_CASE("splittable streams: reproducible, distinct, uniform-ish") {
  detail::Xoshiro256pp a(42, 7), b(42, 7), c(42, 8);
  for (int i = 0; i < 1000; ++i) {
    const auto va = a.next();
    CHECK(va == b.next());
  }
  bool any_diff = false;
  detail::Xoshiro256pp a2(42, 7);
  for (int i = 0; i < 64; ++i) any_diff |= (a2.next() != c.next());
  CHECK(any_diff);

  detail::Xoshiro256pp u(1, 0);
  double mean = 0.0;
  for (int i = 0; i < 200000; ++i) {
    const double x = u.uniform_open();
    CHECK(x > 0.0);
    CHECK(x < 1.0);
    mean += x;
  }
  mean /= 200000.0;
  CHECK(std::fabs(mean - 0.5) < 0.003);  // ~4.6 sigma band
}

TEST_CASE("compensated accumulation survives magnitude swings") {
  detail::NeumaierSum<double> s;
  s.add(1e100);
  s.add(1.0);
  s.add(-1e100);
  CHECK(s.value() == 1.0);
}

TEST_CASE("adaptive stepper: accuracy and local-error control") {
  // Linear decay with a known solution.
  const auto rhs = [](double, const std::vector<double>& y,
                      std::vector<double>& dydt) { dydt[0] = -y[0]; };
  std::vector<double> seen;
  detail::integrate_dopri5(rhs, 0.0, {1.0}, {0.5, 1.0, 2.0}, 1e-11,
                           [&](double, const std::vector<double>& y) {
                             seen.push_back(y[0]);
                           });
  REQUIRE(seen.size() == 3);
  CHECK(seen[0] == doctest::Approx(std::exp(-0.5)).epsilon(1e-10));
  CHECK(seen[2] == doctest::Approx(std::exp(-2.0)).epsilon(1e-10));
}

TEST_CASE("adaptive stepper: finite-time blowup triggers the step guard") {
  // dy/dt = y^2 from y(0) = 1 leaves every tolerance behind at t = 1.
  const auto rhs = [](double, const std::vector<double>& y,
                      std::vector<double>& dydt) { dydt[0] = y[0] * y[0]; };
  bool threw = false;
  try {
    detail::integrate_dopri5(rhs, 0.0, {1.0}, {1.5}, 1e-10,
                             [](double, const std::vector<double>&) {});
  } catch (const IntegrationError& e) {
    threw = true;
    CHECK(e.tau_reached() <= 1.0 + 1e-6);
  }
  CHECK(threw);
}

TEST_CASE("extended-precision log-gamma against the double route") {
  for (double x : {0.1, 0.5, 1.0, 2.5, 12.9, 13.1, 50.0, 171.0, 800.0}) {
    const long double lg = detail::log_gamma_ld(static_cast<long double>(x));
    CHECK(std::fabs(static_cast<double>(lg) - std::lgamma(x)) <=
          1e-13 * std::max(1.0, std::fabs(std::lgamma(x))));
  }
}
