#ifndef FRACPOISSON_DETAIL_GAMMA_LD_HPP
#define FRACPOISSON_DETAIL_GAMMA_LD_HPP

#include <cmath>

// Extended-precision ln Gamma on the positive axis. Stirling's series with
// Bernoulli coefficients (A&S 6.1.41) above x = 13, downward recurrence
// below. Good to a few units of 2^-64 relative for the argument range this
// library uses (x <= ~5000).

namespace fracpoisson::detail {

inline long double log_gamma_ld(long double x) {
  static constexpr long double kHalfLog2Pi =
      0.918938533204672741780329736405617639862L;
  static constexpr long double kStirling[] = {
      1.0L / 12.0L,           -1.0L / 360.0L,
      1.0L / 1260.0L,         -1.0L / 1680.0L,
      1.0L / 1188.0L,         -691.0L / 360360.0L,
      1.0L / 156.0L,          -3617.0L / 122400.0L,
      43867.0L / 244188.0L,   -174611.0L / 125400.0L,
  };
  long double shift = 0.0L;
  while (x < 13.0L) {
    shift -= logl(x);
    x += 1.0L;
  }
  const long double z = 1.0L / (x * x);
  long double series = kStirling[9];
  for (int i = 8; i >= 0; --i) series = series * z + kStirling[i];
  return shift + (x - 0.5L) * logl(x) - x + kHalfLog2Pi + series / x;
}

}  // namespace fracpoisson::detail

#endif  // FRACPOISSON_DETAIL_GAMMA_LD_HPP
