#include "fracpoisson/pascal.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "fracpoisson/detail/compensated.hpp"
#include "fracpoisson/detail/gamma_ld.hpp"
#include "fracpoisson/errors.hpp"

namespace fracpoisson::pascal {

namespace {

constexpr unsigned __int128 kMaxU128 = ~static_cast<unsigned __int128>(0);
constexpr __int128 kMaxS128 =
    static_cast<__int128>((kMaxU128 >> 1));

[[noreturn]] void overflow(unsigned k, unsigned n) {
  throw OverflowError("binomial_exact: C(" + std::to_string(k) + ", " +
                      std::to_string(n) + ") exceeds 128-bit range");
}

Signing toggled(Signing s) {
  return s == Signing::plain ? Signing::alternating : Signing::plain;
}

long double binomial_ld(unsigned k, unsigned n) {
  if (k < n) return 0.0L;
  if (k <= 128) return static_cast<long double>(binomial_exact(k, n));
  return expl(fracpoisson::detail::log_gamma_ld(k + 1.0L) -
              fracpoisson::detail::log_gamma_ld(n + 1.0L) -
              fracpoisson::detail::log_gamma_ld(k - n + 1.0L));
}

}  // namespace

unsigned __int128 binomial_exact(unsigned k, unsigned n) {
  if (k < n) return 0;
  const unsigned r = (k - n < n) ? k - n : n;
  unsigned __int128 result = 1;
  for (unsigned i = 1; i <= r; ++i) {
    const unsigned __int128 factor = k - r + i;
    if (result > kMaxU128 / factor) overflow(k, n);
    result = result * factor / i;  // exact: equals C(k-r+i, i)
  }
  return result;
}

std::uint64_t binomial_u64(unsigned k, unsigned n) {
  const unsigned __int128 b = binomial_exact(k, n);
  if (b > std::numeric_limits<std::uint64_t>::max()) overflow(k, n);
  return static_cast<std::uint64_t>(b);
}

ExactVector apply_pascal(const ExactVector& v) {
  const std::size_t size = v.values.size();
  ExactVector out;
  out.signing = toggled(v.signing);
  out.values.resize(size);
  for (std::size_t n = 0; n < size; ++n) {
    __int128 acc = 0;
    for (std::size_t k = n; k < size; ++k) {
      const unsigned __int128 c =
          binomial_exact(static_cast<unsigned>(k), static_cast<unsigned>(n));
      const __int128 x = v.values[k];
      if (x != 0 && c != 0) {
        const unsigned __int128 mag = (x < 0) ? static_cast<unsigned __int128>(-x)
                                              : static_cast<unsigned __int128>(x);
        if (c > static_cast<unsigned __int128>(kMaxS128) / mag) {
          throw OverflowError("apply_pascal: 128-bit overflow at entry " +
                              std::to_string(n));
        }
        __int128 term = static_cast<__int128>(c * mag);
        if (x < 0) term = -term;
        __int128 next;
        if (__builtin_add_overflow(acc, term, &next)) {
          throw OverflowError("apply_pascal: 128-bit overflow at entry " +
                              std::to_string(n));
        }
        acc = next;
      }
    }
    out.values[n] = acc;
  }
  return out;
}

ExactVector apply_inverse_pascal(const ExactVector& v) {
  const std::size_t size = v.values.size();
  ExactVector out;
  out.signing = toggled(v.signing);
  out.values.resize(size);
  for (std::size_t n = 0; n < size; ++n) {
    __int128 acc = 0;
    for (std::size_t k = n; k < size; ++k) {
      const unsigned __int128 c =
          binomial_exact(static_cast<unsigned>(k), static_cast<unsigned>(n));
      const __int128 x = v.values[k];
      if (x != 0 && c != 0) {
        const unsigned __int128 mag = (x < 0) ? static_cast<unsigned __int128>(-x)
                                              : static_cast<unsigned __int128>(x);
        if (c > static_cast<unsigned __int128>(kMaxS128) / mag) {
          throw OverflowError("apply_inverse_pascal: 128-bit overflow at entry " +
                              std::to_string(n));
        }
        __int128 term = static_cast<__int128>(c * mag);
        if (x < 0) term = -term;
        if ((n + k) % 2 != 0) term = -term;
        __int128 next;
        if (__builtin_add_overflow(acc, term, &next)) {
          throw OverflowError("apply_inverse_pascal: 128-bit overflow at entry " +
                              std::to_string(n));
        }
        acc = next;
      }
    }
    out.values[n] = acc;
  }
  return out;
}

RealVector apply_pascal(const RealVector& v) {
  const std::size_t size = v.values.size();
  RealVector out;
  out.signing = toggled(v.signing);
  out.values.resize(size);
  for (std::size_t n = 0; n < size; ++n) {
    fracpoisson::detail::NeumaierSum<long double> acc;
    for (std::size_t k = n; k < size; ++k) {
      acc.add(binomial_ld(static_cast<unsigned>(k), static_cast<unsigned>(n)) *
              static_cast<long double>(v.values[k]));
    }
    out.values[n] = static_cast<double>(acc.value());
  }
  return out;
}

RealVector apply_inverse_pascal(const RealVector& v) {
  const std::size_t size = v.values.size();
  RealVector out;
  out.signing = toggled(v.signing);
  out.values.resize(size);
  for (std::size_t n = 0; n < size; ++n) {
    fracpoisson::detail::NeumaierSum<long double> acc;
    for (std::size_t k = n; k < size; ++k) {
      long double term =
          binomial_ld(static_cast<unsigned>(k), static_cast<unsigned>(n)) *
          static_cast<long double>(v.values[k]);
      if ((n + k) % 2 != 0) term = -term;
      acc.add(term);
    }
    out.values[n] = static_cast<double>(acc.value());
  }
  return out;
}

}  // namespace fracpoisson::pascal
