#ifndef FRACPOISSON_DETAIL_BIGFLOAT_HPP
#define FRACPOISSON_DETAIL_BIGFLOAT_HPP

#include <gmp.h>
#include <mpfr.h>

#include <cstdint>
#include <utility>

// Thin RAII wrapper over mpfr_t with just the operations the adaptive
// precision summation layer needs. Rounding is always to nearest.

namespace fracpoisson::detail {

// MPFR caches constants per thread; freeing them at thread exit keeps
// long-running processes and leak checkers clean.
struct MpfrCacheGuard {
  ~MpfrCacheGuard() { mpfr_free_cache(); }
};
inline thread_local MpfrCacheGuard mpfr_cache_guard;

class BigFloat {
 public:
  explicit BigFloat(mpfr_prec_t prec) {
    (void)&mpfr_cache_guard;
    mpfr_init2(v_, prec);
    mpfr_set_zero(v_, 1);
  }
  BigFloat(const BigFloat& o) {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_set(v_, o.v_, MPFR_RNDN);
  }
  BigFloat(BigFloat&& o) noexcept {
    mpfr_init2(v_, mpfr_get_prec(o.v_));
    mpfr_swap(v_, o.v_);
  }
  BigFloat& operator=(const BigFloat& o) {
    if (this != &o) mpfr_set(v_, o.v_, MPFR_RNDN);
    return *this;
  }
  BigFloat& operator=(BigFloat&& o) noexcept {
    mpfr_swap(v_, o.v_);
    return *this;
  }
  ~BigFloat() { mpfr_clear(v_); }

  mpfr_prec_t precision() const { return mpfr_get_prec(v_); }

  void set_zero() { mpfr_set_zero(v_, 1); }
  void set_d(double x) { mpfr_set_d(v_, x, MPFR_RNDN); }
  void set_ld(long double x) { mpfr_set_ld(v_, x, MPFR_RNDN); }
  void set_si(long x) { mpfr_set_si(v_, x, MPFR_RNDN); }

  // Exact for any unsigned 128-bit integer as long as precision >= 128.
  void set_u128(unsigned __int128 x) {
    const auto hi = static_cast<std::uint64_t>(x >> 64);
    const auto lo = static_cast<std::uint64_t>(x);
    mpfr_set_uj(v_, hi, MPFR_RNDN);
    mpfr_mul_2ui(v_, v_, 64, MPFR_RNDN);
    BigFloat low(precision());
    mpfr_set_uj(low.v_, lo, MPFR_RNDN);
    mpfr_add(v_, v_, low.v_, MPFR_RNDN);
  }

  /// v = C(n, k), computed exactly in integers and then rounded once.
  void set_binomial(unsigned long n, unsigned long k) {
    if (k > n) {
      set_zero();
      return;
    }
    mpz_t b;
    mpz_init(b);
    mpz_bin_uiui(b, n, k);
    mpfr_set_z(v_, b, MPFR_RNDN);
    mpz_clear(b);
  }

  void add(const BigFloat& a) { mpfr_add(v_, v_, a.v_, MPFR_RNDN); }
  void sub(const BigFloat& a) { mpfr_sub(v_, v_, a.v_, MPFR_RNDN); }
  void mul(const BigFloat& a) { mpfr_mul(v_, v_, a.v_, MPFR_RNDN); }
  void div(const BigFloat& a) { mpfr_div(v_, v_, a.v_, MPFR_RNDN); }
  void mul_si(long a) { mpfr_mul_si(v_, v_, a, MPFR_RNDN); }
  void neg() { mpfr_neg(v_, v_, MPFR_RNDN); }

  /// v = Gamma(x)
  void gamma_of(const BigFloat& x) { mpfr_gamma(v_, x.v_, MPFR_RNDN); }
  /// v = a^e
  void pow_ui(const BigFloat& a, unsigned long e) {
    mpfr_pow_ui(v_, a.v_, e, MPFR_RNDN);
  }

  void abs_of(const BigFloat& a) { mpfr_abs(v_, a.v_, MPFR_RNDN); }
  bool abs_greater(const BigFloat& other) const {
    return mpfr_cmpabs(v_, other.v_) > 0;
  }
  bool is_zero() const { return mpfr_zero_p(v_) != 0; }

  double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
  long double to_long_double() const { return mpfr_get_ld(v_, MPFR_RNDN); }
  /// log2(|v|) as a cheap magnitude probe; very negative for v == 0.
  double log2_abs() const {
    if (mpfr_zero_p(v_)) return -1e9;
    mpfr_exp_t e;
    (void)mpfr_get_d_2exp(&e, v_, MPFR_RNDN);
    return static_cast<double>(e);
  }

  mpfr_ptr raw() { return v_; }
  mpfr_srcptr raw() const { return v_; }

 private:
  mpfr_t v_;
};

}  // namespace fracpoisson::detail

#endif  // FRACPOISSON_DETAIL_BIGFLOAT_HPP
