#ifndef FRACPOISSON_PASCAL_HPP
#define FRACPOISSON_PASCAL_HPP

#include <cstdint>
#include <vector>

// Exact-arithmetic triangular binomial transforms: the upper-triangular
// Pascal matrix with entries C(k, n), its signed inverse (-1)^{n+k} C(k, n),
// and the alternating-sign vector convention that links the probability
// family to the phi family.
//
// The matrices are never stored: entries are generated on demand, and the
// upper-triangular structure makes every truncated transform exact for the
// truncated input (entry n depends only on inputs n..N-1).

namespace fracpoisson::pascal {

/// Distinguishes a vector stored with its natural signs from one stored in
/// the (-1)^n-alternating convention of the probability-side display.
enum class Signing { plain, alternating };

/// A finite vector with a signing tag. `values` always holds the stored
/// representation; `signing` records which convention produced it.
template <typename T>
struct SignedVector {
  std::vector<T> values;
  Signing signing = Signing::plain;
};

using ExactVector = SignedVector<__int128>;
using RealVector = SignedVector<double>;

/// Exact C(k, n); returns 0 for k < n. Throws OverflowError when the exact
/// value does not fit 128 bits (k <= 128 is always safe).
unsigned __int128 binomial_exact(unsigned k, unsigned n);

/// binomial_exact narrowed to uint64, throwing OverflowError on overflow.
std::uint64_t binomial_u64(unsigned k, unsigned n);

/// w_n = sum_{k>=n} C(k, n) v_k on the truncation, exactly in 128-bit
/// arithmetic. Throws OverflowError if any accumulation leaves the
/// representable range. The signing tag is toggled: a plain input produces
/// an alternating-convention image and vice versa.
ExactVector apply_pascal(const ExactVector& v);

/// w_n = sum_{k>=n} (-1)^{n+k} C(k, n) v_k, exact; the two transforms are
/// exact mutual inverses on any truncation.
ExactVector apply_inverse_pascal(const ExactVector& v);

/// Real-valued transforms for analytic data: exact integer binomials,
/// compensated extended-precision accumulation.
RealVector apply_pascal(const RealVector& v);
RealVector apply_inverse_pascal(const RealVector& v);

}  // namespace fracpoisson::pascal

#endif  // FRACPOISSON_PASCAL_HPP
