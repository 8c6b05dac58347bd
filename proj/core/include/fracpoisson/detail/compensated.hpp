#ifndef FRACPOISSON_DETAIL_COMPENSATED_HPP
#define FRACPOISSON_DETAIL_COMPENSATED_HPP

#include <cmath>

namespace fracpoisson::detail {

/// Neumaier (improved Kahan) compensated accumulator. The running
/// compensation also captures the case |addend| > |sum|, so the final
/// value is the correctly rounded sum up to one extra rounding.
template <typename T>
class NeumaierSum {
 public:
  void add(T x) {
    T t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  T value() const { return sum_ + comp_; }

 private:
  T sum_ = 0;
  T comp_ = 0;
};

}  // namespace fracpoisson::detail

#endif  // FRACPOISSON_DETAIL_COMPENSATED_HPP
