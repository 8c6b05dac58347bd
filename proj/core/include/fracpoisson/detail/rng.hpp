#ifndef FRACPOISSON_DETAIL_RNG_HPP
#define FRACPOISSON_DETAIL_RNG_HPP

#include <cstdint>

// Splittable deterministic random streams: splitmix64 expands a (master
// seed, stream index) pair into the state of a xoshiro256++ generator, so
// any partitioning of work across threads replays identically.

namespace fracpoisson::detail {

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class Xoshiro256pp {
 public:
  /// Stream `index` of the family identified by `seed`.
  Xoshiro256pp(std::uint64_t seed, std::uint64_t index = 0) {
    std::uint64_t sm = seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    s_[0] = splitmix64_next(sm);
    s_[1] = splitmix64_next(sm);
    s_[2] = splitmix64_next(sm);
    s_[3] = splitmix64_next(sm);
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform draw on the open interval (0, 1).
  double uniform_open() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

}  // namespace fracpoisson::detail

#endif  // FRACPOISSON_DETAIL_RNG_HPP
