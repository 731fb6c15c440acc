#ifndef QMART_RNG_HPP
#define QMART_RNG_HPP

#include <cstdint>
#include <vector>

#include "qmart/rational.hpp"

namespace qmart {

/// Deterministic splitmix64 stream. All randomized machinery in the
/// library derives from this, so results are reproducible bit-for-bit
/// from the seed alone, independent of platform and standard library.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }

  /// Uniform-ish draw in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n) { return next() % n; }

  /// Inclusive integer range.
  long range(long lo, long hi) {
    return lo + static_cast<long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
  }

  /// Numerator in [-bound, bound], denominator in [1, bound].
  Rat rat(int bound) { return Rat(range(-bound, bound), range(1, bound)); }

  /// Numerator in [0, bound], denominator in [1, bound].
  Rat nonneg_rat(int bound) { return Rat(range(0, bound), range(1, bound)); }

  /// Numerator in [1, bound], denominator in [1, bound].
  Rat pos_rat(int bound) { return Rat(range(1, bound), range(1, bound)); }

  bool coin() { return (next() & 1) != 0; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::swap(v[i - 1], v[below(i)]);
    }
  }

private:
  std::uint64_t state_;
};

} // namespace qmart

#endif
