#pragma once

#include <cstdint>
#include <random>

#include "postlie/matrix.hpp"

namespace postlie {

/// Seeded generator whose output does not depend on the standard library's
/// distribution implementations, so reports are reproducible across toolchains.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Derives an independent stream for sub-check `index` of a run seeded with `seed`.
  static Rng stream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return Rng((static_cast<std::uint64_t>(words[0]) << 32) | words[1]);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform in [lo, hi).
  double uniform(double lo, double hi) {
    const double u = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
  }

  /// Uniform integer in [lo, hi].
  long integer(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(engine_() % span);
  }

  /// p/q with |p| <= max_num, 1 <= q <= max_den.
  Rational rational(long max_num = 9, long max_den = 5) {
    Rational q(integer(-max_num, max_num), static_cast<unsigned long>(integer(1, max_den)));
    q.canonicalize();
    return q;
  }

  RealMatrix real_matrix(std::size_t n, double lo = -1.0, double hi = 1.0) {
    RealMatrix m(n);
    for (auto& v : m.values()) v = uniform(lo, hi);
    return m;
  }

  RationalMatrix rational_matrix(std::size_t n, long max_num = 9, long max_den = 5) {
    RationalMatrix m(n);
    for (auto& v : m.values()) v = rational(max_num, max_den);
    return m;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace postlie
