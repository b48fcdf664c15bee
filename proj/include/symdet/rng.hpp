#pragma once

#include <cstdint>
#include <random>

namespace symdet {

/// Seeded generator with platform-independent bounded draws.
/// std::mt19937_64's raw sequence is fixed by the standard; the
/// distributions are not, so bounded sampling is done here by rejection.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform in [0, bound). bound must be nonzero.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t r;
    do {
      r = engine_();
    } while (r >= limit);
    return r % bound;
  }

  /// Uniform in [lo, hi].
  std::int64_t between(std::int64_t lo, std::int64_t hi) {
    return lo + static_cast<std::int64_t>(below(static_cast<std::uint64_t>(hi - lo) + 1));
  }

  bool chance(double p) { return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p; }

  std::uint64_t bits(unsigned k) { return k >= 64 ? engine_() : engine_() & ((std::uint64_t{1} << k) - 1); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace symdet
