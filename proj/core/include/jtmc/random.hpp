#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

namespace jtmc {

// The distributions in <random> are implementation-defined, so traces would
// differ between standard libraries. Everything below is bit-portable.

/// SplitMix64 finalizer; used to derive independent streams from integer keys.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(mix64(a) ^ (b + 0x632be59bd9b4e019ULL));
}

constexpr std::uint64_t mix64(std::uint64_t a, std::uint64_t b,
                              std::uint64_t c) noexcept {
  return mix64(mix64(a, b), c);
}

/// Small counter-based generator satisfying UniformRandomBitGenerator.
/// Cheap to construct, so each chain step can own a fresh stream.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  constexpr explicit SplitMix64(std::uint64_t seed = 0) noexcept
      : state_(seed) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

/// Uniform double in [0, 1) with 53 random bits.
template <class URBG>
double uniform01(URBG& rng) {
  static_assert(URBG::min() == 0 &&
                URBG::max() == std::numeric_limits<std::uint64_t>::max());
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

__extension__ typedef unsigned __int128 uint128;

/// Uniform integer in [0, n). n must be positive. Lemire's method with
/// rejection, so the result is exactly uniform.
template <class URBG>
std::uint64_t uniform_index(URBG& rng, std::uint64_t n) {
  static_assert(URBG::min() == 0 &&
                URBG::max() == std::numeric_limits<std::uint64_t>::max());
  uint128 m = static_cast<uint128>(rng()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<uint128>(rng()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

/// Fair coin.
template <class URBG>
bool coin_flip(URBG& rng) {
  return (rng() >> 63) != 0;
}

/// Standard normal via the Marsaglia polar method (no caching of the spare,
/// so the stream position is a pure function of the number of calls).
template <class URBG>
double standard_normal(URBG& rng) {
  for (;;) {
    const double u = 2.0 * uniform01(rng) - 1.0;
    const double v = 2.0 * uniform01(rng) - 1.0;
    const double s = u * u + v * v;
    if (s > 0.0 && s < 1.0) {
      return u * std::sqrt(-2.0 * std::log(s) / s);
    }
  }
}

}  // namespace jtmc
