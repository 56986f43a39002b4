#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace unmix {

/// SplitMix64 step; used to derive independent stream seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

/// Counter-based stream derivation: (master_seed, purpose, index) -> seed.
/// Streams for distinct counters are independent for all practical purposes,
/// so results do not depend on evaluation order.
inline std::uint64_t derive_seed(std::uint64_t master_seed, std::uint64_t purpose,
                                 std::uint64_t index) {
  std::uint64_t s = master_seed;
  splitmix64(s);
  s ^= 0x7f4a7c15u * purpose + 0x9e3779b9u;
  splitmix64(s);
  s ^= index;
  return splitmix64(s);
}

/// Small deterministic generator (xoshiro256**). Self-contained so that
/// streams are reproducible independent of standard-library internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    for (auto& word : state_) word = splitmix64(seed);
  }

  Rng(std::uint64_t master_seed, std::uint64_t purpose, std::uint64_t index)
      : Rng(derive_seed(master_seed, purpose, index)) {}

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  /// Uniform on [0, 1), 53-bit resolution.
  double uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform on (0, 1].
  double uniform01_open_low() { return 1.0 - uniform01(); }

  /// Uniform on [lo, hi).
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Standard normal via Box-Muller; the spare deviate is cached.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = uniform01_open_low();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(angle);
    has_spare_ = true;
    return r * std::cos(angle);
  }

  double normal(double mean, double std_dev) { return mean + std_dev * normal(); }

  /// Uniform integer in [0, n). Modulo bias is of order n / 2^64, far below
  /// anything observable for index-sized n.
  std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t state_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace unmix
