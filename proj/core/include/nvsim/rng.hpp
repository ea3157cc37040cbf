#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

// Deterministic, platform-independent random streams. Every Monte Carlo
// consumer derives its own stream from (master_seed, cycle_index, purpose),
// so results do not depend on thread scheduling and independent stages of a
// simulation cycle can be added or skipped without shifting each other's
// draws.

namespace nvsim {

inline constexpr std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Stage of a simulation cycle. Used as a stream-derivation salt.
enum class RngPurpose : std::uint64_t {
  SpectralJump = 1,
  Probe = 2,
  Ionization = 3,
  ShotNoise = 4,
  Generic = 5,
};

// xoshiro256++ seeded via splitmix64.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
  }

  Rng(std::uint64_t master_seed, std::uint64_t stream_index,
      RngPurpose purpose)
      : Rng(derive_seed(master_seed, stream_index, purpose)) {}

  static std::uint64_t derive_seed(std::uint64_t master_seed,
                                   std::uint64_t stream_index,
                                   RngPurpose purpose) {
    std::uint64_t sm = master_seed;
    std::uint64_t a = splitmix64(sm);
    sm = stream_index ^ 0xd1b54a32d192ed03ull;
    std::uint64_t b = splitmix64(sm);
    sm = a ^ b ^ static_cast<std::uint64_t>(purpose);
    return splitmix64(sm);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  // uniform in [0, 1)
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in (0, 1]; safe as a log() argument
  double uniform_pos() { return 1.0 - uniform(); }

  bool bernoulli(double p) { return uniform() < p; }

  // Box-Muller, one value per call (no cached pair, keeps the stream layout
  // independent of call parity)
  double gaussian(double mean = 0.0, double stddev = 1.0) {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    return mean + stddev * r * std::cos(2.0 * std::numbers::pi * u2);
  }

  double exponential(double rate) {
    return -std::log(uniform_pos()) / rate;
  }

  // Knuth multiplication method, chunked so exp(-mean) never underflows.
  std::uint64_t poisson(double mean) {
    std::uint64_t total = 0;
    while (mean > 0.0) {
      const double chunk = mean > 500.0 ? 500.0 : mean;
      mean -= chunk;
      const double limit = std::exp(-chunk);
      double prod = uniform_pos();
      std::uint64_t k = 0;
      while (prod > limit) {
        prod *= uniform_pos();
        ++k;
      }
      total += k;
    }
    return total;
  }

  // number of consecutive successes with probability p before the first
  // failure, capped at `cap` (distribution-equal to cap coin flips)
  std::uint64_t geometric_successes(double p, std::uint64_t cap) {
    if (p >= 1.0) return cap;
    if (p <= 0.0) return 0;
    const double g = std::log(uniform_pos()) / std::log(p);
    if (g >= static_cast<double>(cap)) return cap;
    return static_cast<std::uint64_t>(g);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t state_[4];
};

}  // namespace nvsim
