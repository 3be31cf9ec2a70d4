#pragma once

#include <array>
#include <cstdint>

namespace etcb {

// Bit-stable random streams. The standard <random> engines are portable but the
// distributions are not (uniform_real_distribution may differ between standard
// libraries), and the experiment harness promises byte-identical CSV output for a
// fixed master seed. So the toolkit generates uniforms directly from raw 64-bit
// output: xoshiro256++ seeded through splitmix64, doubles via the top 53 bits.

// splitmix64 finalizer: full-avalanche mix of a 64-bit word.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Deterministic per-replication seed: avalanche over (master, grid index,
// replication index). Any scheduling of replications across threads sees the
// same stream for the same (n_index, replication) pair.
constexpr std::uint64_t derive_replication_seed(std::uint64_t master_seed,
                                                std::uint64_t n_index,
                                                std::uint64_t replication) noexcept {
  std::uint64_t h = 0x243f6a8885a308d3ULL ^ master_seed;
  h = mix64(h ^ (0x13198a2e03707344ULL + n_index));
  h = mix64(h ^ (0xa4093822299f31d0ULL + replication));
  return mix64(h);
}

// Independent sub-stream of an already-derived seed (log draws vs. bandit pulls
// vs. fresh evaluation draws, etc.).
constexpr std::uint64_t derive_stream_seed(std::uint64_t seed, std::uint64_t stream) noexcept {
  return mix64(seed ^ (0x082efa98ec4e6c89ULL + stream));
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) noexcept {
    // splitmix64 state expansion; four consecutive outputs are never all zero.
    std::uint64_t x = seed;
    for (auto& word : state_) {
      x += 0x9e3779b97f4a7c15ULL;
      std::uint64_t z = x;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
      word = z ^ (z >> 31);
    }
  }

  // xoshiro256++ step.
  std::uint64_t next() noexcept {
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

  // Uniform in [0, 1), 53-bit resolution.
  double uniform01() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Uniform in [lo, hi).
  double uniform(double lo, double hi) noexcept { return lo + (hi - lo) * uniform01(); }

  // Uniform integer in [0, n); n >= 1. Unbiased via rejection on the top range.
  std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % n;
    }
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

}  // namespace etcb
