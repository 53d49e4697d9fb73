#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace ixpsim {

// All randomness in this project flows through this generator so that runs
// are reproducible bit-for-bit from a single 64-bit seed, independent of the
// standard library in use (std::uniform_int_distribution and friends are not
// portable across implementations).
//
// Generator: xoshiro256** seeded via splitmix64. Both algorithms are public
// domain (Blackman & Vigna). Independent streams are obtained with
// derive_seed(seed, tag); the tags used by each subsystem are listed in
// rng_stream below and must not be reused for new purposes.

inline std::uint64_t splitmix64_next(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Maps (seed, stream tag) to a decorrelated child seed. Two rounds of
// splitmix64 mixing keep nearby tags (0,1,2,...) unrelated.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t s = seed ^ (0xD1B54A32D192ED03ULL * (stream + 1));
  std::uint64_t a = splitmix64_next(s);
  return splitmix64_next(s) ^ a;
}

namespace rng_stream {
// Fixed stream tags, one per randomness consumer.
inline constexpr std::uint64_t attribute_synthesis = 1;  // pathlet capacity/latency draws
inline constexpr std::uint64_t workload = 2;             // arrivals, demands, bounds, pairs, backup flags
inline constexpr std::uint64_t failures = 3;             // failure times and victims
inline constexpr std::uint64_t random_walks = 4;         // per-walk child seeds
inline constexpr std::uint64_t endpoint_synthesis = 5;   // synthetic endpoint attachment
}  // namespace rng_stream

class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64_next(sm);
  }

  std::uint64_t next() {
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

  // Uniform in [0, bound), unbiased (rejection on the wrap-around remainder).
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
      const std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }

  // Uniform integer in [lo, hi], inclusive. Requires lo <= hi.
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span =
        static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo) + 1;
    return lo + static_cast<std::int64_t>(below(span));
  }

  // Uniform in [0, 1) with 53 random bits.
  double real01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double exponential(double mean) { return -mean * std::log1p(-real01()); }

  bool bernoulli(double p) { return real01() < p; }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::array<std::uint64_t, 4> state_;
};

}  // namespace ixpsim
