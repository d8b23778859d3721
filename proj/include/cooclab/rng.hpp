#ifndef COOCLAB_RNG_HPP
#define COOCLAB_RNG_HPP

#include <cstdint>

namespace cooclab {

// All randomness in this project flows through SplitMix64 (Steele, Lea &
// Flood 2014): a counter advanced by the 64-bit golden ratio, finalized by
// two xor-multiply rounds. The stream for a given seed is identical on
// every platform, which makes trajectories and experiment CSVs bit-exact
// reproducible. The stream contract is documented in the README.
class SplitMix64 {
public:
  explicit SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  std::uint64_t next() noexcept {
    state_ += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform in [0, 1), 53 random bits.
  double next_u01() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

private:
  std::uint64_t state_;
};

// SplitMix64 finalizer as a standalone hash.
inline std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Seed derivation: mix(a, b) folds a stream index b into a base seed a.
// Nested application derives per-(chain, L, trial) seeds independently of
// scheduling, e.g. mix(mix(mix(base, chain_hash), L), trial).
inline std::uint64_t mix(std::uint64_t a, std::uint64_t b) noexcept {
  return mix64(a * 0x9E3779B97F4A7C15ULL ^ b);
}

}  // namespace cooclab

#endif
