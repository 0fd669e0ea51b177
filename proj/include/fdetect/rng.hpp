#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace fdetect {

/// Seeded generator used by every randomized routine.
///
/// The engine is std::mt19937_64 (the 64-bit Mersenne Twister, whose output
/// sequence is fixed by the C++ standard). Integers in [0, bound) are drawn by
/// rejection: a raw 64-bit word r is accepted when r < bound * floor(2^64 / bound)
/// and mapped to r % bound. Reals in [0, 1) are (r >> 11) * 2^-53. Neither path
/// goes through <random> distributions, whose algorithms are unspecified, so
/// the streams are reproducible in any language that implements MT19937-64.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::uint64_t below(std::uint64_t bound);
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  double normal();

private:
  std::mt19937_64 engine_;
};

/// SplitMix64 finalizer of (seed, stream); derives independent per-trial seeds.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

/// Uniform k-subset of {0..n-1}: partial Fisher-Yates over the identity
/// permutation (swap slot i with slot i + below(n - i) for i < k), then sorted.
std::vector<std::size_t> random_subset(std::size_t n, std::size_t k, Rng& rng);

} // namespace fdetect
