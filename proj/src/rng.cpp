#include "fdetect/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "fdetect/errors.hpp"

namespace fdetect {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) throw ValidationError("Rng::below: bound must be positive");
  const std::uint64_t limit =
      std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t r = engine_();
  while (r >= limit) r = engine_();
  return r % bound;
}

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  // Box-Muller, first output only.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<std::size_t> random_subset(std::size_t n, std::size_t k, Rng& rng) {
  if (k > n) throw ValidationError("random_subset: k exceeds n");
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(k);
  std::sort(perm.begin(), perm.end());
  return perm;
}

} // namespace fdetect
