#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "fdetect/report.hpp"
#include "fdetect/sparsifier.hpp"

namespace fdetect {

struct McIntersectionConfig {
  int n = 2;              ///< comb parameter: first factor is n^2
  int big_n = 8;          ///< second factor N
  std::size_t trials = 200;
  std::uint64_t seed = 0;
  /// Dimension of the random standard subspace; defaults to |G'| / n.
  std::optional<std::size_t> dimension;
  double intersection_tol = kIntersectionTol;
  std::size_t order_cap = kDefaultOrderCap;
  std::size_t threads = 1;
};

/// Monte Carlo frequency with which a random standard subspace meets the
/// Fourier subspace F (x) l^2(Z/N) on Z/n^2 x Z/N, where F is the comb span.
/// Trial t uses subset seed derive_seed(seed, t).
Report mc_intersection(const McIntersectionConfig& config);

struct SweepInstance {
  std::vector<int> factors;
  IndexSet chars;
};

/// Arithmetic progression {0, n/m, 2n/m, ...} when m divides n, else {0..m-1}.
IndexSet structured_chars(std::size_t n, std::size_t m);

struct SweepConfig {
  std::vector<SweepInstance> instances;
  double k_fraction = 0.5;
  std::uint64_t seed = 0;
  std::size_t order_cap = kDefaultOrderCap;
};

/// Runs the barrier selection on each instance with k = floor(k_fraction n)
/// and records excess = ||QPQ|| - k/n and excess / sqrt(eps).
Report sweep_eps_constant(const SweepConfig& config);

struct HalfSplitConfig {
  BasisPtr basis;
  IndexSet chars;
  bool use_oracle = false;
  std::uint64_t seed = 0;
  std::uint64_t enumeration_cap = kDefaultEnumerationCap;
};

/// Finds S with |S| = floor(n/2) and reports ||PQ||, ||(I-P)Q|| and their
/// deviations from 1/sqrt(2).
Report half_split(const HalfSplitConfig& config);

} // namespace fdetect
