#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fdetect/operator.hpp"
#include "fdetect/subspaces.hpp"

namespace fdetect {

using IndexSet = std::vector<std::size_t>;

inline constexpr double kFeasibilityTol = 1e-9;
inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

/// Equal-norm Parseval frame: n vectors u_i in C^m with ||u_i||^2 = eps and
/// sum_i u_i u_i^* = I_m.
class FrameSystem {
public:
  static constexpr double kNormTol = 1e-8;
  static constexpr double kTightTol = 1e-8;

  /// `vectors` is m x n, column i = u_i. Validates both frame identities.
  explicit FrameSystem(Matrix vectors);

  std::size_t m() const noexcept { return static_cast<std::size_t>(u_.rows()); }
  std::size_t n() const noexcept { return static_cast<std::size_t>(u_.cols()); }
  double epsilon() const noexcept { return epsilon_; }
  const Matrix& vectors() const noexcept { return u_; }
  Vector vector(std::size_t i) const { return u_.col(static_cast<Eigen::Index>(i)); }

  /// sum_{i in s} u_i u_i^*.
  HermitianOperator partial_sum(std::span<const std::size_t> s) const;

private:
  Matrix u_;
  double epsilon_;
};

/// Frame u_g = Q e_g written in the orthonormal coordinates {e^_phi : phi in T}
/// of F, i.e. (u_g)_r = <e_g, e^_{T_r}> = conj(e^_{T_r}(g)). Rejects
/// dim(F) = 0 and dim(F) = |G|.
FrameSystem build_frame(const FourierSubspace& f);

/// Left side of the barrier feasibility test
///   <((a+d)I - A)^{-2} v, v> / phi_gap + <((a+d)I - A)^{-1} v, v>.
/// A value <= 1 guarantees ||A + vv^*|| < a + d and
/// Phi^{a+d}(A + vv^*) <= Phi^a(A) when phi_gap = Phi^a(A) - Phi^{a+d}(A).
double barrier_condition(const HermitianOperator& a, double shift, double delta,
                         const Vector& v, double phi_gap);

/// a_j = sqrt(eps) + j / ((1 - sqrt(eps)) n).
double barrier_shift(double epsilon, std::size_t n, std::size_t j);

struct PotentialPoint {
  double shift = 0.0;
  double potential = 0.0;
};

struct SelectionResult {
  IndexSet order;             ///< indices in the order chosen
  IndexSet selected;          ///< sorted
  std::size_t k = 0;
  std::size_t n = 0;
  std::size_t m = 0;
  double epsilon = 0.0;
  double achieved_one_sided = 0.0;   ///< ||sum_{i in S} u_i u_i^*||
  double bound_one_sided = 0.0;      ///< a_k
  double achieved_complement = 0.0;  ///< ||I - sum_{i in S} u_i u_i^*||
  double complement_reference = 0.0; ///< (n - k) / n
  std::vector<PotentialPoint> potential_trace; ///< (a_j, Phi^{a_j}(A_j)), j = 0..k
  std::vector<double> domination_margins;      ///< a_j - ||A_j||, j = 0..k
  std::vector<double> feasibility_values;      ///< min condition value at steps 0..k-1
  std::size_t refactorizations = 0;
  bool potential_monotone = false;
  bool strictly_dominated = false;
};

/// Barrier-potential greedy selection of k frame vectors. At step j every
/// unused index is scored with barrier_condition(A_j, a_j, a_{j+1} - a_j);
/// the smallest score wins, ties (within 1e-13 relative) go to the smaller
/// index. Throws NoFeasibleCandidate if no score is <= 1 + 1e-9 after one
/// refactorization from scratch.
SelectionResult select_onesided(const FrameSystem& frame, std::size_t k);

struct TwoSidedEvaluation {
  std::size_t k = 0;
  std::size_t n = 0;
  double qpq_norm = 0.0;        ///< ||QPQ|| = ||PQ||^2
  double complement_norm = 0.0; ///< ||Q(I-P)Q|| = ||(I-P)Q||^2
  double excess = 0.0;          ///< qpq_norm - k/n
  double complement_excess = 0.0; ///< complement_norm - (n-k)/n
  double identity_residual = 0.0; ///< max-entry |QPQ + Q(I-P)Q - I|
  double max_excess() const { return excess > complement_excess ? excess : complement_excess; }
};

TwoSidedEvaluation evaluate_twosided(const FrameSystem& frame, std::span<const std::size_t> s);

enum class Objective { OneSided, TwoSidedMaxExcess };
const char* to_string(Objective objective);

struct BruteForceResult {
  IndexSet selected;
  double value = 0.0;
  std::uint64_t subsets = 0;
};

/// C(n, k), saturating at UINT64_MAX.
std::uint64_t binomial(std::size_t n, std::size_t k);

/// Exhaustive minimum over all k-subsets. Returns the exact minimum and the
/// lexicographically first subset attaining it (ties within 1e-12 absolute).
BruteForceResult brute_force_best(const FrameSystem& frame, std::size_t k, Objective objective,
                                  std::uint64_t enumeration_cap = kDefaultEnumerationCap);

/// Greedy resize of `s` to exactly k elements. Removal drops the element
/// whose removal least decreases ||QPQ||; addition adds the element whose
/// addition least increases it. Ties go to the smaller index.
IndexSet adjust_cardinality(IndexSet s, std::size_t k, const FrameSystem& frame);

struct TwoSidedSelection {
  bool exhaustive = false;
  IndexSet selected;
  TwoSidedEvaluation evaluation;
};

/// Exhaustive two-sided minimum when C(n, k) fits the cap, otherwise the
/// one-sided barrier selection (labelled heuristic).
TwoSidedSelection select_twosided(const FrameSystem& frame, std::size_t k,
                                  std::uint64_t enumeration_cap = kDefaultEnumerationCap);

} // namespace fdetect
