#pragma once

#include <cstdint>
#include <memory>
#include <string_view>
#include <vector>

#include "fdetect/group.hpp"
#include "fdetect/operator.hpp"

namespace fdetect {

using BasisPtr = std::shared_ptr<const FlatBasis>;

inline constexpr double kIntersectionTol = 1e-6;

/// Span of the point masses e_g for g in `indices`.
class StandardSubspace {
public:
  /// Sorts indices; rejects duplicates and out-of-range entries.
  StandardSubspace(BasisPtr ambient, std::vector<std::size_t> indices);

  const BasisPtr& ambient() const noexcept { return ambient_; }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t dim() const noexcept { return indices_.size(); }
  std::size_t ambient_dim() const noexcept { return ambient_->dim(); }

private:
  BasisPtr ambient_;
  std::vector<std::size_t> indices_;
};

/// Span of the flat-basis rows listed in `indices`.
class FourierSubspace {
public:
  FourierSubspace(BasisPtr ambient, std::vector<std::size_t> indices);

  const BasisPtr& ambient() const noexcept { return ambient_; }
  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t dim() const noexcept { return indices_.size(); }
  std::size_t ambient_dim() const noexcept { return ambient_->dim(); }

  /// m x n matrix whose rows are the spanning basis vectors.
  Matrix rows() const;

private:
  BasisPtr ambient_;
  std::vector<std::size_t> indices_;
};

BasisPtr share(FlatBasis basis);

/// Index-set literal: "" (empty), "0,3,12", "all", or "random:k:seed".
std::vector<std::size_t> parse_index_set(std::string_view literal, std::size_t n);

HermitianOperator projection(const StandardSubspace& e);
HermitianOperator projection(const FourierSubspace& f);

/// ||PQ||: square root of the top eigenvalue of QPQ, computed on the smaller
/// of the |S| x |S| and dim(F) x dim(F) Gram matrices of the T x S block.
double overlap_norm(const StandardSubspace& e, const FourierSubspace& f);

/// ||P e_phi||^2 for basis row `phi`.
double single_vector_detection(const StandardSubspace& e, std::size_t phi);

struct UncertaintyVerdict {
  bool multiplicative_applies = false; ///< |S| |T| < |G|
  bool additive_applies = false;       ///< |G| prime, group Fourier basis, |S| + |T| <= |G|
  double overlap_norm = 0.0;
  bool intersects = false;             ///< overlap_norm > 1 - tol

  /// False only when a hypothesis applies and an intersection was detected.
  bool consistent() const {
    return !(intersects && (multiplicative_applies || additive_applies));
  }
};

UncertaintyVerdict check_uncertainty(const StandardSubspace& e, const FourierSubspace& f,
                                     double intersection_tol = kIntersectionTol);

bool is_prime(std::size_t n);

struct CombExample {
  Group group;
  BasisPtr basis;
  StandardSubspace support;   ///< multiples of n
  FourierSubspace characters; ///< {n b : 0 <= b < n}
  std::vector<Complex> f;     ///< sum_b phi_{nb}, unnormalized
};

/// Function on Z/n^2 that is n-sparse in both the standard and Fourier bases.
CombExample comb_example(int n, std::size_t order_cap = kDefaultOrderCap);

struct ExchangeResult {
  StandardSubspace complement;
  double sigma_min = 0.0; ///< smallest singular value of [e^_phi | e_g] stacked
};

/// Standard subspace of dimension |G| - dim(F) meeting F only in 0. Starting
/// from the span of F, repeatedly adds the e_g with the largest component
/// outside the running span (ties to the smaller g).
ExchangeResult exchange_complement(const FourierSubspace& f);

/// Smallest singular value of the n x n matrix with columns e^_phi (phi in F)
/// and e_g (g in S).
double stacked_sigma_min(const FourierSubspace& f, const StandardSubspace& s);

StandardSubspace random_standard(std::size_t k, std::uint64_t seed, const BasisPtr& ambient);

} // namespace fdetect
