#pragma once

#include <cstddef>
#include <optional>
#include <span>

#include "fdetect/group.hpp"

namespace fdetect {

using RealVector = Eigen::VectorXd;

/// Dense complex Hermitian operator on C^m. The stored matrix is kept exactly
/// Hermitian: it is symmetrized to (A + A^*)/2 on construction and after every
/// update.
class HermitianOperator {
public:
  static constexpr double kHermitianTol = 1e-12;

  HermitianOperator() = default;
  /// Throws ValidationError when max |A - A^*| exceeds `tol`.
  explicit HermitianOperator(Matrix entries, double tol = kHermitianTol);

  static HermitianOperator zero(std::size_t m);
  static HermitianOperator identity(std::size_t m);
  static HermitianOperator diagonal(std::span<const double> values);

  std::size_t dim() const noexcept { return static_cast<std::size_t>(a_.rows()); }
  const Matrix& matrix() const noexcept { return a_; }
  double trace() const { return a_.trace().real(); }

  HermitianOperator operator+(const HermitianOperator& rhs) const;
  HermitianOperator operator-(const HermitianOperator& rhs) const;
  HermitianOperator scaled(double s) const;

private:
  struct Trusted {};
  HermitianOperator(Matrix entries, Trusted);
  friend HermitianOperator rank_one_update(const HermitianOperator&, const Vector&);
  friend HermitianOperator sherman_morrison_inverse(const HermitianOperator&, const Vector&);
  friend HermitianOperator gram(const Matrix&);

  Matrix a_;
};

/// Eigenvalues ascending; eigenvectors (columns) when requested.
struct Spectrum {
  RealVector values;
  std::optional<Matrix> vectors;

  double max() const { return values.size() ? values(values.size() - 1) : 0.0; }
  double min() const { return values.size() ? values(0) : 0.0; }
};

/// Throws NumericalError with the reconstruction residual if the solver
/// does not converge.
Spectrum eigen(const HermitianOperator& a, bool with_vectors = false);

/// Largest |eigenvalue|; equals the top eigenvalue for positive operators.
double operator_norm(const HermitianOperator& a);

/// V V^* for a matrix V whose columns are the rank-one factors.
HermitianOperator gram(const Matrix& columns);

/// Tr((aI - A)^{-1}) = sum_i 1/(a - lambda_i). Requires a > lambda_max + 1e-12.
double upper_potential(const HermitianOperator& a, double shift);
double upper_potential(const Spectrum& spectrum, double shift);

/// A + v v^*.
HermitianOperator rank_one_update(const HermitianOperator& a, const Vector& v);

/// (A + v v^*)^{-1} from A^{-1}:  A^{-1} - (A^{-1}v)(A^{-1}v)^* / (1 + <A^{-1}v, v>).
HermitianOperator sherman_morrison_inverse(const HermitianOperator& a_inv, const Vector& v);

struct SumInequality {
  double lhs = 0.0; ///< sum a_i b_i
  double rhs = 0.0; ///< (1/m) sum a_i sum b_i
  bool holds = false;
};

/// Chebyshev-type sum inequality for an ascending positive `a` and a
/// descending positive `b` of equal length.
SumInequality check_sum_inequality(std::span<const double> a, std::span<const double> b);

} // namespace fdetect
