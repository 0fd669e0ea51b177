#include "fdetect/operator.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "fdetect/errors.hpp"

namespace fdetect {

namespace {

constexpr double kShiftMargin = 1e-12;
constexpr double kSingularDenominator = 1e-12;

void symmetrize(Matrix& a) {
  const Matrix adj = a.adjoint();
  a = 0.5 * (a + adj);
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw ValidationError(std::string(what) + ": dimension mismatch (" + std::to_string(a) + " vs " +
                          std::to_string(b) + ")");
  }
}

} // namespace

HermitianOperator::HermitianOperator(Matrix entries, double tol) : a_(std::move(entries)) {
  if (a_.rows() != a_.cols()) throw ValidationError("Hermitian operator must be square");
  if (a_.size() > 0) {
    const double dev = (a_ - a_.adjoint()).cwiseAbs().maxCoeff();
    if (dev > tol) {
      std::ostringstream os;
      os << "operator is not Hermitian: max |A - A^*| = " << dev;
      throw ValidationError(os.str());
    }
  }
  symmetrize(a_);
}

HermitianOperator::HermitianOperator(Matrix entries, Trusted) : a_(std::move(entries)) { symmetrize(a_); }

HermitianOperator HermitianOperator::zero(std::size_t m) {
  const auto d = static_cast<Eigen::Index>(m);
  return HermitianOperator(Matrix::Zero(d, d), Trusted{});
}

HermitianOperator HermitianOperator::identity(std::size_t m) {
  const auto d = static_cast<Eigen::Index>(m);
  return HermitianOperator(Matrix::Identity(d, d), Trusted{});
}

HermitianOperator HermitianOperator::diagonal(std::span<const double> values) {
  const auto d = static_cast<Eigen::Index>(values.size());
  Matrix a = Matrix::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) a(i, i) = values[static_cast<std::size_t>(i)];
  return HermitianOperator(std::move(a), Trusted{});
}

HermitianOperator HermitianOperator::operator+(const HermitianOperator& rhs) const {
  require_same_dim(dim(), rhs.dim(), "operator +");
  return HermitianOperator(a_ + rhs.a_, Trusted{});
}

HermitianOperator HermitianOperator::operator-(const HermitianOperator& rhs) const {
  require_same_dim(dim(), rhs.dim(), "operator -");
  return HermitianOperator(a_ - rhs.a_, Trusted{});
}

HermitianOperator HermitianOperator::scaled(double s) const { return HermitianOperator(s * a_, Trusted{}); }

Spectrum eigen(const HermitianOperator& a, bool with_vectors) {
  Spectrum out;
  if (a.dim() == 0) {
    out.values = RealVector(0);
    if (with_vectors) out.vectors = Matrix(0, 0);
    return out;
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(a.matrix(),
                                               with_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    Eigen::SelfAdjointEigenSolver<Matrix> probe(a.matrix(), Eigen::ComputeEigenvectors);
    const Matrix& v = probe.eigenvectors();
    const double residual =
        (a.matrix() - v * probe.eigenvalues().cast<Complex>().asDiagonal() * v.adjoint()).cwiseAbs().maxCoeff();
    std::ostringstream os;
    os << "Hermitian eigensolver did not converge (reconstruction residual " << residual << ")";
    throw NumericalError(os.str());
  }
  out.values = solver.eigenvalues();
  if (with_vectors) out.vectors = solver.eigenvectors();
  return out;
}

double operator_norm(const HermitianOperator& a) {
  const auto s = eigen(a);
  return std::max(std::abs(s.min()), std::abs(s.max()));
}

HermitianOperator gram(const Matrix& columns) { return HermitianOperator(columns * columns.adjoint(), HermitianOperator::Trusted{}); }

double upper_potential(const Spectrum& spectrum, double shift) {
  if (spectrum.values.size() > 0 && !(shift - spectrum.max() > kShiftMargin)) {
    std::ostringstream os;
    os.precision(17);
    os << "upper potential needs shift > ||A||: shift " << shift << ", ||A|| " << spectrum.max();
    throw ValidationError(os.str());
  }
  double phi = 0.0;
  for (Eigen::Index i = 0; i < spectrum.values.size(); ++i) phi += 1.0 / (shift - spectrum.values(i));
  return phi;
}

double upper_potential(const HermitianOperator& a, double shift) { return upper_potential(eigen(a), shift); }

HermitianOperator rank_one_update(const HermitianOperator& a, const Vector& v) {
  require_same_dim(a.dim(), static_cast<std::size_t>(v.size()), "rank_one_update");
  return HermitianOperator(a.a_ + v * v.adjoint(), HermitianOperator::Trusted{});
}

HermitianOperator sherman_morrison_inverse(const HermitianOperator& a_inv, const Vector& v) {
  require_same_dim(a_inv.dim(), static_cast<std::size_t>(v.size()), "sherman_morrison_inverse");
  const Vector w = a_inv.a_ * v;
  const double denom = 1.0 + v.dot(w).real(); // <A^{-1} v, v> is real for Hermitian A^{-1}
  if (std::abs(denom) <= kSingularDenominator) {
    throw NumericalError("Sherman-Morrison denominator 1 + <A^-1 v, v> is numerically zero");
  }
  return HermitianOperator(a_inv.a_ - (w * w.adjoint()) / denom, HermitianOperator::Trusted{});
}

SumInequality check_sum_inequality(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || a.size() != b.size()) throw ValidationError("sum inequality needs equal, non-zero lengths");
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (!(a[i] > 0.0) || !(b[i] > 0.0)) throw ValidationError("sum inequality needs positive entries");
    if (i > 0 && a[i] < a[i - 1]) throw ValidationError("first sequence must be ascending");
    if (i > 0 && b[i] > b[i - 1]) throw ValidationError("second sequence must be descending");
  }
  SumInequality out;
  double sa = 0.0;
  double sb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    out.lhs += a[i] * b[i];
    sa += a[i];
    sb += b[i];
  }
  out.rhs = sa * sb / static_cast<double>(a.size());
  out.holds = out.lhs <= out.rhs + 1e-12;
  return out;
}

} // namespace fdetect
