#include "fdetect/subspaces.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include <Eigen/SVD>

#include "fdetect/errors.hpp"
#include "fdetect/rng.hpp"

namespace fdetect {

namespace {

std::vector<std::size_t> normalize_indices(std::vector<std::size_t> indices, std::size_t n, const char* what) {
  std::sort(indices.begin(), indices.end());
  if (std::adjacent_find(indices.begin(), indices.end()) != indices.end()) {
    throw ValidationError(std::string(what) + ": duplicate index");
  }
  if (!indices.empty() && indices.back() >= n) {
    throw ValidationError(std::string(what) + ": index " + std::to_string(indices.back()) + " out of range for dimension " +
                          std::to_string(n));
  }
  return indices;
}

BasisPtr require_basis(BasisPtr basis) {
  if (!basis) throw ValidationError("subspace needs an ambient basis");
  return basis;
}

std::size_t parse_size(std::string_view token, std::string_view literal) {
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (token.empty() || ec != std::errc() || ptr != token.data() + token.size()) {
    throw ValidationError("bad index set literal '" + std::string(literal) + "'");
  }
  return value;
}

} // namespace

StandardSubspace::StandardSubspace(BasisPtr ambient, std::vector<std::size_t> indices)
    : ambient_(require_basis(std::move(ambient))),
      indices_(normalize_indices(std::move(indices), ambient_->dim(), "standard subspace")) {}

FourierSubspace::FourierSubspace(BasisPtr ambient, std::vector<std::size_t> indices)
    : ambient_(require_basis(std::move(ambient))),
      indices_(normalize_indices(std::move(indices), ambient_->dim(), "Fourier subspace")) {}

Matrix FourierSubspace::rows() const {
  const auto n = static_cast<Eigen::Index>(ambient_->dim());
  Matrix b(static_cast<Eigen::Index>(indices_.size()), n);
  for (std::size_t r = 0; r < indices_.size(); ++r) {
    b.row(static_cast<Eigen::Index>(r)) = ambient_->matrix().row(static_cast<Eigen::Index>(indices_[r]));
  }
  return b;
}

BasisPtr share(FlatBasis basis) { return std::make_shared<const FlatBasis>(std::move(basis)); }

std::vector<std::size_t> parse_index_set(std::string_view literal, std::size_t n) {
  if (literal.empty() || literal == "none") return {};
  if (literal == "all") {
    std::vector<std::size_t> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    return all;
  }
  if (literal.starts_with("random:")) {
    const auto rest = literal.substr(7);
    const auto colon = rest.find(':');
    if (colon == std::string_view::npos) throw ValidationError("random set literal must be random:k:seed");
    const auto k = parse_size(rest.substr(0, colon), literal);
    const auto seed = parse_size(rest.substr(colon + 1), literal);
    if (k > n) throw ValidationError("random set size " + std::to_string(k) + " exceeds dimension " + std::to_string(n));
    Rng rng(seed);
    return random_subset(n, k, rng);
  }
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos <= literal.size()) {
    auto end = literal.find(',', pos);
    if (end == std::string_view::npos) end = literal.size();
    out.push_back(parse_size(literal.substr(pos, end - pos), literal));
    pos = end + 1;
  }
  return normalize_indices(std::move(out), n, "index set");
}

HermitianOperator projection(const StandardSubspace& e) {
  std::vector<double> diag(e.ambient_dim(), 0.0);
  for (auto g : e.indices()) diag[g] = 1.0;
  return HermitianOperator::diagonal(diag);
}

HermitianOperator projection(const FourierSubspace& f) {
  // Columns are the basis vectors e^_phi.
  return gram(f.rows().transpose());
}

double overlap_norm(const StandardSubspace& e, const FourierSubspace& f) {
  if (e.ambient_dim() != f.ambient_dim()) throw ValidationError("overlap_norm: ambient dimension mismatch");
  if (e.dim() == 0 || f.dim() == 0) return 0.0;
  const auto& u = f.ambient()->matrix();
  Matrix block(static_cast<Eigen::Index>(f.dim()), static_cast<Eigen::Index>(e.dim()));
  for (std::size_t r = 0; r < f.dim(); ++r) {
    for (std::size_t c = 0; c < e.dim(); ++c) {
      block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          u(static_cast<Eigen::Index>(f.indices()[r]), static_cast<Eigen::Index>(e.indices()[c]));
    }
  }
  const double top = f.dim() <= e.dim() ? eigen(gram(block)).max() : eigen(gram(block.adjoint())).max();
  return std::sqrt(std::clamp(top, 0.0, 1.0));
}

double single_vector_detection(const StandardSubspace& e, std::size_t phi) {
  if (phi >= e.ambient_dim()) throw ValidationError("character index " + std::to_string(phi) + " out of range");
  double sum = 0.0;
  for (auto g : e.indices()) sum += std::norm(e.ambient()->entry(phi, g));
  return sum;
}

bool is_prime(std::size_t n) {
  if (n < 2) return false;
  for (std::size_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

UncertaintyVerdict check_uncertainty(const StandardSubspace& e, const FourierSubspace& f, double intersection_tol) {
  UncertaintyVerdict v;
  const std::size_t n = e.ambient_dim();
  // |S||T| >= n holds for every flat unitary basis; the additive form needs
  // the Fourier basis of a cyclic group of prime order.
  v.multiplicative_applies = e.dim() * f.dim() < n;
  v.additive_applies = f.ambient()->group().has_value() && is_prime(n) && e.dim() + f.dim() <= n;
  v.overlap_norm = overlap_norm(e, f);
  v.intersects = v.overlap_norm > 1.0 - intersection_tol;
  return v;
}

CombExample comb_example(int n, std::size_t order_cap) {
  if (n < 2) throw ValidationError("comb example needs n >= 2");
  Group group({n * n}, order_cap);
  auto basis = share(fourier_basis(group));
  std::vector<std::size_t> chars;
  for (int b = 0; b < n; ++b) chars.push_back(static_cast<std::size_t>(n * b));
  std::vector<Complex> f(group.order(), Complex{0.0, 0.0});
  std::vector<std::size_t> support;
  for (std::size_t a = 0; a < group.order(); ++a) {
    for (auto chi : chars) f[a] += character_value(group, chi, a);
    if (std::abs(f[a]) > 0.5 * n) support.push_back(a);
  }
  return CombExample{group, basis, StandardSubspace(basis, std::move(support)), FourierSubspace(basis, std::move(chars)),
                     std::move(f)};
}

double stacked_sigma_min(const FourierSubspace& f, const StandardSubspace& s) {
  const auto n = static_cast<Eigen::Index>(f.ambient_dim());
  if (f.dim() + s.dim() != f.ambient_dim()) throw ValidationError("stacked system must be square");
  Matrix m = Matrix::Zero(n, n);
  m.leftCols(static_cast<Eigen::Index>(f.dim())) = f.rows().transpose();
  for (std::size_t c = 0; c < s.dim(); ++c) {
    m(static_cast<Eigen::Index>(s.indices()[c]), static_cast<Eigen::Index>(f.dim() + c)) = 1.0;
  }
  Eigen::BDCSVD<Matrix> svd(m);
  return svd.singularValues().minCoeff();
}

ExchangeResult exchange_complement(const FourierSubspace& f) {
  constexpr double kTieRelTol = 1e-12;
  const auto n = static_cast<Eigen::Index>(f.ambient_dim());
  const auto target = n - static_cast<Eigen::Index>(f.dim());
  // Column g holds the part of e_g not yet spanned: starts as (I - Q) e_g.
  const Matrix u = f.rows().transpose();
  Matrix residual = Matrix::Identity(n, n) - u * u.adjoint();
  std::vector<bool> taken(static_cast<std::size_t>(n), false);
  std::vector<std::size_t> kept;
  for (Eigen::Index step = 0; step < target; ++step) {
    const Eigen::VectorXd norms = residual.colwise().norm();
    double best = -1.0;
    for (Eigen::Index g = 0; g < n; ++g) {
      if (!taken[static_cast<std::size_t>(g)]) best = std::max(best, norms(g));
    }
    Eigen::Index pick = 0;
    while (taken[static_cast<std::size_t>(pick)] || norms(pick) < best * (1.0 - kTieRelTol)) ++pick;
    if (!(best > 1e-12)) throw NumericalError("exchange_complement: numerical rank loss while extending the basis");
    const Vector q = residual.col(pick) / best;
    residual -= q * (q.adjoint() * residual);
    taken[static_cast<std::size_t>(pick)] = true;
    kept.push_back(static_cast<std::size_t>(pick));
  }
  std::sort(kept.begin(), kept.end());
  StandardSubspace complement(f.ambient(), std::move(kept));
  const double sigma = stacked_sigma_min(f, complement);
  if (!(sigma > 1e-8)) throw NumericalError("exchange_complement: stacked system is numerically singular");
  return ExchangeResult{std::move(complement), sigma};
}

StandardSubspace random_standard(std::size_t k, std::uint64_t seed, const BasisPtr& ambient) {
  const auto basis = require_basis(ambient);
  if (k > basis->dim()) throw ValidationError("random_standard: k out of range");
  Rng rng(seed);
  return StandardSubspace(basis, random_subset(basis->dim(), k, rng));
}

} // namespace fdetect
