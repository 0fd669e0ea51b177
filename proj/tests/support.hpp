// Test-only helpers and independent oracles. Nothing here calls the code paths
// it is used to check.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "fdetect/group.hpp"
#include "fdetect/operator.hpp"
#include "fdetect/rng.hpp"
#include "fdetect/subspaces.hpp"

namespace fdetect::test {

inline Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = Complex(rng.normal(), rng.normal());
  }
  return m;
}

inline Vector random_vector(Rng& rng, Eigen::Index m, double scale = 1.0) {
  return scale * random_matrix(rng, m, 1).col(0);
}

inline Matrix random_hermitian(Rng& rng, Eigen::Index m) {
  const Matrix a = random_matrix(rng, m, m);
  return 0.5 * (a + a.adjoint());
}

/// Positive definite with eigenvalues at least `floor`.
inline Matrix random_pd(Rng& rng, Eigen::Index m, double floor = 0.1) {
  const Matrix a = random_matrix(rng, m, m);
  return a * a.adjoint() / static_cast<double>(m) + floor * Matrix::Identity(m, m);
}

/// Direct character evaluation exp(2 pi i sum a_t b_t / n_t) in floating point,
/// with tuples produced by nested enumeration rather than Group::to_tuple.
inline std::vector<std::vector<int>> enumerate_tuples(const std::vector<int>& factors) {
  std::vector<std::vector<int>> out{{}};
  for (int f : factors) {
    std::vector<std::vector<int>> next;
    for (const auto& prefix : out) {
      for (int v = 0; v < f; ++v) {
        auto t = prefix;
        t.push_back(v);
        next.push_back(std::move(t));
      }
    }
    out = std::move(next);
  }
  return out;
}

inline Matrix dft_oracle(const std::vector<int>& factors) {
  const auto tuples = enumerate_tuples(factors);
  const auto n = static_cast<Eigen::Index>(tuples.size());
  Matrix m(n, n);
  for (Eigen::Index phi = 0; phi < n; ++phi) {
    for (Eigen::Index g = 0; g < n; ++g) {
      double turns = 0.0;
      for (std::size_t t = 0; t < factors.size(); ++t) {
        turns += static_cast<double>(tuples[static_cast<std::size_t>(phi)][t] * tuples[static_cast<std::size_t>(g)][t]) /
                 factors[t];
      }
      m(phi, g) = std::polar(1.0 / std::sqrt(static_cast<double>(n)), 2.0 * M_PI * turns);
    }
  }
  return m;
}

/// Sylvester Hadamard matrix of size 2^p scaled to be unitary.
inline Matrix sylvester_hadamard(int p) {
  Matrix h(1, 1);
  h(0, 0) = 1.0;
  for (int i = 0; i < p; ++i) {
    Matrix next(2 * h.rows(), 2 * h.rows());
    next << h, h, h, -h;
    h = next;
  }
  return h / std::sqrt(static_cast<double>(h.rows()));
}

/// Flat unitary basis D1 U D2 with random diagonal phases; not a character table.
inline Matrix phased_basis(const Matrix& u, Rng& rng) {
  Matrix out = u;
  for (Eigen::Index r = 0; r < u.rows(); ++r) out.row(r) *= std::polar(1.0, 2.0 * M_PI * rng.uniform());
  for (Eigen::Index c = 0; c < u.cols(); ++c) out.col(c) *= std::polar(1.0, 2.0 * M_PI * rng.uniform());
  return out;
}

/// ||PQ|| through the dense n x n route: sqrt(lambda_max(P Q P)).
inline double dense_overlap(const StandardSubspace& e, const FourierSubspace& f) {
  const Matrix p = projection(e).matrix();
  const Matrix q = projection(f).matrix();
  const Matrix pqp = p * q * p;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (pqp + pqp.adjoint()), Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(0.0, es.eigenvalues().maxCoeff()));
}

inline double top_eig(const Matrix& a) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (a + a.adjoint()), Eigen::EigenvaluesOnly);
  return es.eigenvalues().maxCoeff();
}

inline double max_abs(const Matrix& a) { return a.size() ? a.cwiseAbs().maxCoeff() : 0.0; }

} // namespace fdetect::test
