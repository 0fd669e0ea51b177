#include <doctest.h>

#include <algorithm>
#include <vector>

#include <Eigen/LU>

#include "fdetect/errors.hpp"
#include "fdetect/operator.hpp"
#include "support.hpp"

using namespace fdetect;

TEST_CASE("HermitianOperator rejects non-Hermitian input") {
  Matrix a(2, 2);
  a << 1.0, Complex(0, 1), Complex(0, 1), 1.0;
  CHECK_THROWS_AS(HermitianOperator{a}, ValidationError);
  CHECK_THROWS_AS(HermitianOperator{Matrix(2, 3)}, ValidationError);
  a(1, 0) = Complex(0, -1);
  const HermitianOperator h(a);
  CHECK(test::max_abs(h.matrix() - h.matrix().adjoint()) == 0.0);
}

TEST_CASE("eigen on simple operators") {
  const auto id = eigen(HermitianOperator::identity(3));
  CHECK(id.values.size() == 3);
  for (int i = 0; i < 3; ++i) CHECK(id.values(i) == doctest::Approx(1.0).epsilon(1e-15));

  const std::vector<double> d{0.7, 0.2};
  const auto s = eigen(HermitianOperator::diagonal(d));
  CHECK(s.values(0) == doctest::Approx(0.2));
  CHECK(s.values(1) == doctest::Approx(0.7));
  CHECK(s.max() == doctest::Approx(0.7));
  CHECK(operator_norm(HermitianOperator::diagonal(std::vector<double>{-0.9, 0.3})) == doctest::Approx(0.9));
}

TEST_CASE("eigen reconstructs random Hermitian operators") {
  Rng rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    const auto m = static_cast<Eigen::Index>(1 + rng.below(64));
    const HermitianOperator a(test::random_hermitian(rng, m));
    const auto s = eigen(a, true);
    REQUIRE(s.vectors.has_value());
    const Matrix& v = *s.vectors;
    const Matrix recon = v * s.values.cast<Complex>().asDiagonal() * v.adjoint();
    CHECK(test::max_abs(a.matrix() - recon) <= 1e-9);
    for (Eigen::Index i = 1; i < s.values.size(); ++i) CHECK(s.values(i - 1) <= s.values(i));
  }
}

TEST_CASE("upper_potential") {
  const double eps = 1.0 / 16.0;
  CHECK(upper_potential(HermitianOperator::zero(4), std::sqrt(eps)) == doctest::Approx(4.0 / std::sqrt(eps)).epsilon(1e-15));
  CHECK(upper_potential(HermitianOperator::diagonal(std::vector<double>{0.5}), 1.0) == doctest::Approx(2.0));
  CHECK(upper_potential(HermitianOperator::diagonal(std::vector<double>{0.1, 0.3}), 0.5) == doctest::Approx(7.5).epsilon(1e-14));
  CHECK_THROWS_AS(upper_potential(HermitianOperator::diagonal(std::vector<double>{0.1, 0.5}), 0.5), ValidationError);
  CHECK_THROWS_AS(upper_potential(HermitianOperator::diagonal(std::vector<double>{0.1, 0.5}), 0.4), ValidationError);
}

TEST_CASE("upper_potential strictly decreases in the shift") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto m = static_cast<Eigen::Index>(1 + rng.below(8));
    const HermitianOperator a(test::random_pd(rng, m));
    const double top = operator_norm(a);
    double prev = upper_potential(a, top + 1e-3);
    for (int step = 1; step <= 50; ++step) {
      const double cur = upper_potential(a, top + 1e-3 + 0.05 * step);
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("rank_one_update") {
  Vector e1 = Vector::Zero(3);
  e1(0) = 1.0;
  const auto a = rank_one_update(HermitianOperator::zero(3), e1);
  CHECK(a.matrix()(0, 0) == Complex(1.0));
  CHECK(test::max_abs(a.matrix()) == 1.0);
  CHECK(a.trace() == 1.0);

  Vector v(2);
  v << 1.0 / std::sqrt(2.0), Complex(0.0, 1.0 / std::sqrt(2.0));
  const auto b = rank_one_update(HermitianOperator::zero(2), v);
  Matrix expect(2, 2);
  expect << 0.5, Complex(0, -0.5), Complex(0, 0.5), 0.5;
  CHECK(test::max_abs(b.matrix() - expect) < 1e-15);

  Rng rng(2);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = static_cast<Eigen::Index>(1 + rng.below(10));
    const HermitianOperator base(test::random_pd(rng, m));
    const Vector w = test::random_vector(rng, m);
    const auto up = rank_one_update(base, w);
    CHECK(std::abs(up.trace() - base.trace() - w.squaredNorm()) <= 1e-12 * std::max(1.0, up.trace()));
  }
  CHECK_THROWS_AS(rank_one_update(HermitianOperator::zero(3), v), ValidationError);
}

TEST_CASE("sherman_morrison_inverse") {
  const auto id = HermitianOperator::identity(2);
  CHECK(test::max_abs(sherman_morrison_inverse(id, Vector::Zero(2)).matrix() - id.matrix()) == 0.0);

  Vector e1 = Vector::Zero(2);
  e1(0) = 1.0;
  const auto inv = sherman_morrison_inverse(id, e1);
  CHECK(inv.matrix()(0, 0).real() == doctest::Approx(0.5));
  CHECK(inv.matrix()(1, 1).real() == doctest::Approx(1.0));
  CHECK(std::abs(inv.matrix()(0, 1)) == 0.0);

  // 1 + <A^{-1} v, v> = 0 for A^{-1} = -I and |v| = 1.
  CHECK_THROWS_AS(sherman_morrison_inverse(id.scaled(-1.0), e1), NumericalError);
  CHECK_THROWS_AS(sherman_morrison_inverse(id, Vector::Zero(3)), ValidationError);
}

TEST_CASE("sherman_morrison_inverse agrees with direct inversion") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto m = static_cast<Eigen::Index>(1 + rng.below(16));
    const Matrix a = test::random_pd(rng, m);
    const Vector v = test::random_vector(rng, m);
    const Matrix a_inv = a.fullPivLu().inverse();
    const Matrix direct = (a + v * v.adjoint()).fullPivLu().inverse();
    const auto sm = sherman_morrison_inverse(HermitianOperator(0.5 * (a_inv + a_inv.adjoint())), v);
    CHECK(test::max_abs(sm.matrix() - direct) <= 1e-9);
  }
}

TEST_CASE("check_sum_inequality") {
  const std::vector<double> a{1, 2};
  const auto eq = check_sum_inequality(a, std::vector<double>{1, 1});
  CHECK(eq.lhs == 3.0);
  CHECK(eq.rhs == 3.0);
  CHECK(eq.holds);

  const auto r = check_sum_inequality(a, std::vector<double>{3, 1});
  CHECK(r.lhs == 5.0);
  CHECK(r.rhs == 6.0);
  CHECK(r.holds);

  CHECK_THROWS_AS(check_sum_inequality(std::vector<double>{2, 1}, std::vector<double>{3, 1}), ValidationError);
  CHECK_THROWS_AS(check_sum_inequality(a, std::vector<double>{1, 3}), ValidationError);
  CHECK_THROWS_AS(check_sum_inequality(a, std::vector<double>{1, 0}), ValidationError);
  CHECK_THROWS_AS(check_sum_inequality(a, std::vector<double>{1}), ValidationError);
  CHECK_THROWS_AS(check_sum_inequality(std::vector<double>{}, std::vector<double>{}), ValidationError);
}

TEST_CASE("check_sum_inequality holds on random monotone pairs") {
  Rng rng(23);
  for (int trial = 0; trial < 300; ++trial) {
    const auto m = 1 + rng.below(20);
    std::vector<double> a(m);
    std::vector<double> b(m);
    for (auto& x : a) x = rng.uniform(0.01, 10.0);
    for (auto& x : b) x = rng.uniform(0.01, 10.0);
    std::sort(a.begin(), a.end());
    std::sort(b.rbegin(), b.rend());
    const auto r = check_sum_inequality(a, b);
    CHECK(r.holds);
    CHECK(r.rhs - r.lhs >= -1e-12);
  }
}
