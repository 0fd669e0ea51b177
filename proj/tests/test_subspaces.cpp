#include <doctest.h>

#include <Eigen/SVD>

#include "fdetect/errors.hpp"
#include "fdetect/subspaces.hpp"
#include "support.hpp"

using namespace fdetect;

namespace {

BasisPtr group_basis(std::vector<int> factors) { return share(fourier_basis(make_group(factors))); }

std::vector<std::size_t> all_indices(std::size_t n) {
  std::vector<std::size_t> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = i;
  return v;
}

} // namespace

TEST_CASE("subspace construction validates indices") {
  const auto b = group_basis({8});
  CHECK(StandardSubspace(b, {3, 1}).indices() == std::vector<std::size_t>{1, 3});
  CHECK_THROWS_AS(StandardSubspace(b, {1, 1}), ValidationError);
  CHECK_THROWS_AS(StandardSubspace(b, {8}), ValidationError);
  CHECK_THROWS_AS(FourierSubspace(b, {9}), ValidationError);
  CHECK_THROWS_AS(FourierSubspace(nullptr, {}), ValidationError);
}

TEST_CASE("index set literals") {
  CHECK(parse_index_set("0,3,12", 16) == std::vector<std::size_t>{0, 3, 12});
  CHECK(parse_index_set("", 16).empty());
  CHECK(parse_index_set("all", 4) == all_indices(4));
  const auto r = parse_index_set("random:5:42", 16);
  CHECK(r.size() == 5);
  CHECK(r == parse_index_set("random:5:42", 16));
  CHECK(std::is_sorted(r.begin(), r.end()));
  CHECK_THROWS_AS(parse_index_set("1,x", 16), ValidationError);
  CHECK_THROWS_AS(parse_index_set("random:20:1", 16), ValidationError);
  CHECK_THROWS_AS(parse_index_set("random:3", 16), ValidationError);
  CHECK_THROWS_AS(parse_index_set("1,1", 16), ValidationError);
  CHECK_THROWS_AS(parse_index_set("16", 16), ValidationError);
}

TEST_CASE("projections") {
  const auto b = group_basis({4});
  const auto full = projection(StandardSubspace(b, all_indices(4)));
  CHECK(test::max_abs(full.matrix() - Matrix::Identity(4, 4)) == 0.0);
  CHECK(test::max_abs(projection(StandardSubspace(b, {})).matrix()) == 0.0);

  const auto q = projection(FourierSubspace(b, {0}));
  for (Eigen::Index i = 0; i < 4; ++i) {
    for (Eigen::Index j = 0; j < 4; ++j) CHECK(std::abs(q.matrix()(i, j) - Complex(0.25)) < 1e-15);
  }

  Rng rng(4);
  for (const auto& factors : std::vector<std::vector<int>>{{12}, {2, 8}, {3, 3, 2}}) {
    const auto basis = group_basis(factors);
    const auto n = basis->dim();
    for (int trial = 0; trial < 10; ++trial) {
      const auto t = random_subset(n, rng.below(n + 1), rng);
      const auto s = random_subset(n, rng.below(n + 1), rng);
      for (const auto& p : {projection(FourierSubspace(basis, t)), projection(StandardSubspace(basis, s))}) {
        CHECK(test::max_abs(p.matrix() * p.matrix() - p.matrix()) <= 1e-10);
        CHECK(test::max_abs(p.matrix() - p.matrix().adjoint()) == 0.0);
      }
      CHECK(std::abs(projection(FourierSubspace(basis, t)).trace() - static_cast<double>(t.size())) <= 1e-9);
    }
  }
}

TEST_CASE("overlap_norm examples") {
  const auto b4 = group_basis({4});
  CHECK(overlap_norm(StandardSubspace(b4, all_indices(4)), FourierSubspace(b4, {1})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(overlap_norm(StandardSubspace(b4, {0}), FourierSubspace(b4, {1})) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(overlap_norm(StandardSubspace(b4, {0, 2}), FourierSubspace(b4, {0, 2})) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(overlap_norm(StandardSubspace(b4, {}), FourierSubspace(b4, {0, 2})) == 0.0);
  CHECK_THROWS_AS(overlap_norm(StandardSubspace(group_basis({8}), {0}), FourierSubspace(b4, {0})), ValidationError);
}

TEST_CASE("overlap_norm agrees with the dense ||PQP|| route") {
  Rng rng(8);
  for (const auto& factors : std::vector<std::vector<int>>{{16}, {4, 4}, {3, 5}, {2, 2, 2, 2}}) {
    const auto basis = group_basis(factors);
    const auto n = basis->dim();
    for (int trial = 0; trial < 25; ++trial) {
      const StandardSubspace e(basis, random_subset(n, rng.below(n + 1), rng));
      const FourierSubspace f(basis, random_subset(n, rng.below(n + 1), rng));
      const double v = overlap_norm(e, f);
      CHECK(v >= 0.0);
      CHECK(v <= 1.0);
      CHECK(std::abs(v - test::dense_overlap(e, f)) <= 1e-10);
    }
  }
}

TEST_CASE("single_vector_detection equals |S|/|G| on any flat basis") {
  const auto b8 = group_basis({8});
  CHECK(single_vector_detection(StandardSubspace(b8, {0, 1}), 3) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(single_vector_detection(StandardSubspace(b8, {}), 5) == 0.0);
  CHECK(single_vector_detection(StandardSubspace(b8, all_indices(8)), 5) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(single_vector_detection(StandardSubspace(b8, {0}), 8), ValidationError);

  Rng rng(12);
  std::vector<BasisPtr> bases{share(FlatBasis(test::sylvester_hadamard(3), FlatBasis::Source::LoadedFile)),
                              share(FlatBasis(test::sylvester_hadamard(5), FlatBasis::Source::LoadedFile)),
                              share(FlatBasis(test::phased_basis(fourier_basis(make_group({3, 7})).matrix(), rng),
                                              FlatBasis::Source::LoadedFile))};
  for (const auto& basis : bases) {
    const auto n = basis->dim();
    for (int trial = 0; trial < 50; ++trial) {
      const StandardSubspace e(basis, random_subset(n, rng.below(n + 1), rng));
      const auto phi = rng.below(n);
      CHECK(std::abs(single_vector_detection(e, phi) - static_cast<double>(e.dim()) / static_cast<double>(n)) <= 1e-12);
    }
  }
}

TEST_CASE("check_uncertainty verdicts") {
  const auto b4 = group_basis({4});
  const auto v = check_uncertainty(StandardSubspace(b4, {0}), FourierSubspace(b4, {0, 2}));
  CHECK(v.multiplicative_applies);
  CHECK_FALSE(v.additive_applies);
  CHECK_FALSE(v.intersects);
  CHECK(v.overlap_norm == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
  CHECK(v.consistent());

  const auto comb = check_uncertainty(StandardSubspace(b4, {0, 2}), FourierSubspace(b4, {0, 2}));
  CHECK_FALSE(comb.multiplicative_applies);
  CHECK(comb.intersects);
  CHECK(comb.consistent());

  // Additive form needs a group Fourier basis of prime order.
  const auto b5 = group_basis({5});
  CHECK(check_uncertainty(StandardSubspace(b5, {0, 1, 2}), FourierSubspace(b5, {0, 1})).additive_applies);
  const auto loaded = share(FlatBasis(b5->matrix(), FlatBasis::Source::LoadedFile));
  CHECK_FALSE(check_uncertainty(StandardSubspace(loaded, {0, 1, 2}), FourierSubspace(loaded, {0, 1})).additive_applies);
}

TEST_CASE("no intersections under the additive bound for p = 5 and 7") {
  for (int p : {5, 7}) {
    const auto basis = group_basis({p});
    const auto n = static_cast<std::size_t>(p);
    std::size_t checked = 0;
    for (std::uint32_t sm = 1; sm < (1u << n); ++sm) {
      for (std::uint32_t tm = 1; tm < (1u << n); ++tm) {
        if (std::popcount(sm) + std::popcount(tm) > p) continue;
        std::vector<std::size_t> s;
        std::vector<std::size_t> t;
        for (std::size_t i = 0; i < n; ++i) {
          if (sm >> i & 1u) s.push_back(i);
          if (tm >> i & 1u) t.push_back(i);
        }
        const auto v = check_uncertainty(StandardSubspace(basis, s), FourierSubspace(basis, t));
        REQUIRE(v.additive_applies);
        CHECK_FALSE(v.intersects);
        ++checked;
      }
    }
    CHECK(checked > 0);
  }
}

TEST_CASE("comb example") {
  const auto ex2 = comb_example(2);
  CHECK(ex2.group.order() == 4);
  const double expect2[4] = {2, 0, 2, 0};
  for (int a = 0; a < 4; ++a) CHECK(std::abs(ex2.f[static_cast<std::size_t>(a)] - Complex(expect2[a])) <= 1e-12);

  const auto ex3 = comb_example(3);
  CHECK(ex3.support.indices() == std::vector<std::size_t>{0, 3, 6});
  CHECK(ex3.characters.indices() == std::vector<std::size_t>{0, 3, 6});

  for (int n = 2; n <= 8; ++n) {
    const auto ex = comb_example(n);
    CHECK(ex.support.dim() * ex.characters.dim() == ex.group.order());
    for (std::size_t a = 0; a < ex.f.size(); ++a) {
      // Geometric sum oracle: sum_b e^{2 pi i a b / n}.
      Complex direct = 0.0;
      for (int b = 0; b < n; ++b) direct += std::polar(1.0, 2.0 * M_PI * static_cast<double>(a) * b / n);
      CHECK(std::abs(ex.f[a] - direct) <= 1e-9);
    }
    CHECK(overlap_norm(ex.support, ex.characters) >= 1.0 - 1e-9);
  }
  CHECK_THROWS_AS(comb_example(1), ValidationError);
  CHECK_THROWS_AS(comb_example(65), ValidationError);
}

TEST_CASE("exchange_complement") {
  const auto b4 = group_basis({4});
  const auto empty = exchange_complement(FourierSubspace(b4, {}));
  CHECK(empty.complement.indices() == all_indices(4));
  const auto one = exchange_complement(FourierSubspace(b4, {0}));
  // Residuals tie by symmetry at every step, so the smallest indices win.
  CHECK(one.complement.indices() == std::vector<std::size_t>{0, 1, 2});
  CHECK(one.sigma_min > 1e-8);
  // Independent check: build the stacked matrix and take its SVD here.
  Matrix m = Matrix::Zero(4, 4);
  m.col(0) = b4->matrix().row(0).transpose();
  m(0, 1) = m(1, 2) = m(2, 3) = 1.0;
  CHECK(one.sigma_min == doctest::Approx(Eigen::JacobiSVD<Matrix>(m).singularValues().minCoeff()).epsilon(1e-12));
  CHECK(exchange_complement(FourierSubspace(b4, all_indices(4))).complement.dim() == 0);

  Rng rng(31);
  for (const auto& factors : std::vector<std::vector<int>>{{12}, {16}, {4, 6}, {2, 2, 2, 2}}) {
    const auto basis = group_basis(factors);
    const auto n = basis->dim();
    for (int trial = 0; trial < 8; ++trial) {
      const FourierSubspace f(basis, random_subset(n, rng.below(n + 1), rng));
      const auto ex = exchange_complement(f);
      CHECK(ex.complement.dim() == n - f.dim());
      CHECK(ex.sigma_min > 1e-8);
      if (f.dim() > 0 && ex.complement.dim() > 0) CHECK(overlap_norm(ex.complement, f) < 1.0 - 1e-6);
    }
  }
}

TEST_CASE("random_standard is deterministic and uniform in size") {
  const auto b = group_basis({16});
  CHECK(random_standard(0, 1, b).dim() == 0);
  CHECK(random_standard(16, 1, b).indices() == all_indices(16));
  CHECK(random_standard(5, 99, b).indices() == random_standard(5, 99, b).indices());
  CHECK(random_standard(5, 99, b).indices() != random_standard(5, 100, b).indices());
  CHECK_THROWS_AS(random_standard(17, 1, b), ValidationError);

  // Each element lands in a 4-subset of 16 with probability 1/4.
  std::vector<int> hits(16, 0);
  for (std::uint64_t seed = 0; seed < 4000; ++seed) {
    const auto s = random_standard(4, seed, b);
    for (auto g : s.indices()) ++hits[g];
  }
  for (int h : hits) CHECK(std::abs(h - 1000) < 120);
}
