#include <catch2/catch_amalgamated.hpp>

#include "fredholm/sampling.hpp"
#include "fredholm/subspace.hpp"

using namespace fredholm;

namespace {

Subspace coordinate_span(Index ambient, std::initializer_list<Index> axes) {
  Matrix m = Matrix::Zero(ambient, static_cast<Index>(axes.size()));
  Index j = 0;
  for (Index axis : axes) m(axis, j++) = 1.0;
  return Subspace::from_orthonormal(std::move(m));
}

}  // namespace

TEST_CASE("projector examples") {
  REQUIRE(spectral_norm(projector(coordinate_span(2, {0})) -
                        (Matrix(2, 2) << 1, 0, 0, 0).finished()) < 1e-15);

  Matrix diag_line(2, 1);
  diag_line << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Matrix p = projector(Subspace::from_orthonormal(diag_line));
  Matrix expected(2, 2);
  expected << 0.5, 0.5, 0.5, 0.5;
  REQUIRE((p - expected).cwiseAbs().maxCoeff() < 1e-14);

  REQUIRE(spectral_norm(projector(Subspace::full(3)) - Matrix::Identity(3, 3)) <
          1e-15);
}

TEST_CASE("complement examples") {
  Subspace s = coordinate_span(2, {0});
  Subspace c = complement(s);
  REQUIRE(c.dim() == 1);
  REQUIRE(gap_distance(c, coordinate_span(2, {1})) < 1e-13);

  REQUIRE(complement(Subspace::zero(3)).dim() == 3);
  REQUIRE(complement(Subspace::full(3)).dim() == 0);

  Matrix line(2, 1);
  line << 1.0 / std::sqrt(2.0), Complex(0.0, 1.0) / std::sqrt(2.0);
  Subspace conj_line = complement(Subspace::from_orthonormal(line));
  Matrix expected(2, 1);
  expected << 1.0 / std::sqrt(2.0), Complex(0.0, -1.0) / std::sqrt(2.0);
  REQUIRE(gap_distance(conj_line, Subspace::from_orthonormal(expected)) <
          1e-12);
}

TEST_CASE("intersect examples") {
  Subspace l = coordinate_span(4, {0, 1});
  Subspace m = coordinate_span(4, {1, 2});
  Subspace cap = intersect(l, m);
  REQUIRE(cap.dim() == 1);
  REQUIRE(gap_distance(cap, coordinate_span(4, {1})) < 1e-12);

  Rng rng(11);
  Subspace s = random_subspace(rng, 5, 3);
  REQUIRE(gap_distance(intersect(s, s), s) < 1e-12);

  REQUIRE(intersect(coordinate_span(2, {0}), coordinate_span(2, {1})).dim() ==
          0);
}

TEST_CASE("sum examples") {
  REQUIRE(gap_distance(sum(coordinate_span(2, {0}), coordinate_span(2, {1})),
                       Subspace::full(2)) < 1e-13);
  Rng rng(13);
  Subspace s = random_subspace(rng, 4, 2);
  REQUIRE(gap_distance(sum(s, Subspace::zero(4)), s) < 1e-14);
  REQUIRE(sum(coordinate_span(4, {0, 1}), coordinate_span(4, {1, 2})).dim() ==
          3);
}

TEST_CASE("gap distance examples") {
  Rng rng(17);
  Subspace s = random_subspace(rng, 6, 3);
  REQUIRE(gap_distance(s, s) == 0.0);

  REQUIRE(gap_distance(coordinate_span(2, {0}), coordinate_span(2, {1})) ==
          Catch::Approx(1.0).margin(1e-14));

  const double theta = 0.3;
  Matrix rotated(2, 1);
  rotated << std::cos(theta), std::sin(theta);
  REQUIRE(gap_distance(coordinate_span(2, {0}),
                       Subspace::from_orthonormal(rotated)) ==
          Catch::Approx(std::sin(theta)).margin(1e-13));
}

TEST_CASE("pair_index examples") {
  PairIndexReport report =
      pair_index(coordinate_span(4, {0, 1}), coordinate_span(4, {1, 2}));
  REQUIRE(report.dim_cap == 1);
  REQUIRE(report.codim_sum == 1);
  REQUIRE(report.index == 0);
  REQUIRE_FALSE(report.transversal);

  // Transversal pairs have index zero.
  Rng rng(23);
  Subspace s = random_subspace(rng, 6, 2);
  Subspace t = complement(s);
  PairIndexReport tr = pair_index(s, t);
  REQUIRE(tr.transversal);
  REQUIRE(tr.index == 0);

  // (L, L) has index 2k - n.
  Subspace l = random_subspace(rng, 7, 3);
  REQUIRE(pair_index(l, l).index == 2 * 3 - 7);
}

TEST_CASE("map_subspace examples") {
  Rng rng(29);
  Subspace s = random_subspace(rng, 3, 2);
  REQUIRE(gap_distance(map_subspace(Matrix::Identity(3, 3), s), s) < 1e-13);

  Matrix f = Matrix::Zero(2, 2);
  f(0, 0) = 2.0;
  f(1, 1) = 1.0;
  Matrix diag_line(2, 1);
  diag_line << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
  Subspace image = map_subspace(f, Subspace::from_orthonormal(diag_line));
  Matrix expected(2, 1);
  expected << 2.0 / std::sqrt(5.0), 1.0 / std::sqrt(5.0);
  REQUIRE(gap_distance(image, Subspace::from_orthonormal(expected)) < 1e-13);

  REQUIRE_THROWS_AS(map_subspace(Matrix::Zero(3, 3), s), SingularMap);

  // Unitary maps are gap isometries.
  Matrix u = random_unitary(rng, 4);
  Subspace a = random_subspace(rng, 4, 2);
  Subspace b = random_subspace(rng, 4, 3);
  REQUIRE(std::abs(gap_distance(map_subspace(u, a), map_subspace(u, b)) -
                   gap_distance(a, b)) < 1e-12);
}

TEST_CASE("dimension identity and duality on random pairs") {
  Rng rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = random_index(rng, 1, 9);
    Subspace s = random_subspace(rng, n, random_index(rng, 0, n));
    Subspace t = random_subspace(rng, n, random_index(rng, 0, n));

    const Index cap = intersect(s, t).dim();
    const Index total = sum(s, t).dim();
    REQUIRE(cap + total == s.dim() + t.dim());

    Subspace dual = complement(sum(complement(s), complement(t)));
    REQUIRE(same_subspace(dual, intersect(s, t)));
  }
}

TEST_CASE("pair index equals dim s + dim t - n") {
  Rng rng(37);
  for (int trial = 0; trial < 40; ++trial) {
    const Index n = random_index(rng, 1, 9);
    Subspace s = random_subspace(rng, n, random_index(rng, 0, n));
    Subspace t = random_subspace(rng, n, random_index(rng, 0, n));
    REQUIRE(pair_index(s, t).index == s.dim() + t.dim() - n);
  }
}

TEST_CASE("pair index is additive over orthogonal sums") {
  Rng rng(41);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n1 = random_index(rng, 1, 6);
    const Index n2 = random_index(rng, 1, 6);
    Subspace s1 = random_subspace(rng, n1, random_index(rng, 0, n1));
    Subspace t1 = random_subspace(rng, n1, random_index(rng, 0, n1));
    Subspace s2 = random_subspace(rng, n2, random_index(rng, 0, n2));
    Subspace t2 = random_subspace(rng, n2, random_index(rng, 0, n2));
    REQUIRE(pair_index(direct_sum(s1, s2), direct_sum(t1, t2)).index ==
            pair_index(s1, t1).index + pair_index(s2, t2).index);
  }
}

TEST_CASE("pair index is invariant under unitary maps") {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = random_index(rng, 2, 8);
    Subspace s = random_subspace(rng, n, random_index(rng, 0, n));
    Subspace t = random_subspace(rng, n, random_index(rng, 0, n));
    Matrix u = random_unitary(rng, n);
    PairIndexReport before = pair_index(s, t);
    PairIndexReport after = pair_index(map_subspace(u, s), map_subspace(u, t));
    REQUIRE(before.index == after.index);
    REQUIRE(before.dim_cap == after.dim_cap);
    REQUIRE(before.codim_sum == after.codim_sum);
  }
}

TEST_CASE("span loader rejects declared-dimension mismatch via rank") {
  Matrix generators(3, 2);
  generators << 1.0, 2.0, 0.0, 0.0, 1.0, 2.0;
  REQUIRE(Subspace::span(generators).dim() == 1);
}
