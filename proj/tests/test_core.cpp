#include <catch2/catch_amalgamated.hpp>

#include "fredholm/core.hpp"
#include "fredholm/sampling.hpp"
#include "fredholm/subspace.hpp"

using namespace fredholm;

namespace {

Matrix mat2(Complex a, Complex b, Complex c, Complex d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST_CASE("orthonormalize normalizes a single column") {
  Matrix m(2, 1);
  m << 3.0, 4.0;
  Frame f = orthonormalize(m);
  REQUIRE(f.dim() == 1);
  // Up to a unit phase the column is (0.6, 0.8).
  Vector expected(2);
  expected << 0.6, 0.8;
  REQUIRE(std::abs(std::abs(f.columns.col(0).dot(expected)) - 1.0) < 1e-12);
  REQUIRE(frame_defect(f) < 1e-14);
}

TEST_CASE("orthonormalize collapses duplicate columns") {
  Matrix m(2, 2);
  m << 1.0, 1.0, 0.0, 0.0;
  Frame f = orthonormalize(m);
  REQUIRE(f.dim() == 1);
  Vector e1(2);
  e1 << 1.0, 0.0;
  REQUIRE(std::abs(std::abs(f.columns.col(0).dot(e1)) - 1.0) < 1e-12);
}

TEST_CASE("orthonormalize recovers the true column space of a product") {
  Rng rng(12345);
  Matrix b = random_gaussian(rng, 6, 3);
  Matrix c = random_gaussian(rng, 3, 4);
  Frame f = orthonormalize(b * c);
  REQUIRE(f.dim() == 3);
  // Every column of b must lie in the computed span.
  Matrix p = f.columns * f.columns.adjoint();
  REQUIRE(spectral_norm(b - p * b) < 1e-10 * spectral_norm(b));
}

TEST_CASE("orthonormalize rejects non-finite input") {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 0) = std::numeric_limits<double>::quiet_NaN();
  REQUIRE_THROWS_AS(orthonormalize(m), NonFinite);
}

TEST_CASE("numerical_rank threshold behavior") {
  REQUIRE(numerical_rank(Matrix::Zero(4, 4)) == 0);

  Matrix d = Matrix::Zero(2, 2);
  d(0, 0) = 1.0;
  d(1, 1) = 1e-14;
  REQUIRE(numerical_rank(d, Tolerance{1e-10, 1e-8}) == 1);

  Rng rng(99);
  Matrix b = random_gaussian(rng, 5, 2);
  Matrix c = random_gaussian(rng, 2, 5);
  REQUIRE(numerical_rank(b * c) == 2);
}

TEST_CASE("idempotent_to_projector fixes orthogonal projectors") {
  Rng rng(7);
  Subspace s = random_subspace(rng, 4, 2);
  Matrix p = projector(s);
  Matrix q = idempotent_to_projector(p);
  REQUIRE((q - p).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("idempotent_to_projector on a skew idempotent") {
  Matrix t = mat2(1.0, 1.0, 0.0, 0.0);
  Matrix p = idempotent_to_projector(t);
  Matrix expected = mat2(1.0, 0.0, 0.0, 0.0);
  REQUIRE((p - expected).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("idempotent_to_projector maps zero to zero") {
  Matrix t = Matrix::Zero(3, 3);
  REQUIRE(idempotent_to_projector(t).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("idempotent_to_projector rejects non-idempotents") {
  Matrix t = mat2(0.5, 0.0, 0.0, 0.5);
  REQUIRE_THROWS_AS(idempotent_to_projector(t), NotIdempotent);
}

TEST_CASE("idempotent_to_projector reports a singular pivot") {
  // With a loose gap tolerance diag(1/2, 1) passes the idempotent test, but
  // t + t^H - 1 = diag(0, 1) is singular.
  Matrix t = mat2(0.5, 0.0, 0.0, 1.0);
  Tolerance loose{1e-10, 0.3};
  REQUIRE_THROWS_AS(idempotent_to_projector(t, loose), SingularPivot);
}

TEST_CASE("idempotent_to_projector agrees with range orthonormalization") {
  Rng rng(2024);
  for (int trial = 0; trial < 25; ++trial) {
    const Index n = random_index(rng, 2, 8);
    const Index k = random_index(rng, 0, n);
    Subspace s = random_subspace(rng, n, k);
    Matrix similarity =
        random_gaussian(rng, n, n) + 3.0 * Matrix::Identity(n, n);
    Matrix t = similarity * projector(s) * similarity.inverse();
    if (spectral_norm(t * t - t) > 1e-9) continue;  // ill-conditioned draw
    Matrix p = idempotent_to_projector(t);
    Subspace range = Subspace::span(t);
    REQUIRE(spectral_norm(p - projector(range)) < 1e-8);
  }
}

TEST_CASE("orthonormalize is idempotent up to gap") {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const Index n = random_index(rng, 1, 10);
    const Index k = random_index(rng, 0, n);
    Subspace s = random_subspace(rng, n, k);
    Frame again = orthonormalize(s.basis());
    REQUIRE(again.dim() == k);
    REQUIRE(gap_distance(s, Subspace(again)) < 1e-13);
    REQUIRE(frame_defect(s.frame()) <= 1e-13);
  }
}

TEST_CASE("tolerance validation") {
  REQUIRE_NOTHROW(validate(Tolerance{}));
  REQUIRE_THROWS_AS(validate(Tolerance{0.0, 1e-8}), InvalidInput);
  REQUIRE_THROWS_AS(validate(Tolerance{1e-10, 1.5}), InvalidInput);
}
