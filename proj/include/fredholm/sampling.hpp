#pragma once

// Seeded random instances for the verification suites: subspaces, unitaries,
// nested pairs, operator pairs, Lagrangians, and loops with planted windings.
// All generators are deterministic functions of the seed; per-trial seeds are
// derived by mixing the master seed with the trial index, so parallel runs are
// schedule-independent.

#include "fredholm/core.hpp"
#include "fredholm/extension.hpp"
#include "fredholm/family.hpp"
#include "fredholm/homotopy.hpp"
#include "fredholm/subspace.hpp"
#include "fredholm/symplectic.hpp"

#include <cstdint>
#include <random>
#include <vector>

namespace fredholm {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

/// Per-trial seed: hash of (master seed, trial index).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index) {
  return splitmix64(master ^ splitmix64(index + 0x632be59bd9b4e019ull));
}

using Rng = std::mt19937_64;

inline Matrix random_gaussian(Rng& rng, Index rows, Index cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) m(i, j) = Complex(normal(rng), normal(rng));
  return m;
}

inline Matrix random_hermitian(Rng& rng, Index n) {
  Matrix g = random_gaussian(rng, n, n);
  return 0.5 * (g + g.adjoint());
}

inline Matrix random_unitary(Rng& rng, Index n) {
  if (n == 0) return Matrix(0, 0);
  Eigen::HouseholderQR<Matrix> qr(random_gaussian(rng, n, n));
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return q;
}

inline Subspace random_subspace(Rng& rng, Index ambient, Index dim,
                                const Tolerance& tol = {}) {
  if (dim == 0) return Subspace::zero(ambient);
  return Subspace(orthonormalize(random_gaussian(rng, ambient, dim), tol));
}

/// Random subspace of a given subspace, expressed in the ambient space.
inline Subspace random_subspace_of(Rng& rng, const Subspace& host, Index dim,
                                   const Tolerance& tol = {}) {
  if (dim == 0 || host.dim() == 0) return Subspace::zero(host.ambient());
  Subspace inner = random_subspace(rng, host.dim(), dim, tol);
  return Subspace::from_orthonormal(host.basis() * inner.basis());
}

inline Index random_index(Rng& rng, Index lo, Index hi) {
  std::uniform_int_distribution<Index> dist(lo, hi);
  return dist(rng);
}

/// Random nested pair: outer as a random span, inner as a random subspace of
/// outer through its frame.
inline NestedPair random_nested(Rng& rng, Index ambient,
                                const Tolerance& tol = {}) {
  const Index outer_dim = random_index(rng, 1, ambient);
  const Index inner_dim = random_index(rng, 0, outer_dim);
  Subspace outer = random_subspace(rng, ambient, outer_dim, tol);
  Subspace inner = random_subspace_of(rng, outer, inner_dim, tol);
  return make_nested(inner, outer, tol);
}

inline OperatorPair random_operator_pair(Rng& rng, Index n,
                                         const Tolerance& tol = {}) {
  Matrix action = random_gaussian(rng, n, n);
  const Index max_dim = random_index(rng, 1, n);
  const Index min_dim = random_index(rng, 0, max_dim);
  Subspace dom_max = random_subspace(rng, n, max_dim, tol);
  Subspace dom_min = random_subspace_of(rng, dom_max, min_dim, tol);
  return make_operator_pair(action, dom_max, dom_min, tol);
}

inline Subspace random_lagrangian(Rng& rng, const SymplecticSpace& sp) {
  return lagrangian_from_unitary(sp, random_unitary(rng, sp.plus_dim()));
}

/// Random isotropic subspace of the given dimension: a random subspace of a
/// random Lagrangian.
inline Subspace random_isotropic(Rng& rng, const SymplecticSpace& sp, Index dim,
                                 const Tolerance& tol = {}) {
  return random_subspace_of(rng, random_lagrangian(rng, sp), dim, tol);
}

/// Random unitary commuting with J: block-diagonal in the Λ± bases.
inline Matrix random_symplectic_unitary(Rng& rng, const SymplecticSpace& sp) {
  Matrix w_plus = random_unitary(rng, sp.plus_dim());
  Matrix w_minus = random_unitary(rng, sp.minus_dim());
  return sp.basis_plus * w_plus * sp.basis_plus.adjoint() +
         sp.basis_minus * w_minus * sp.basis_minus.adjoint();
}

/// Random element of the transversal fiber over a random target: a graph over
/// N ⊕ F with a random coordinate map whose E-block vanishes on N. Guaranteed
/// transversal to (inner, outer) with push-forward N.
inline Subspace random_transversal(Rng& rng, const NestedPair& pair,
                                   const Subspace& target_beta,
                                   const Tolerance& tol = {}) {
  Subspace target_ambient = lift_from_boundary(pair, target_beta);
  Subspace e_beta = complement(target_beta, tol);
  Subspace e_ambient = e_beta.dim() > 0 ? lift_from_boundary(pair, e_beta)
                                        : Subspace::zero(pair.ambient);
  const Index n_dim = target_ambient.dim();
  const Index f_dim = pair.exterior.dim();
  const Index e_dim = e_ambient.dim();
  const Index g_dim = pair.inner.dim();
  Matrix mu = random_gaussian(rng, e_dim + g_dim, n_dim + f_dim);
  if (e_dim > 0 && n_dim > 0) mu.topLeftCorner(e_dim, n_dim).setZero();
  Matrix source(pair.ambient, n_dim + f_dim);
  if (n_dim > 0) source.leftCols(n_dim) = target_ambient.basis();
  if (f_dim > 0) source.rightCols(f_dim) = pair.exterior.basis();
  Matrix carrier(pair.ambient, e_dim + g_dim);
  if (e_dim > 0) carrier.leftCols(e_dim) = e_ambient.basis();
  if (g_dim > 0) carrier.rightCols(g_dim) = pair.inner.basis();
  return Subspace(orthonormalize(source + carrier * mu, tol));
}

/// Closed loop of Lagrangians with a planted determinant winding: a one-phase
/// rotation on Λ+ conjugated into general position by a fixed J-commuting
/// unitary and applied to a base Lagrangian. For every fixed Lagrangian m,
/// winding(det(−κ(l_x; m))) over the loop equals w.
inline SubspaceLoop planted_lagrangian_loop(Rng& rng,
                                            const SymplecticSpace& sp,
                                            const Subspace& base, long w,
                                            std::size_t sample_count) {
  if (sp.plus_dim() == 0)
    throw InvalidInput("planted loop: space has no Λ+ directions");
  Matrix conjugator = random_symplectic_unitary(rng, sp);
  SubspaceLoop loop;
  loop.closed = true;
  loop.params.reserve(sample_count);
  loop.samples.reserve(sample_count);
  for (std::size_t j = 0; j < sample_count; ++j) {
    const double x =
        static_cast<double>(j) / static_cast<double>(sample_count - 1);
    Vector phases = Vector::Ones(sp.plus_dim());
    // det of the Λ+ block is e^{-2πiwx}; the relative unitary inverts it.
    phases(0) = std::exp(Complex(0.0, -2.0 * kPi * static_cast<double>(w) * x));
    Matrix rotation =
        sp.basis_plus * phases.asDiagonal() * sp.basis_plus.adjoint() +
        sp.basis_minus * sp.basis_minus.adjoint();
    Matrix moved = conjugator * rotation * conjugator.adjoint() * base.basis();
    loop.params.push_back(x);
    loop.samples.push_back(Subspace::from_orthonormal(std::move(moved)));
  }
  return loop;
}

/// Random Lagrangian transversal to an isotropic pair (inner, inner^ω) with a
/// prescribed Lagrangian push-forward: the graph of −ψJ for a random Hermitian
/// ψ with vanishing upper-left block.
inline Subspace random_lagrangian_transversal(Rng& rng,
                                              const SymplecticSpace& sp,
                                              const NestedPair& pair,
                                              const Subspace& target_beta,
                                              const Tolerance& tol = {}) {
  Subspace target_ambient = lift_from_boundary(pair, target_beta);
  const Index n_dim = target_ambient.dim();
  const Index g_dim = pair.inner.dim();
  Matrix psi = random_hermitian(rng, n_dim + g_dim);
  if (n_dim > 0) psi.topLeftCorner(n_dim, n_dim).setZero();
  Matrix source(sp.ambient, n_dim + g_dim);
  if (n_dim > 0) source.leftCols(n_dim) = target_ambient.basis();
  if (g_dim > 0) source.rightCols(g_dim) = sp.j * pair.inner.basis();
  Matrix carrier(sp.ambient, n_dim + g_dim);
  if (n_dim > 0) carrier.leftCols(n_dim) = sp.j * target_ambient.basis();
  if (g_dim > 0) carrier.rightCols(g_dim) = pair.inner.basis();
  Matrix mu = -psi * (carrier.adjoint() * sp.j * source);
  return Subspace(orthonormalize(source + carrier * mu, tol));
}

}  // namespace fredholm
