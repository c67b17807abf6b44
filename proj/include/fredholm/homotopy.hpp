#pragma once

// Canonical index-preserving homotopies. A subspace m transversal to
// (inner, outer) with push-forward N is the graph of a linear map
// μ: N ⊕ F → E ⊕ inner (E = β ⊖ N, F = ambient ⊖ outer) whose E-block
// vanishes on N; the linear path (1−t)·μ deforms m to N ⊕ F without ever
// leaving the transversal fiber, and with the push-forward pinned to N.
// In the symplectic case E = J·N and F = J·inner, μ corresponds to a
// Hermitian ψ = μ∘J with vanishing upper-left block, and the same linear path
// stays Lagrangian.

#include "fredholm/core.hpp"
#include "fredholm/extension.hpp"
#include "fredholm/subspace.hpp"
#include "fredholm/symplectic.hpp"

namespace fredholm {

struct TransversalCoordinates {
  NestedPair nested;
  Subspace target;          // N = push_forward(m), in β-coordinates
  Matrix mu;                // (E ⊕ inner)-coords <- (N ⊕ F)-coords
  Matrix graph_basis;       // [N | F] ambient frame, the graph source
  Matrix complement_basis;  // [E | inner] ambient frame, the graph target
  Index target_dim = 0;     // dim N
  Index exterior_dim = 0;   // dim F
  Index cotarget_dim = 0;   // dim E
  Index inner_dim = 0;
  Tolerance tol;
};

namespace detail {

inline TransversalCoordinates build_coordinates(const NestedPair& pair,
                                                const Subspace& m,
                                                const Subspace& e_ambient,
                                                const Subspace& f_ambient,
                                                const Subspace& target_beta,
                                                const Tolerance& tol) {
  TransversalCoordinates c;
  c.nested = pair;
  c.target = target_beta;
  c.tol = tol;
  Subspace target_ambient = lift_from_boundary(pair, target_beta);
  c.target_dim = target_ambient.dim();
  c.exterior_dim = f_ambient.dim();
  c.cotarget_dim = e_ambient.dim();
  c.inner_dim = pair.inner.dim();

  const Index source_dim = c.target_dim + c.exterior_dim;
  if (m.dim() != source_dim)
    throw NotTransversal("coordinates: dim m = " + std::to_string(m.dim()) +
                         " but the transversal fiber has dimension " +
                         std::to_string(source_dim));
  c.graph_basis = Matrix(pair.ambient, source_dim);
  if (c.target_dim > 0)
    c.graph_basis.leftCols(c.target_dim) = target_ambient.basis();
  if (c.exterior_dim > 0)
    c.graph_basis.rightCols(c.exterior_dim) = f_ambient.basis();
  c.complement_basis = Matrix(pair.ambient, c.cotarget_dim + c.inner_dim);
  if (c.cotarget_dim > 0)
    c.complement_basis.leftCols(c.cotarget_dim) = e_ambient.basis();
  if (c.inner_dim > 0)
    c.complement_basis.rightCols(c.inner_dim) = pair.inner.basis();

  Matrix source_coords = c.graph_basis.adjoint() * m.basis();
  Eigen::JacobiSVD<Matrix> svd(source_coords);
  if (source_dim > 0) {
    const RealVector& sv = svd.singularValues();
    if (sv(sv.size() - 1) <=
        tol.rank_rel * static_cast<double>(source_dim) * sv(0))
      throw NotTransversal("coordinates: m is not a graph over N ⊕ F");
  }
  Matrix target_coords = c.complement_basis.adjoint() * m.basis();
  c.mu = source_dim > 0 ? Matrix(target_coords * source_coords.inverse())
                        : Matrix(c.cotarget_dim + c.inner_dim, 0);

  // The E-block on N vanishes for elements of the transversal fiber; anything
  // beyond roundoff means the inputs were inconsistent.
  if (c.cotarget_dim > 0 && c.target_dim > 0) {
    Matrix block = c.mu.topLeftCorner(c.cotarget_dim, c.target_dim);
    if (spectral_norm(block) > tol.gap_abs)
      throw FormulaViolation("coordinates: E-block of mu on N is not zero");
    c.mu.topLeftCorner(c.cotarget_dim, c.target_dim).setZero();
  }
  return c;
}

}  // namespace detail

/// Banach coordinates of a subspace transversal to (inner, outer), with
/// E = β ⊖ N and F = ambient ⊖ outer. mu = 0 corresponds to m = N ⊕ F.
inline TransversalCoordinates transversal_coordinates(const NestedPair& pair,
                                                      const Subspace& m,
                                                      const Tolerance& tol = {}) {
  RelativePosition rel = classify_relative(pair, m, tol);
  if (!rel.transversal)
    throw NotTransversal("transversal_coordinates: dim(m ∩ inner) = " +
                         std::to_string(rel.dim_cap_min) + ", defect = " +
                         std::to_string(rel.def_max));
  Subspace target_beta = push_forward(pair, m, tol);
  Subspace e_beta = complement(target_beta, tol);
  // complement() works in β-coordinates; lift to the ambient space.
  Subspace e_ambient = e_beta.dim() > 0
                           ? lift_from_boundary(pair, e_beta)
                           : Subspace::zero(pair.ambient);
  return detail::build_coordinates(pair, m, e_ambient, pair.exterior,
                                   target_beta, tol);
}

/// Graph of (1−t)·mu; t = 0 gives back m, t = 1 gives N ⊕ F. Every point of
/// the path is transversal to (inner, outer) with push-forward N.
inline Subspace transversal_path(const TransversalCoordinates& c, double t) {
  if (!(t >= 0.0 && t <= 1.0))
    throw InvalidInput("transversal_path: t must lie in [0,1]");
  Matrix frame = c.graph_basis + c.complement_basis * ((1.0 - t) * c.mu);
  return Subspace(orthonormalize(frame, c.tol));
}

struct LagrangianCoordinates {
  TransversalCoordinates base;
  Matrix psi;  // Hermitian on (J·N ⊕ inner)-coords, zero upper-left block
};

/// Lagrangian Banach coordinates of a Lagrangian m transversal to
/// (inner, inner^ω): here E = J·N, F = J·inner, and the graph of μ is
/// Lagrangian iff ψ = μ∘J is Hermitian. ψ = 0 corresponds to m = N ⊕ J·inner.
inline LagrangianCoordinates lagrangian_coordinates(const SymplecticSpace& sp,
                                                    const NestedPair& pair,
                                                    const Subspace& m,
                                                    const Tolerance& tol = {}) {
  if (!is_isotropic(sp, pair.inner, tol))
    throw NotIsotropic("lagrangian_coordinates: inner subspace not isotropic");
  if (!same_subspace(pair.outer, annihilator(sp, pair.inner, tol), tol))
    throw NotAnnihilator(
        "lagrangian_coordinates: outer subspace is not the annihilator");
  if (!is_lagrangian(sp, m, tol))
    throw NotLagrangian("lagrangian_coordinates: m is not Lagrangian");
  RelativePosition rel = classify_relative(pair, m, tol);
  if (!rel.transversal)
    throw NotTransversal("lagrangian_coordinates: m is not transversal");

  Subspace target_beta = push_forward(pair, m, tol);
  Subspace target_ambient = lift_from_boundary(pair, target_beta);
  Subspace e_ambient =
      target_ambient.dim() > 0
          ? Subspace::from_orthonormal(sp.j * target_ambient.basis())
          : Subspace::zero(sp.ambient);
  Subspace f_ambient =
      pair.inner.dim() > 0
          ? Subspace::from_orthonormal(sp.j * pair.inner.basis())
          : Subspace::zero(sp.ambient);

  LagrangianCoordinates c;
  c.base = detail::build_coordinates(pair, m, e_ambient, f_ambient,
                                     target_beta, tol);
  const Matrix& s = c.base.graph_basis;
  const Matrix& t_basis = c.base.complement_basis;
  c.psi = c.base.mu * (s.adjoint() * sp.j * t_basis);
  if (spectral_norm(c.psi - c.psi.adjoint()) > tol.gap_abs)
    throw FormulaViolation("lagrangian_coordinates: psi is not Hermitian");
  c.psi = 0.5 * (c.psi + c.psi.adjoint());
  if (c.base.cotarget_dim > 0) {
    Matrix corner = c.psi.topLeftCorner(c.base.cotarget_dim, c.base.cotarget_dim);
    if (spectral_norm(corner) > tol.gap_abs)
      throw FormulaViolation(
          "lagrangian_coordinates: upper-left block of psi is not zero");
    c.psi.topLeftCorner(c.base.cotarget_dim, c.base.cotarget_dim).setZero();
  }
  // Rebuild mu from the projected psi so the path is exactly Lagrangian.
  c.base.mu = -c.psi * (t_basis.adjoint() * sp.j * s);
  if (c.base.cotarget_dim > 0 && c.base.target_dim > 0)
    c.base.mu.topLeftCorner(c.base.cotarget_dim, c.base.target_dim).setZero();
  return c;
}

/// Graph of the linearly contracted ψ: Lagrangian for every t, push-forward N.
inline Subspace lagrangian_path(const LagrangianCoordinates& c, double t) {
  return transversal_path(c.base, t);
}

}  // namespace fredholm
