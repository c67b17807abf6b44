#pragma once

// Complex symplectic linear algebra. A skew-adjoint unitary J defines the form
// ω(ξ,η) = <Jξ,η> (inner product conjugating the first argument) and splits
// the space into the eigenspaces Λ± = ker(J ∓ i). Lagrangian subspaces
// correspond to unitaries Λ+ → Λ−; a pair of Lagrangians has a relative
// unitary u_m^{-1} u_l on Λ+ whose distance from 1 measures the intersection.
// On the standard space H ⊕ H with J(ξ,η) = (η,−ξ), the correspondence
// composed with the identifications ξ⊕(±iξ) ↦ √2·ξ and a sign flip is the
// Cayley transform a ↦ (a−i)(a+i)^{-1} on graphs of Hermitian matrices.
//
// Unitaries are always reported in fixed orthonormal bases of Λ±, chosen once
// per space: analytically for the standard space, deterministically (pivoted
// QR of the eigenprojections) otherwise. Spectra, intersection counts, and
// determinant windings do not depend on this choice; individual entries do.

#include "fredholm/core.hpp"
#include "fredholm/extension.hpp"
#include "fredholm/subspace.hpp"

namespace fredholm {

struct SymplecticSpace {
  Index ambient = 0;
  Matrix j;             // skew-adjoint unitary
  Matrix basis_plus;    // ambient x p+, orthonormal basis of ker(j - i)
  Matrix basis_minus;   // ambient x p-, orthonormal basis of ker(j + i)
  bool standard = false;  // built as H ⊕ H with the block J and √2 bases
  Index h_dim = 0;        // n with ambient = 2n, when standard

  Index plus_dim() const { return basis_plus.cols(); }
  Index minus_dim() const { return basis_minus.cols(); }
};

/// The standard symplectic space H ⊕ H for H = C^n, with J(ξ,η) = (η,−ξ) and
/// the eigenbases (e_k, ±i e_k)/√2.
inline SymplecticSpace standard_symplectic(Index n) {
  if (n < 0) throw InvalidInput("standard_symplectic: negative dimension");
  SymplecticSpace sp;
  sp.ambient = 2 * n;
  sp.standard = true;
  sp.h_dim = n;
  sp.j = Matrix::Zero(2 * n, 2 * n);
  sp.j.topRightCorner(n, n) = Matrix::Identity(n, n);
  sp.j.bottomLeftCorner(n, n) = -Matrix::Identity(n, n);
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  sp.basis_plus = Matrix::Zero(2 * n, n);
  sp.basis_minus = Matrix::Zero(2 * n, n);
  sp.basis_plus.topRows(n) = inv_sqrt2 * Matrix::Identity(n, n);
  sp.basis_plus.bottomRows(n) =
      Complex(0.0, 1.0) * inv_sqrt2 * Matrix::Identity(n, n);
  sp.basis_minus.topRows(n) = inv_sqrt2 * Matrix::Identity(n, n);
  sp.basis_minus.bottomRows(n) =
      Complex(0.0, -1.0) * inv_sqrt2 * Matrix::Identity(n, n);
  return sp;
}

namespace detail {

/// Deterministic orthonormal basis of the range of a (near-)projector via
/// column-pivoted QR; the rank of a projector is its trace.
inline Matrix projector_range_basis(const Matrix& p) {
  const Index r = static_cast<Index>(std::llround(p.trace().real()));
  if (r == 0) return Matrix(p.rows(), 0);
  Eigen::ColPivHouseholderQR<Matrix> qr(p);
  return qr.householderQ() * Matrix::Identity(p.rows(), r);
}

}  // namespace detail

/// Builds a symplectic space from an arbitrary skew-adjoint unitary.
inline SymplecticSpace make_symplectic(const Matrix& j, const Tolerance& tol = {}) {
  if (j.rows() != j.cols()) throw InvalidInput("symplectic: j must be square");
  const Index n = j.rows();
  SymplecticSpace sp;
  sp.ambient = n;
  sp.j = j;
  if (n == 0) {
    sp.basis_plus = Matrix(0, 0);
    sp.basis_minus = Matrix(0, 0);
    return sp;
  }
  if (!j.allFinite()) throw NonFinite("symplectic: non-finite j");
  if (spectral_norm(j + j.adjoint()) > tol.gap_abs)
    throw InvalidInput("symplectic: j is not skew-adjoint");
  if (spectral_norm(j.adjoint() * j - Matrix::Identity(n, n)) > tol.gap_abs)
    throw InvalidInput("symplectic: j is not unitary");
  const Complex half_i(0.0, 0.5);
  Matrix p_plus = 0.5 * Matrix::Identity(n, n) - half_i * j;
  Matrix p_minus = 0.5 * Matrix::Identity(n, n) + half_i * j;
  sp.basis_plus = detail::projector_range_basis(p_plus);
  sp.basis_minus = detail::projector_range_basis(p_minus);
  if (sp.plus_dim() + sp.minus_dim() != n)
    throw InvalidInput("symplectic: eigenspaces do not span the space");
  return sp;
}

/// ω(ξ,η) = <Jξ,η>, conjugate-linear in the first argument.
inline Complex symplectic_form(const SymplecticSpace& sp, const Vector& xi,
                               const Vector& eta) {
  if (xi.size() != sp.ambient || eta.size() != sp.ambient)
    throw InvalidInput("symplectic_form: vector size mismatch");
  return (sp.j * xi).dot(eta);
}

/// Annihilator with respect to ω: the subspace J·(l ⟂); an involution that
/// exchanges sums with intersections. dim l* = ambient - dim l.
inline Subspace annihilator(const SymplecticSpace& sp, const Subspace& l,
                            const Tolerance& tol = {}) {
  if (l.ambient() != sp.ambient)
    throw InvalidInput("annihilator: ambient mismatch");
  Subspace comp = complement(l, tol);
  if (comp.dim() == 0) return Subspace::zero(sp.ambient);
  return Subspace::from_orthonormal(sp.j * comp.basis());
}

inline bool is_isotropic(const SymplecticSpace& sp, const Subspace& l,
                         const Tolerance& tol = {}) {
  return contains(annihilator(sp, l, tol), l, tol);
}

inline bool is_lagrangian(const SymplecticSpace& sp, const Subspace& l,
                          const Tolerance& tol = {}) {
  if (2 * l.dim() != sp.ambient) return false;
  return is_isotropic(sp, l, tol);
}

/// A Lagrangian subspace together with the unitary u: Λ+ → Λ− whose graph it
/// is, reported in the fixed bases of the space.
struct LagrangianFrame {
  Subspace subspace;
  Matrix unitary;  // p x p in the (basis_plus, basis_minus) coordinates
};

namespace detail {

inline Matrix closest_unitary(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

}  // namespace detail

/// Extracts the unitary of a Lagrangian subspace. A Lagrangian meets neither
/// Λ+ nor Λ−, so the plus-coordinate block of its frame is invertible (all of
/// its singular values equal 1/√2 exactly).
inline LagrangianFrame lagrangian_unitary(const SymplecticSpace& sp,
                                          const Subspace& l,
                                          const Tolerance& tol = {}) {
  if (!is_lagrangian(sp, l, tol))
    throw NotLagrangian("lagrangian_unitary: subspace is not Lagrangian");
  if (sp.plus_dim() != sp.minus_dim())
    throw NotLagrangian("lagrangian_unitary: dim Λ+ != dim Λ-");
  Matrix x_plus = sp.basis_plus.adjoint() * l.basis();
  Matrix x_minus = sp.basis_minus.adjoint() * l.basis();
  if (l.dim() > 0) {
    Eigen::JacobiSVD<Matrix> svd(x_plus);
    if (svd.singularValues()(svd.singularValues().size() - 1) < 0.5)
      throw NotLagrangian("lagrangian_unitary: subspace meets Λ-");
  }
  Matrix u = x_minus * x_plus.inverse();
  return LagrangianFrame{l, detail::closest_unitary(u)};
}

/// The Lagrangian subspace { w + u w : w ∈ Λ+ } of a unitary in the fixed
/// bases. (basis_plus + basis_minus·u)/√2 is exactly orthonormal.
inline Subspace lagrangian_from_unitary(const SymplecticSpace& sp,
                                        const Matrix& u) {
  if (u.rows() != sp.minus_dim() || u.cols() != sp.plus_dim())
    throw InvalidInput("lagrangian_from_unitary: size mismatch");
  Matrix columns =
      (sp.basis_plus + sp.basis_minus * u) * (1.0 / std::sqrt(2.0));
  return Subspace::from_orthonormal(std::move(columns));
}

/// Cayley transform (a − i)(a + i)^{-1} of a Hermitian matrix; always unitary,
/// with eigenvalue −1 exactly on the kernel of a.
inline Matrix cayley(const Matrix& a, const Tolerance& tol = {}) {
  if (a.rows() != a.cols()) throw InvalidInput("cayley: matrix must be square");
  if (!a.allFinite()) throw NonFinite("cayley: non-finite entry");
  const double defect = spectral_norm(a - a.adjoint());
  if (defect > tol.gap_abs)
    throw NotHermitian("cayley: ||a - a^H|| = " + std::to_string(defect));
  const Index n = a.rows();
  const Complex i(0.0, 1.0);
  Matrix shift_minus = a - i * Matrix::Identity(n, n);
  Matrix shift_plus = a + i * Matrix::Identity(n, n);
  return shift_minus * shift_plus.inverse();
}

/// Extension of the Cayley transform to the Lagrangian Grassmannian of the
/// standard space: in the √2-identified bases it is minus the graph unitary.
/// Takes H ⊕ 0 to −1, 0 ⊕ H to +1, and the graph of a Hermitian a to cayley(a).
inline Matrix lagrangian_cayley(const SymplecticSpace& sp, const Subspace& l,
                                const Tolerance& tol = {}) {
  if (!sp.standard)
    throw InvalidInput("lagrangian_cayley: requires the standard space H ⊕ H");
  return -lagrangian_unitary(sp, l, tol).unitary;
}

/// Relative unitary of a pair of Lagrangians, u_m^{-1} u_l on Λ+. Its distance
/// from 1 measures the pair: dim(l ∩ m) is the multiplicity of the singular
/// value 0 of 1 − u_m^{-1} u_l, and the pair is transversal iff there is none.
inline Matrix relative_unitary(const SymplecticSpace& sp, const Subspace& l,
                               const Subspace& m, const Tolerance& tol = {}) {
  Matrix u_l = lagrangian_unitary(sp, l, tol).unitary;
  Matrix u_m = lagrangian_unitary(sp, m, tol).unitary;
  return u_m.adjoint() * u_l;
}

/// Multiplicity of the singular value 0 of 1 − κ within the rank tolerance.
inline Index relative_intersection_multiplicity(const Matrix& kappa_rel,
                                                const Tolerance& tol = {}) {
  const Index p = kappa_rel.rows();
  Matrix one_minus = Matrix::Identity(p, p) - kappa_rel;
  return p - numerical_rank(one_minus, tol);
}

inline bool relative_transversal(const Matrix& kappa_rel,
                                 const Tolerance& tol = {}) {
  return relative_intersection_multiplicity(kappa_rel, tol) == 0;
}

/// Induced symplectic structure on the boundary space of an isotropic pair
/// (inner, inner^ω): the compression of J to β is again a skew-adjoint
/// unitary because β and its complement inner ⊕ J·inner are J-invariant.
inline SymplecticSpace boundary_form(const SymplecticSpace& sp,
                                     const NestedPair& pair,
                                     const Tolerance& tol = {}) {
  if (pair.ambient != sp.ambient)
    throw InvalidInput("boundary_form: ambient mismatch");
  if (!is_isotropic(sp, pair.inner, tol))
    throw NotIsotropic("boundary_form: inner subspace is not isotropic");
  if (!same_subspace(pair.outer, annihilator(sp, pair.inner, tol), tol))
    throw NotAnnihilator("boundary_form: outer subspace is not the annihilator");
  Matrix j_beta =
      pair.boundary.basis().adjoint() * sp.j * pair.boundary.basis();
  return make_symplectic(j_beta, tol);
}

// ---------------------------------------------------------------------------
// Self-adjoint realizations
// ---------------------------------------------------------------------------

/// Result of selecting a self-adjoint extension by a Lagrangian boundary
/// condition. The graph is always Lagrangian in H ⊕ H; it is the graph of an
/// operator iff it does not meet 0 ⊕ H, in which case the operator is a
/// Hermitian matrix on all of H extending the minimal operator. Otherwise the
/// extension is a proper linear relation: it is returned with the flag down
/// and its subspace-level kernel/range/index data, never silently coerced.
struct SelfAdjointRealization {
  Subspace graph;                    // Lagrangian in C^{2n}
  bool operator_graph = false;       // graph ∩ (0 ⊕ H) = 0
  bool max_is_operator_graph = false;  // annihilator of inner is a graph
  Matrix matrix;                     // n x n Hermitian, when operator_graph
  Realization data;                  // kernel/range/index (relation-style otherwise)
  Subspace multivalued;              // {η : (0,η) ∈ graph}, in H coordinates
};

inline SelfAdjointRealization self_adjoint_realization(const OperatorPair& op,
                                                       const Subspace& l,
                                                       const Tolerance& tol = {}) {
  const Index n = op.space_dim;
  SymplecticSpace sp = standard_symplectic(n);
  Subspace g_min = operator_graph(op.action, op.dom_min, tol);
  if (!is_isotropic(sp, g_min, tol))
    throw NotIsotropic("self_adjoint_realization: minimal graph not isotropic");
  Subspace adjoint_relation = annihilator(sp, g_min, tol);
  NestedPair nested = make_nested(g_min, adjoint_relation, tol);
  SymplecticSpace bsp = boundary_form(sp, nested, tol);
  if (l.ambient() != nested.boundary_dim())
    throw NotInBeta("self_adjoint_realization: boundary condition lives in C^" +
                    std::to_string(l.ambient()) + ", boundary has dimension " +
                    std::to_string(nested.boundary_dim()));
  if (!is_lagrangian(bsp, l, tol))
    throw NotLagrangian(
        "self_adjoint_realization: boundary condition is not Lagrangian");

  SelfAdjointRealization result;
  result.max_is_operator_graph =
      intersect(adjoint_relation, vertical(n), tol).dim() == 0;
  result.graph = pull_back(nested, l, tol);
  if (!is_lagrangian(sp, result.graph, tol))
    throw FormulaViolation(
        "self_adjoint_realization: pulled-back graph is not Lagrangian");
  Subspace multivalued_ambient = intersect(result.graph, vertical(n), tol);
  result.operator_graph = (multivalued_ambient.dim() == 0);
  result.multivalued = Subspace(
      orthonormalize(multivalued_ambient.basis().bottomRows(n), tol,
                     tol.gap_abs));

  if (result.operator_graph) {
    Matrix top = result.graph.basis().topRows(n);
    Eigen::JacobiSVD<Matrix> svd(top);
    if (top.cols() != n ||
        svd.singularValues()(svd.singularValues().size() - 1) <=
            tol.rank_rel * static_cast<double>(n))
      throw NotAGraph("self_adjoint_realization: graph projection degenerate");
    result.matrix = result.graph.basis().bottomRows(n) * top.inverse();
    if (spectral_norm(result.matrix - result.matrix.adjoint()) > tol.gap_abs)
      throw FormulaViolation(
          "self_adjoint_realization: extension matrix is not Hermitian");
    result.data = realization_on_domain(result.matrix, Subspace::full(n), tol);
  } else {
    // Linear relation: subspace-level data.
    Realization data;
    data.domain =
        Subspace(orthonormalize(result.graph.basis().topRows(n), tol,
                                tol.gap_abs));
    Subspace kernel_graph = intersect(result.graph, horizontal(n), tol);
    data.kernel = Subspace(orthonormalize(kernel_graph.basis().topRows(n), tol,
                                          tol.gap_abs));
    data.range =
        Subspace(orthonormalize(result.graph.basis().bottomRows(n), tol,
                                tol.gap_abs));
    data.coker_dim = n - data.range.dim();
    data.index =
        static_cast<long>(data.kernel.dim()) - static_cast<long>(data.coker_dim);
    result.data = std::move(data);
  }
  return result;
}

}  // namespace fredholm
