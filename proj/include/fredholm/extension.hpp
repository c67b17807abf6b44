#pragma once

// The nested-pair calculus: a pair of closed subspaces inner ⊆ outer of an
// ambient space, the boundary space β = outer ⊖ inner with its trace map
// (orthogonal projection of outer onto β), the pull-back and push-forward of
// subspaces through the trace, relative position of a third subspace, and the
// operator layer: extension pairs of matrices-with-domains, realizations
// selected by boundary conditions, Cauchy data, and the pointwise index
// identities connecting all of it.
//
// Subspaces of β are represented in β-coordinates: a Subspace whose ambient
// dimension equals dim β, expressed in the basis given by the cached β frame.

#include "fredholm/core.hpp"
#include "fredholm/subspace.hpp"

#include <optional>

namespace fredholm {

// ---------------------------------------------------------------------------
// Nested pairs and the boundary space
// ---------------------------------------------------------------------------

struct NestedPair {
  Index ambient = 0;
  Subspace inner;     // the smaller subspace
  Subspace outer;     // the larger subspace
  Subspace boundary;  // outer ⊖ inner, frame in ambient coordinates
  Subspace exterior;  // ambient ⊖ outer

  Index boundary_dim() const { return boundary.dim(); }
};

/// Certifies inner ⊆ outer by the projector test and caches β = outer ⊖ inner
/// and the exterior complement.
inline NestedPair make_nested(const Subspace& inner, const Subspace& outer,
                              const Tolerance& tol = {}) {
  require_same_ambient(inner, outer, "make_nested");
  if (!contains(outer, inner, tol))
    throw NotNested("make_nested: containment certificate failed");
  NestedPair pair;
  pair.ambient = inner.ambient();
  pair.inner = inner;
  pair.outer = outer;
  if (inner.dim() == 0) {
    pair.boundary = outer;
  } else {
    Matrix residual = outer.basis() - projector(inner) * outer.basis();
    // Genuine singular values are {0,1}: floor the rank decision.
    pair.boundary = Subspace(orthonormalize(residual, tol, tol.gap_abs));
  }
  pair.exterior = complement(outer, tol);
  if (pair.boundary.dim() != outer.dim() - inner.dim())
    throw NotNested("make_nested: boundary dimension mismatch, got " +
                    std::to_string(pair.boundary.dim()) + " expected " +
                    std::to_string(outer.dim() - inner.dim()));
  return pair;
}

/// Lifts a subspace given in β-coordinates to the ambient space.
inline Subspace lift_from_boundary(const NestedPair& pair, const Subspace& l) {
  if (l.ambient() != pair.boundary_dim())
    throw NotInBeta("lift_from_boundary: subspace lives in C^" +
                    std::to_string(l.ambient()) + ", boundary has dimension " +
                    std::to_string(pair.boundary_dim()));
  return Subspace::from_orthonormal(pair.boundary.basis() * l.basis());
}

/// Pull-back of a boundary condition: l ⊕ inner, the subspace between inner
/// and outer selected by l.
inline Subspace pull_back(const NestedPair& pair, const Subspace& l,
                          const Tolerance& tol = {}) {
  Subspace lifted = lift_from_boundary(pair, l);
  return sum(lifted, pair.inner, tol);
}

/// Push-forward: the trace of m, i.e. the projection of m ∩ outer onto β,
/// returned in β-coordinates.
inline Subspace push_forward(const NestedPair& pair, const Subspace& m,
                             const Tolerance& tol = {}) {
  require_same_ambient(pair.inner, m, "push_forward");
  Subspace met = intersect(m, pair.outer, tol);
  Subspace with_inner = sum(met, pair.inner, tol);
  if (with_inner.dim() == 0) return Subspace::zero(pair.boundary_dim());
  Matrix coords = pair.boundary.basis().adjoint() * with_inner.basis();
  return Subspace(orthonormalize(coords, tol, tol.gap_abs));
}

/// Relative position of m with respect to (inner, outer). Transversality means
/// m ∩ inner = 0 and m + outer = ambient (sums are closed automatically here).
struct RelativePosition {
  Index dim_cap_min = 0;       // dim(m ∩ inner)
  Index def_max = 0;           // dim of ambient ⊖ (m + outer)
  Index sum_with_min_dim = 0;  // dim(m + inner)
  bool transversal = false;
  Subspace cap_min;    // K  = m ∩ inner
  Subspace def_space;  // K' = ambient ⊖ (m + outer)
};

inline RelativePosition classify_relative(const NestedPair& pair,
                                          const Subspace& m,
                                          const Tolerance& tol = {}) {
  require_same_ambient(pair.inner, m, "classify_relative");
  RelativePosition rel;
  rel.cap_min = intersect(m, pair.inner, tol);
  rel.dim_cap_min = rel.cap_min.dim();
  rel.sum_with_min_dim = sum(m, pair.inner, tol).dim();
  Subspace with_outer = sum(m, pair.outer, tol);
  rel.def_space = complement(with_outer, tol);
  rel.def_max = rel.def_space.dim();
  rel.transversal = (rel.dim_cap_min == 0 && rel.def_max == 0);
  return rel;
}

// ---------------------------------------------------------------------------
// Operator layer: extension pairs of matrices with domains
// ---------------------------------------------------------------------------

/// A pair of operators (restriction, extension) modeled as one matrix acting
/// on two nested domains of C^n. The minimal operator is action|dom_min, the
/// maximal one is action|dom_max.
struct OperatorPair {
  Index space_dim = 0;
  Matrix action;      // n x n
  Subspace dom_max;   // domain of the maximal operator
  Subspace dom_min;   // domain of the minimal operator, dom_min ⊆ dom_max
};

inline OperatorPair make_operator_pair(const Matrix& action,
                                       const Subspace& dom_max,
                                       const Subspace& dom_min,
                                       const Tolerance& tol = {}) {
  const Index n = action.rows();
  if (action.cols() != n)
    throw InvalidInput("operator pair: action must be square");
  if (!action.allFinite()) throw NonFinite("operator pair: non-finite action");
  if (dom_max.ambient() != n || dom_min.ambient() != n)
    throw InvalidInput("operator pair: domain ambient mismatch");
  if (!contains(dom_max, dom_min, tol))
    throw NotNested("operator pair: dom_min is not contained in dom_max");
  return OperatorPair{n, action, dom_max, dom_min};
}

/// The horizontal subspace H ⊕ 0 of C^{2n}.
inline Subspace horizontal(Index n) {
  Matrix columns = Matrix::Zero(2 * n, n);
  columns.topRows(n) = Matrix::Identity(n, n);
  return Subspace::from_orthonormal(std::move(columns));
}

/// The vertical subspace 0 ⊕ H of C^{2n}.
inline Subspace vertical(Index n) {
  Matrix columns = Matrix::Zero(2 * n, n);
  columns.bottomRows(n) = Matrix::Identity(n, n);
  return Subspace::from_orthonormal(std::move(columns));
}

/// Graph of the action restricted to a domain, as a subspace of C^{2n}.
inline Subspace operator_graph(const Matrix& action, const Subspace& domain,
                               const Tolerance& tol = {}) {
  const Index n = action.rows();
  if (domain.dim() == 0) return Subspace::zero(2 * n);
  Matrix stacked(2 * n, domain.dim());
  stacked.topRows(n) = domain.basis();
  stacked.bottomRows(n) = action * domain.basis();
  return Subspace(orthonormalize(stacked, tol));
}

/// The nested pair of graphs of (action|dom_min, action|dom_max) in C^{2n}.
inline NestedPair graph_pair(const OperatorPair& op, const Tolerance& tol = {}) {
  Subspace g_min = operator_graph(op.action, op.dom_min, tol);
  Subspace g_max = operator_graph(op.action, op.dom_max, tol);
  return make_nested(g_min, g_max, tol);
}

/// Rank threshold for restrictions of an operator: relative to the norm of
/// the unrestricted operator, so that a restriction which is zero up to
/// machine noise is treated as zero rather than ranked by its own noise.
inline double restriction_floor(const Matrix& action, const Tolerance& tol) {
  return tol.rank_rel * static_cast<double>(std::max(action.rows(), action.cols())) *
         spectral_norm(action);
}

/// Kernel of action restricted to a domain, as a subspace of C^n.
inline Subspace restricted_kernel(const Matrix& action, const Subspace& domain,
                                  const Tolerance& tol = {}) {
  const Index n = action.rows();
  if (domain.dim() == 0) return Subspace::zero(n);
  Matrix restricted = action * domain.basis();
  Eigen::JacobiSVD<Matrix> svd(restricted, Eigen::ComputeFullV);
  const Index r = rank_from_singular_values(
      svd.singularValues(), restricted.rows(), restricted.cols(), tol,
      restriction_floor(action, tol));
  const Index k = domain.dim() - r;
  if (k == 0) return Subspace::zero(n);
  return Subspace::from_orthonormal(domain.basis() *
                                    svd.matrixV().rightCols(k));
}

/// Range of action restricted to a domain.
inline Subspace restricted_range(const Matrix& action, const Subspace& domain,
                                 const Tolerance& tol = {}) {
  if (domain.dim() == 0) return Subspace::zero(action.rows());
  return Subspace(orthonormalize(action * domain.basis(), tol,
                                 restriction_floor(action, tol)));
}

/// A realization of an extension pair: the operator on the domain selected by
/// a boundary condition, with its kernel, range, cokernel dimension and index.
struct Realization {
  Subspace domain;
  Subspace kernel;
  Subspace range;
  Index coker_dim = 0;
  long index = 0;
};

inline Realization realization_on_domain(const Matrix& action,
                                         const Subspace& domain,
                                         const Tolerance& tol = {}) {
  Realization r;
  r.domain = domain;
  r.kernel = restricted_kernel(action, domain, tol);
  r.range = restricted_range(action, domain, tol);
  r.coker_dim = action.rows() - r.range.dim();
  r.index = static_cast<long>(r.kernel.dim()) - static_cast<long>(r.coker_dim);
  return r;
}

/// Cauchy data space: the trace of the kernel of the maximal operator, in
/// β-coordinates of graph_pair(op). Equals push_forward(graphs, H ⊕ 0).
inline Subspace cauchy_data(const OperatorPair& op, const NestedPair& graphs,
                            const Tolerance& tol = {}) {
  Subspace ker_max = restricted_kernel(op.action, op.dom_max, tol);
  if (ker_max.dim() == 0) return Subspace::zero(graphs.boundary_dim());
  Matrix stacked = Matrix::Zero(2 * op.space_dim, ker_max.dim());
  stacked.topRows(op.space_dim) = ker_max.basis();
  Subspace graph_of_kernel = Subspace::from_orthonormal(std::move(stacked));
  Subspace with_inner = sum(graph_of_kernel, graphs.inner, tol);
  Matrix coords = graphs.boundary.basis().adjoint() * with_inner.basis();
  return Subspace(orthonormalize(coords, tol, tol.gap_abs));
}

inline Subspace cauchy_data(const OperatorPair& op, const Tolerance& tol = {}) {
  return cauchy_data(op, graph_pair(op, tol), tol);
}

/// The realization selected by a boundary condition l ⊆ β: its domain is the
/// projection to H of the pulled-back graph.
inline Realization realization(const OperatorPair& op, const Subspace& l,
                               const Tolerance& tol = {}) {
  NestedPair graphs = graph_pair(op, tol);
  Subspace graph_l = pull_back(graphs, l, tol);
  Subspace domain =
      Subspace(orthonormalize(graph_l.basis().topRows(op.space_dim), tol));
  if (domain.dim() != graph_l.dim())
    throw NotAGraph("realization: pulled-back subspace is not a graph");
  return realization_on_domain(op.action, domain, tol);
}

// ---------------------------------------------------------------------------
// Pointwise index identities
// ---------------------------------------------------------------------------

/// Integer data of the pointwise index formula and the two exact-sequence
/// dimension identities for one operator instance and one boundary condition.
struct PointFormulaReport {
  long index_realized = 0;   // ind of the realization, kernel/cokernel route
  long index_boundary = 0;   // ind_β(l, cauchy) + dim ker min - dim coker max
  Index ker_min = 0;         // dim ker of the minimal operator
  Index coker_max = 0;       // dim coker of the maximal operator
  Index ker_realized = 0;
  Index coker_realized = 0;
  Index dim_cap_lc = 0;      // dim(l ∩ cauchy)
  Index codim_sum_lc = 0;    // codim_β(l + cauchy)
  bool transversal_lc = false;
  bool invertible_pair = false;  // ker A = 0 and coker A' = 0
  bool invertible_realization = false;
};

/// Verifies, as exact integers, the pointwise index formula
///   ind A_L = ind_β(L, C) + dim ker A - dim coker A',
/// the kernel and cokernel exact-sequence identities, and the equivalence
/// "realization invertible iff (L, C) transversal". Throws FormulaViolation
/// if any of them fails; that signals an implementation bug, never expected.
inline PointFormulaReport verify_point_index_formula(const OperatorPair& op,
                                                     const Subspace& l,
                                                     const Tolerance& tol = {}) {
  NestedPair graphs = graph_pair(op, tol);
  Subspace cauchy = cauchy_data(op, graphs, tol);

  PointFormulaReport report;
  Realization min_op = realization_on_domain(op.action, op.dom_min, tol);
  Realization max_op = realization_on_domain(op.action, op.dom_max, tol);
  report.ker_min = min_op.kernel.dim();
  report.coker_max = max_op.coker_dim;

  Realization realized = realization(op, l, tol);
  report.ker_realized = realized.kernel.dim();
  report.coker_realized = realized.coker_dim;
  report.index_realized = realized.index;
  report.invertible_realization =
      (report.ker_realized == 0 && report.coker_realized == 0);

  PairIndexReport lc = pair_index(l, cauchy, tol);
  report.dim_cap_lc = lc.dim_cap;
  report.codim_sum_lc = lc.codim_sum;
  report.transversal_lc = lc.transversal;
  report.index_boundary = lc.index + static_cast<long>(report.ker_min) -
                          static_cast<long>(report.coker_max);

  if (report.index_realized != report.index_boundary)
    throw FormulaViolation(
        "point index formula: ind A_L = " +
        std::to_string(report.index_realized) + " but ind_b(L,C) + ker - coker = " +
        std::to_string(report.index_boundary));
  if (report.ker_realized !=
      report.ker_min + static_cast<Index>(report.dim_cap_lc))
    throw FormulaViolation("kernel exact sequence: dim ker A_L = " +
                           std::to_string(report.ker_realized) +
                           " but dim ker A + dim(L cap C) = " +
                           std::to_string(report.ker_min + report.dim_cap_lc));
  if (report.coker_realized !=
      report.coker_max + static_cast<Index>(report.codim_sum_lc))
    throw FormulaViolation("cokernel exact sequence: dim coker A_L = " +
                           std::to_string(report.coker_realized) +
                           " but dim coker A' + codim(L + C) = " +
                           std::to_string(report.coker_max + report.codim_sum_lc));
  // The realization is invertible iff the extension pair is invertible and
  // (L, C) is transversal; both directions follow from the exact sequences.
  report.invertible_pair = (report.ker_min == 0 && report.coker_max == 0);
  if (report.invertible_realization !=
      (report.invertible_pair && report.transversal_lc))
    throw FormulaViolation(
        "invertibility/transversality equivalence failed: realization " +
        std::string(report.invertible_realization ? "invertible" : "singular") +
        ", pair " + std::string(report.invertible_pair ? "invertible" : "not") +
        ", (L,C) " + std::string(report.transversal_lc ? "transversal" : "not"));
  return report;
}

/// Integer data of the defect-corrected reduction identity
///   ind(pull_back(l), m) = ind_β(l, push_forward(m)) + dim K - dim K',
/// with K = m ∩ inner and K' = ambient ⊖ (m + outer). Exact for every m; the
/// transversal case has K = K' = 0.
struct IndexReductionReport {
  long ambient_index = 0;
  long boundary_index = 0;
  Index cap_defect = 0;  // dim K
  Index def_defect = 0;  // dim K'
  bool transversal = false;
};

inline IndexReductionReport index_reduction_report(const NestedPair& pair,
                                                   const Subspace& m,
                                                   const Subspace& l,
                                                   const Tolerance& tol = {}) {
  IndexReductionReport report;
  RelativePosition rel = classify_relative(pair, m, tol);
  report.cap_defect = rel.dim_cap_min;
  report.def_defect = rel.def_max;
  report.transversal = rel.transversal;
  report.ambient_index = pair_index(pull_back(pair, l, tol), m, tol).index;
  report.boundary_index =
      pair_index(l, push_forward(pair, m, tol), tol).index;
  const long rhs = report.boundary_index + static_cast<long>(report.cap_defect) -
                   static_cast<long>(report.def_defect);
  if (report.ambient_index != rhs)
    throw FormulaViolation("reduction identity: ambient index " +
                           std::to_string(report.ambient_index) +
                           " != boundary index + defects = " +
                           std::to_string(rhs));
  return report;
}

}  // namespace fredholm
