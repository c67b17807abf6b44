#pragma once

// Subspace calculus on the Grassmannian of C^n: projectors, complements,
// intersections and sums, the gap metric, and the integer index of a pair of
// subspaces, ind(L, M) = dim(L cap M) - codim(L + M).

#include "fredholm/core.hpp"

namespace fredholm {

class Subspace {
 public:
  Subspace() = default;
  explicit Subspace(Frame frame) : frame_(std::move(frame)) {}

  Index ambient() const { return frame_.ambient; }
  Index dim() const { return frame_.dim(); }
  const Matrix& basis() const { return frame_.columns; }
  const Frame& frame() const { return frame_; }

  static Subspace zero(Index ambient) {
    return Subspace(Frame{ambient, Matrix(ambient, 0)});
  }
  static Subspace full(Index ambient) {
    return Subspace(Frame{ambient, Matrix::Identity(ambient, ambient)});
  }
  /// Span of arbitrary generator columns (rank-revealing).
  static Subspace span(const Matrix& generators, const Tolerance& tol = {}) {
    return Subspace(orthonormalize(generators, tol));
  }
  /// Wraps columns that are already orthonormal (isometry images, eigenbases).
  static Subspace from_orthonormal(Matrix columns) {
    const Index n = columns.rows();
    return Subspace(Frame{n, std::move(columns)});
  }

 private:
  Frame frame_;
};

inline void require_same_ambient(const Subspace& s, const Subspace& t,
                                 const char* where) {
  if (s.ambient() != t.ambient())
    throw InvalidInput(std::string(where) + ": ambient dimensions differ (" +
                       std::to_string(s.ambient()) + " vs " +
                       std::to_string(t.ambient()) + ")");
}

/// Orthogonal projector P = F F^H onto s.
inline Matrix projector(const Subspace& s) {
  if (s.dim() == 0) return Matrix::Zero(s.ambient(), s.ambient());
  return s.basis() * s.basis().adjoint();
}

/// Orthogonal complement of s in its ambient space.
inline Subspace complement(const Subspace& s, const Tolerance& tol = {}) {
  const Index n = s.ambient();
  if (s.dim() == 0) return Subspace::full(n);
  Matrix residual = Matrix::Identity(n, n) - projector(s);
  // Genuine singular values are exactly {0,1}; floor the rank decision.
  return Subspace(orthonormalize(residual, tol, tol.gap_abs));
}

/// Gap metric ||P_s - P_t|| (spectral norm of the projector difference).
inline double gap_distance(const Subspace& s, const Subspace& t) {
  require_same_ambient(s, t, "gap_distance");
  if (s.dim() == 0 && t.dim() == 0) return 0.0;
  return hermitian_spectral_norm(projector(s) - projector(t));
}

/// Principal-angle cosines between s and t: singular values of F_s^H F_t,
/// in decreasing order. Empty when either subspace is zero.
inline RealVector principal_cosines(const Subspace& s, const Subspace& t) {
  require_same_ambient(s, t, "principal_cosines");
  if (s.dim() == 0 || t.dim() == 0) return RealVector(0);
  Eigen::JacobiSVD<Matrix> svd(s.basis().adjoint() * t.basis());
  return svd.singularValues();
}

/// Intersection via principal vectors: directions whose principal cosine is
/// >= 1 - gap_abs. Numerically stabler than kernels of projector sums.
inline Subspace intersect(const Subspace& s, const Subspace& t,
                          const Tolerance& tol = {}) {
  require_same_ambient(s, t, "intersect");
  if (s.dim() == 0 || t.dim() == 0) return Subspace::zero(s.ambient());
  Eigen::JacobiSVD<Matrix> svd(s.basis().adjoint() * t.basis(),
                               Eigen::ComputeThinU);
  const RealVector& cos = svd.singularValues();
  Index count = 0;
  while (count < cos.size() && cos(count) >= 1.0 - tol.gap_abs) ++count;
  if (count == 0) return Subspace::zero(s.ambient());
  Matrix vectors = s.basis() * svd.matrixU().leftCols(count);
  return Subspace(orthonormalize(vectors, tol, tol.gap_abs));
}

/// Closed sum: orthonormalized span of the concatenated frames.
inline Subspace sum(const Subspace& s, const Subspace& t,
                    const Tolerance& tol = {}) {
  require_same_ambient(s, t, "sum");
  if (s.dim() == 0) return t;
  if (t.dim() == 0) return s;
  Matrix stacked(s.ambient(), s.dim() + t.dim());
  stacked << s.basis(), t.basis();
  return Subspace(orthonormalize(stacked, tol));
}

/// Report for a pair of subspaces: the index dim(s cap t) - codim(s + t) and
/// the raw dimensions behind it. In finite dimensions every pair is Fredholm,
/// so only the dimensions and the transversality flag are exposed.
struct PairIndexReport {
  Index dim_cap = 0;    // dim(s cap t)
  Index dim_sum = 0;    // dim(s + t)
  Index codim_sum = 0;  // ambient - dim(s + t)
  long index = 0;       // dim_cap - codim_sum
  bool transversal = false;
};

inline PairIndexReport pair_index(const Subspace& s, const Subspace& t,
                                  const Tolerance& tol = {}) {
  require_same_ambient(s, t, "pair_index");
  PairIndexReport report;
  const RealVector cos = principal_cosines(s, t);
  for (Index i = 0; i < cos.size(); ++i)
    if (cos(i) >= 1.0 - tol.gap_abs) ++report.dim_cap;
  if (s.dim() + t.dim() == 0) {
    report.dim_sum = 0;
  } else {
    Matrix stacked(s.ambient(), s.dim() + t.dim());
    stacked << s.basis(), t.basis();
    report.dim_sum = numerical_rank(stacked, tol);
  }
  report.codim_sum = s.ambient() - report.dim_sum;
  report.index = static_cast<long>(report.dim_cap) -
                 static_cast<long>(report.codim_sum);
  report.transversal = (report.dim_cap == 0 && report.codim_sum == 0);
  return report;
}

/// Image f(s) under an invertible map, orthonormalized.
inline Subspace map_subspace(const Matrix& f, const Subspace& s,
                             const Tolerance& tol = {}) {
  if (f.rows() != f.cols() || f.rows() != s.ambient())
    throw InvalidInput("map_subspace: map must be square on the ambient space");
  Eigen::JacobiSVD<Matrix> svd(f);
  const RealVector& sv = svd.singularValues();
  if (sv(sv.size() - 1) <=
      tol.rank_rel * static_cast<double>(f.rows()) * sv(0))
    throw SingularMap("map_subspace: map is numerically singular");
  if (s.dim() == 0) return Subspace::zero(s.ambient());
  return Subspace(orthonormalize(f * s.basis(), tol));
}

/// ||P_outer P_inner - P_inner|| <= gap_abs, the projector containment test.
inline bool contains(const Subspace& outer, const Subspace& inner,
                     const Tolerance& tol = {}) {
  require_same_ambient(outer, inner, "contains");
  if (inner.dim() == 0) return true;
  if (inner.dim() > outer.dim()) return false;
  Matrix defect = projector(outer) * inner.basis() - inner.basis();
  return spectral_norm(defect) <= tol.gap_abs;
}

/// Equality as subspaces: gap <= gap_abs (frames themselves are non-unique).
inline bool same_subspace(const Subspace& s, const Subspace& t,
                          const Tolerance& tol = {}) {
  return s.dim() == t.dim() && gap_distance(s, t) <= tol.gap_abs;
}

/// Block-diagonal embedding of a pair of subspaces into the direct sum of
/// their ambient spaces; used by the additivity checks.
inline Subspace direct_sum(const Subspace& s, const Subspace& t) {
  Matrix columns = Matrix::Zero(s.ambient() + t.ambient(), s.dim() + t.dim());
  if (s.dim() > 0) columns.topLeftCorner(s.ambient(), s.dim()) = s.basis();
  if (t.dim() > 0) columns.bottomRightCorner(t.ambient(), t.dim()) = t.basis();
  return Subspace::from_orthonormal(std::move(columns));
}

}  // namespace fredholm
