#pragma once

// Tolerance-aware dense complex linear algebra substrate: orthonormal frames,
// numerical rank, and projector algebra. Everything downstream represents a
// closed subspace as an orthonormal column frame obtained from a rank-revealing
// SVD, so every "closed / equal / contained" decision becomes a singular-value
// threshold decision, controlled by a single Tolerance value.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace fredholm {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Error taxonomy. Every failure mode of the calculus has its own type so that
// callers (and the CLI) can map them onto exit codes precisely.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct NonFinite : Error { using Error::Error; };
struct NotIdempotent : Error { using Error::Error; };
struct SingularPivot : Error { using Error::Error; };
struct SingularMap : Error { using Error::Error; };
struct NotNested : Error { using Error::Error; };
struct NotInBeta : Error { using Error::Error; };
struct NotHermitian : Error { using Error::Error; };
struct NotLagrangian : Error { using Error::Error; };
struct NotIsotropic : Error { using Error::Error; };
struct NotAnnihilator : Error { using Error::Error; };
struct NotTransversal : Error { using Error::Error; };
struct NotAGraph : Error { using Error::Error; };
struct NotClosed : Error { using Error::Error; };
struct NotUnitary : Error { using Error::Error; };
struct InsufficientSampling : Error { using Error::Error; };
struct NonconstantDefect : Error { using Error::Error; };
struct FormulaViolation : Error { using Error::Error; };
// Malformed files, schema violations, bad configuration.
struct InvalidInput : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Tolerance
// ---------------------------------------------------------------------------

/// rank_rel: relative singular-value threshold for rank decisions.
/// gap_abs: absolute threshold on projector-norm (gap) distances.
struct Tolerance {
  double rank_rel = 1e-10;
  double gap_abs = 1e-8;
};

inline void validate(const Tolerance& tol) {
  if (!(tol.rank_rel > 0.0) || !(tol.rank_rel < 1.0))
    throw InvalidInput("tolerance: rank_rel must lie in (0,1), got " +
                       std::to_string(tol.rank_rel));
  if (!(tol.gap_abs > 0.0) || !(tol.gap_abs < 1.0))
    throw InvalidInput("tolerance: gap_abs must lie in (0,1), got " +
                       std::to_string(tol.gap_abs));
}

// ---------------------------------------------------------------------------
// Norm helpers
// ---------------------------------------------------------------------------

/// Largest singular value; returns 0 for empty matrices.
inline double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
}

/// Spectral norm of a Hermitian matrix via its eigenvalues.
inline double hermitian_spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Rank and frames
// ---------------------------------------------------------------------------

/// Counts singular values above the relative threshold
/// rank_rel * max(rows, cols) * sigma_max, optionally raised to abs_floor.
/// The floor is used by internal reconstructions whose genuine singular values
/// are exactly {0, 1}; it keeps machine noise from being promoted to rank.
inline Index rank_from_singular_values(const RealVector& sv, Index rows,
                                       Index cols, const Tolerance& tol,
                                       double abs_floor = 0.0) {
  if (sv.size() == 0) return 0;
  const double smax = sv(0);
  const double threshold =
      std::max(tol.rank_rel * static_cast<double>(std::max(rows, cols)) * smax,
               abs_floor);
  Index r = 0;
  while (r < sv.size() && sv(r) > threshold) ++r;
  return r;
}

/// An orthonormal column frame spanning a subspace of C^ambient.
/// Invariant: columns^H * columns = I within gap_abs. A 0-column frame is the
/// zero subspace; zero-dimensional subspaces are first-class citizens here.
struct Frame {
  Index ambient = 0;
  Matrix columns;  // ambient x k, orthonormal

  Index dim() const { return columns.cols(); }
};

/// Deviation of a frame from exact orthonormality, ||F^H F - I||.
inline double frame_defect(const Frame& f) {
  if (f.dim() == 0) return 0.0;
  Matrix g = f.columns.adjoint() * f.columns;
  g -= Matrix::Identity(f.dim(), f.dim());
  return hermitian_spectral_norm(g);
}

/// Rank-revealing orthonormalization of the column space of m.
/// The returned frame has numerical_rank(m) columns.
inline Frame orthonormalize(const Matrix& m, const Tolerance& tol = {},
                            double abs_floor = 0.0) {
  if (!m.allFinite()) throw NonFinite("orthonormalize: non-finite entry");
  if (m.cols() == 0 || m.rows() == 0) return Frame{m.rows(), Matrix(m.rows(), 0)};
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU);
  const Index r = rank_from_singular_values(svd.singularValues(), m.rows(),
                                            m.cols(), tol, abs_floor);
  return Frame{m.rows(), svd.matrixU().leftCols(r)};
}

/// Number of singular values above the relative threshold; the zero matrix has
/// rank 0.
inline Index numerical_rank(const Matrix& m, const Tolerance& tol = {}) {
  if (!m.allFinite()) throw NonFinite("numerical_rank: non-finite entry");
  if (m.cols() == 0 || m.rows() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return rank_from_singular_values(svd.singularValues(), m.rows(), m.cols(),
                                   tol);
}

/// Orthogonal projector onto the range of an idempotent t, computed by the
/// closed formula t (t + t^H - 1)^{-1}. The pivot t + t^H - 1 is invertible
/// whenever t is an idempotent; a numerically singular pivot therefore signals
/// that the input was not one.
inline Matrix idempotent_to_projector(const Matrix& t, const Tolerance& tol = {}) {
  if (t.rows() != t.cols())
    throw InvalidInput("idempotent_to_projector: matrix must be square");
  if (!t.allFinite()) throw NonFinite("idempotent_to_projector: non-finite entry");
  const Index n = t.rows();
  if (n == 0) return t;
  const double defect = spectral_norm(t * t - t);
  if (defect > tol.gap_abs)
    throw NotIdempotent("idempotent_to_projector: ||t^2 - t|| = " +
                        std::to_string(defect));
  Matrix pivot = t + t.adjoint() - Matrix::Identity(n, n);
  Eigen::JacobiSVD<Matrix> svd(pivot);
  const RealVector& sv = svd.singularValues();
  if (sv(sv.size() - 1) <=
      tol.rank_rel * static_cast<double>(n) * sv(0))
    throw SingularPivot("idempotent_to_projector: t + t^H - 1 is singular");
  Matrix p = t * pivot.inverse();
  // The formula is exactly Hermitian in exact arithmetic; symmetrize the noise.
  p = 0.5 * (p + p.adjoint());
  return p;
}

}  // namespace fredholm
