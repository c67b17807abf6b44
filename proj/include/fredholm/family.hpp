#pragma once

// Sampled families over a circle or interval parameter: continuity
// diagnostics, pointwise integer index profiles, the determinant winding of a
// closed loop of unitaries, and the end-to-end family index verifiers. The
// winding number is the degree of det along the loop, accumulated stepwise
// with every step phase below π/2 (refined by bisection through a generator
// callback when available) so the unwrapping is unambiguous.

#include "fredholm/core.hpp"
#include "fredholm/extension.hpp"
#include "fredholm/homotopy.hpp"
#include "fredholm/subspace.hpp"
#include "fredholm/symplectic.hpp"

#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace fredholm {

template <typename Sample>
struct SampledLoop {
  std::vector<double> params;  // increasing, in [0,1] (or any interval)
  std::vector<Sample> samples;
  bool closed = true;
};

using SubspaceLoop = SampledLoop<Subspace>;
using UnitaryLoop = SampledLoop<Matrix>;

template <typename Sample>
inline void validate_loop(const SampledLoop<Sample>& loop) {
  if (loop.samples.size() < 2)
    throw InvalidInput("loop: need at least 2 samples");
  if (loop.params.size() != loop.samples.size())
    throw InvalidInput("loop: params/samples size mismatch");
  for (std::size_t j = 1; j < loop.params.size(); ++j)
    if (!(loop.params[j] > loop.params[j - 1]))
      throw InvalidInput("loop: params must be strictly increasing");
}

inline double sample_distance(const Subspace& a, const Subspace& b) {
  return gap_distance(a, b);
}
inline double sample_distance(const Matrix& a, const Matrix& b) {
  return spectral_norm(a - b);
}

// ---------------------------------------------------------------------------
// Continuity diagnostics (sampled-resolution, not a proof of continuity)
// ---------------------------------------------------------------------------

struct ContinuityReport {
  double max_gap = 0.0;
  std::size_t max_location = 0;  // index j of the step (j, j+1)
  double closure_gap = 0.0;
  double budget = 0.0;
  bool pass = false;
};

template <typename Sample>
inline ContinuityReport continuity_report(const SampledLoop<Sample>& loop,
                                          double budget) {
  validate_loop(loop);
  ContinuityReport report;
  report.budget = budget;
  for (std::size_t j = 0; j + 1 < loop.samples.size(); ++j) {
    const double gap = sample_distance(loop.samples[j], loop.samples[j + 1]);
    if (gap > report.max_gap) {
      report.max_gap = gap;
      report.max_location = j;
    }
  }
  if (loop.closed)
    report.closure_gap =
        sample_distance(loop.samples.back(), loop.samples.front());
  report.pass = report.max_gap <= budget;
  return report;
}

/// Two-family diagnostic: the derived intersection and sum families are
/// continuous together (or not); reports their max consecutive gaps as well.
struct PairContinuityReport {
  ContinuityReport first;
  ContinuityReport second;
  double max_cap_gap = 0.0;
  double max_sum_gap = 0.0;
  bool pass = false;
};

inline PairContinuityReport continuity_report(const SubspaceLoop& a,
                                              const SubspaceLoop& b,
                                              double budget,
                                              const Tolerance& tol = {}) {
  if (a.samples.size() != b.samples.size())
    throw InvalidInput("continuity_report: families have different lengths");
  PairContinuityReport report;
  report.first = continuity_report(a, budget);
  report.second = continuity_report(b, budget);
  std::vector<Subspace> caps, sums;
  caps.reserve(a.samples.size());
  sums.reserve(a.samples.size());
  for (std::size_t j = 0; j < a.samples.size(); ++j) {
    caps.push_back(intersect(a.samples[j], b.samples[j], tol));
    sums.push_back(sum(a.samples[j], b.samples[j], tol));
  }
  for (std::size_t j = 0; j + 1 < caps.size(); ++j) {
    report.max_cap_gap =
        std::max(report.max_cap_gap, gap_distance(caps[j], caps[j + 1]));
    report.max_sum_gap =
        std::max(report.max_sum_gap, gap_distance(sums[j], sums[j + 1]));
  }
  report.pass = report.first.pass && report.second.pass;
  return report;
}

// ---------------------------------------------------------------------------
// Winding numbers
// ---------------------------------------------------------------------------

struct WindingReport {
  long winding = 0;
  double total_phase = 0.0;     // radians
  double max_step_phase = 0.0;  // < π/2 after refinement
  bool refined = false;
};

using UnitaryGenerator = std::function<Matrix(double)>;

namespace detail {

inline double det_phase_step(const Matrix& from, const Matrix& to) {
  return std::arg((to * from.adjoint()).determinant());
}

inline double accumulate_phase(double t0, double t1, const Matrix& u0,
                               const Matrix& u1, const UnitaryGenerator& gen,
                               int depth, WindingReport& report) {
  const double phase = det_phase_step(u0, u1);
  if (std::abs(phase) < kPi / 2.0) {
    report.max_step_phase = std::max(report.max_step_phase, std::abs(phase));
    return phase;
  }
  if (!gen)
    throw InsufficientSampling(
        "winding: step phase " + std::to_string(phase) + " at t in [" +
        std::to_string(t0) + "," + std::to_string(t1) +
        "] exceeds π/2 and no generator is available");
  if (depth <= 0)
    throw InsufficientSampling("winding: bisection depth exhausted at t in [" +
                               std::to_string(t0) + "," + std::to_string(t1) +
                               "]");
  report.refined = true;
  const double tm = 0.5 * (t0 + t1);
  Matrix um = gen(tm);
  return accumulate_phase(t0, tm, u0, um, gen, depth - 1, report) +
         accumulate_phase(tm, t1, um, u1, gen, depth - 1, report);
}

}  // namespace detail

/// Degree of det along a closed loop of unitaries: (1/2π) Σ arg det(u_{j+1}
/// u_j^{-1}), with each step phase kept below π/2, bisecting through the
/// generator where needed (depth ≤ max_depth). The total is within 1e−6 of an
/// integer multiple of 2π.
inline WindingReport winding_number(const UnitaryLoop& loop,
                                    const Tolerance& tol = {},
                                    const UnitaryGenerator& generator = {},
                                    int max_depth = 12) {
  validate_loop(loop);
  for (std::size_t j = 0; j < loop.samples.size(); ++j) {
    const Matrix& u = loop.samples[j];
    if (u.rows() != u.cols())
      throw NotUnitary("winding: sample " + std::to_string(j) + " not square");
    Matrix defect = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
    if (spectral_norm(defect) > tol.gap_abs)
      throw NotUnitary("winding: sample " + std::to_string(j) +
                       " is not unitary within tolerance");
  }
  if (!loop.closed) throw NotClosed("winding: loop is not declared closed");
  const double closure =
      spectral_norm(loop.samples.back() - loop.samples.front());
  if (closure > tol.gap_abs)
    throw NotClosed("winding: closure gap " + std::to_string(closure) +
                    " exceeds tolerance");

  WindingReport report;
  for (std::size_t j = 0; j + 1 < loop.samples.size(); ++j)
    report.total_phase += detail::accumulate_phase(
        loop.params[j], loop.params[j + 1], loop.samples[j],
        loop.samples[j + 1], generator, max_depth, report);
  report.winding = std::lround(report.total_phase / (2.0 * kPi));
  const double residual =
      std::abs(report.total_phase / (2.0 * kPi) -
               static_cast<double>(report.winding));
  if (residual > 1e-6)
    throw InsufficientSampling("winding: total phase " +
                               std::to_string(report.total_phase) +
                               " is not an integer multiple of 2π");
  return report;
}

using SubspaceGenerator = std::function<Subspace(double)>;

/// Winding of det(−κ(l_x; m)) for a closed loop of Lagrangians against a fixed
/// Lagrangian m; the concrete K¹ index of the loop over the circle.
inline WindingReport k1_lagrangian_loop_index(
    const SymplecticSpace& sp, const SubspaceLoop& loop, const Subspace& m,
    const Tolerance& tol = {}, const SubspaceGenerator& generator = {},
    int max_depth = 12) {
  validate_loop(loop);
  if (!is_lagrangian(sp, m, tol))
    throw NotLagrangian("k1 loop: reference subspace is not Lagrangian");
  if (!loop.closed) throw NotClosed("k1 loop: loop is not declared closed");
  if (gap_distance(loop.samples.back(), loop.samples.front()) > tol.gap_abs)
    throw NotClosed("k1 loop: loop does not close up");
  UnitaryLoop uloop;
  uloop.params = loop.params;
  uloop.closed = true;
  uloop.samples.reserve(loop.samples.size());
  for (std::size_t j = 0; j < loop.samples.size(); ++j) {
    if (!is_lagrangian(sp, loop.samples[j], tol))
      throw NotLagrangian("k1 loop: sample " + std::to_string(j) +
                          " is not Lagrangian");
    uloop.samples.push_back(-relative_unitary(sp, loop.samples[j], m, tol));
  }
  UnitaryGenerator ugen;
  if (generator)
    ugen = [&sp, &m, &tol, &generator](double t) {
      return Matrix(-relative_unitary(sp, generator(t), m, tol));
    };
  return winding_number(uloop, tol, ugen, max_depth);
}

// ---------------------------------------------------------------------------
// Index profiles and family theorem verifiers
// ---------------------------------------------------------------------------

struct IndexProfile {
  std::vector<long> values;
  bool constant = true;
};

/// Pointwise index of (pull_back(l_x), m) along a loop of boundary conditions.
inline IndexProfile index_profile(const NestedPair& pair, const Subspace& m,
                                  const SubspaceLoop& loop,
                                  const Tolerance& tol = {}) {
  validate_loop(loop);
  IndexProfile profile;
  profile.values.reserve(loop.samples.size());
  for (const Subspace& l : loop.samples)
    profile.values.push_back(pair_index(pull_back(pair, l, tol), m, tol).index);
  for (long v : profile.values)
    if (v != profile.values.front()) profile.constant = false;
  return profile;
}

/// Per-sample variant: one nested pair per parameter value.
inline IndexProfile index_profile(const std::vector<NestedPair>& pairs,
                                  const Subspace& m, const SubspaceLoop& loop,
                                  const Tolerance& tol = {}) {
  validate_loop(loop);
  if (pairs.size() != loop.samples.size())
    throw InvalidInput("index_profile: one nested pair per sample required");
  IndexProfile profile;
  profile.values.reserve(loop.samples.size());
  for (std::size_t j = 0; j < loop.samples.size(); ++j)
    profile.values.push_back(
        pair_index(pull_back(pairs[j], loop.samples[j], tol), m, tol).index);
  for (long v : profile.values)
    if (v != profile.values.front()) profile.constant = false;
  return profile;
}

struct K0Options {
  bool check_deformation = true;   // deform m along the canonical path
  Index deformation_samples = 5;
  bool declared_constant_defect = false;
};

struct K0FamilyReport {
  std::vector<long> ambient_indices;
  std::vector<long> boundary_indices;
  std::vector<Index> cap_defects;   // dim K per sample
  std::vector<Index> def_defects;   // dim K' per sample
  bool transversal = false;
  bool constant = true;
  bool deformation_checked = false;
};

/// Pointwise + homotopy verification of the index reduction over a loop of
/// boundary conditions: the identity ind(pull_back(l), m) = ind_β(l, γ_!m)
/// (+ defects when m is not transversal) at every sample, constancy of the
/// index along the loop, and constancy along the canonical deformation of m.
inline K0FamilyReport k0_family_report(const NestedPair& pair,
                                       const Subspace& m,
                                       const SubspaceLoop& loop,
                                       const K0Options& options = {},
                                       const Tolerance& tol = {}) {
  validate_loop(loop);
  K0FamilyReport report;
  RelativePosition rel = classify_relative(pair, m, tol);
  report.transversal = rel.transversal;
  for (const Subspace& l : loop.samples) {
    IndexReductionReport step = index_reduction_report(pair, m, l, tol);
    report.ambient_indices.push_back(step.ambient_index);
    report.boundary_indices.push_back(step.boundary_index);
    report.cap_defects.push_back(step.cap_defect);
    report.def_defects.push_back(step.def_defect);
  }
  for (long v : report.ambient_indices)
    if (v != report.ambient_indices.front()) report.constant = false;
  if (!report.constant)
    throw FormulaViolation("k0 family: index is not constant along the loop");
  if (options.declared_constant_defect) {
    for (std::size_t j = 0; j < report.cap_defects.size(); ++j)
      if (report.cap_defects[j] != report.cap_defects.front() ||
          report.def_defects[j] != report.def_defects.front())
        throw NonconstantDefect("k0 family: defect dimension jumps at sample " +
                                std::to_string(j));
  }
  if (report.transversal && options.check_deformation &&
      options.deformation_samples > 1) {
    TransversalCoordinates coords = transversal_coordinates(pair, m, tol);
    const long baseline = report.ambient_indices.front();
    for (Index k = 0; k < options.deformation_samples; ++k) {
      const double t = static_cast<double>(k) /
                       static_cast<double>(options.deformation_samples - 1);
      Subspace m_t = transversal_path(coords, t);
      const long deformed =
          pair_index(pull_back(pair, loop.samples.front(), tol), m_t, tol).index;
      if (deformed != baseline)
        throw FormulaViolation(
            "k0 family: index not constant along the canonical path, t = " +
            std::to_string(t));
    }
    report.deformation_checked = true;
  }
  return report;
}

/// Per-sample nested pairs (a discretized family of pairs) with a fixed m.
inline K0FamilyReport k0_family_report(const std::vector<NestedPair>& pairs,
                                       const Subspace& m,
                                       const SubspaceLoop& loop,
                                       const K0Options& options = {},
                                       const Tolerance& tol = {}) {
  validate_loop(loop);
  if (pairs.size() != loop.samples.size())
    throw InvalidInput("k0 family: one nested pair per sample required");
  K0FamilyReport report;
  for (std::size_t j = 0; j < pairs.size(); ++j) {
    IndexReductionReport step =
        index_reduction_report(pairs[j], m, loop.samples[j], tol);
    report.ambient_indices.push_back(step.ambient_index);
    report.boundary_indices.push_back(step.boundary_index);
    report.cap_defects.push_back(step.cap_defect);
    report.def_defects.push_back(step.def_defect);
  }
  for (long v : report.ambient_indices)
    if (v != report.ambient_indices.front()) report.constant = false;
  if (!report.constant)
    throw FormulaViolation("k0 family: index is not constant along the family");
  if (options.declared_constant_defect) {
    for (std::size_t j = 0; j < report.cap_defects.size(); ++j)
      if (report.cap_defects[j] != report.cap_defects.front() ||
          report.def_defects[j] != report.def_defects.front())
        throw NonconstantDefect("k0 family: defect dimension jumps at sample " +
                                std::to_string(j));
  }
  return report;
}

/// Operator form: verifies the realization index formula at every sample (the
/// kernel/cokernel route) against the graph route ind(pull_back(l), H ⊕ 0),
/// plus index constancy along the loop.
inline K0FamilyReport k0_family_report(const OperatorPair& op,
                                       const SubspaceLoop& loop,
                                       const K0Options& options = {},
                                       const Tolerance& tol = {}) {
  validate_loop(loop);
  NestedPair graphs = graph_pair(op, tol);
  Subspace m = horizontal(op.space_dim);
  K0FamilyReport report;
  RelativePosition rel = classify_relative(graphs, m, tol);
  report.transversal = rel.transversal;
  for (const Subspace& l : loop.samples) {
    PointFormulaReport point = verify_point_index_formula(op, l, tol);
    IndexReductionReport step = index_reduction_report(graphs, m, l, tol);
    if (step.ambient_index != point.index_realized)
      throw FormulaViolation(
          "k0 family: graph route and operator route disagree");
    report.ambient_indices.push_back(step.ambient_index);
    report.boundary_indices.push_back(step.boundary_index);
    report.cap_defects.push_back(step.cap_defect);
    report.def_defects.push_back(step.def_defect);
  }
  for (long v : report.ambient_indices)
    if (v != report.ambient_indices.front()) report.constant = false;
  if (!report.constant)
    throw FormulaViolation("k0 family: index is not constant along the loop");
  if (options.declared_constant_defect) {
    for (std::size_t j = 0; j < report.cap_defects.size(); ++j)
      if (report.cap_defects[j] != report.cap_defects.front() ||
          report.def_defects[j] != report.def_defects.front())
        throw NonconstantDefect("k0 family: defect dimension jumps at sample " +
                                std::to_string(j));
  }
  return report;
}

struct K1FamilyReport {
  WindingReport ambient;   // winding of det(−κ(pull_back(l_x); m)) in Ĥ
  WindingReport boundary;  // winding of det(−κ(l_x; γ_!m)) in β
};

/// The two windings are computed in different symplectic spaces with
/// independently constructed eigenbases; their equality is the sampled K¹
/// index theorem, not a tautology.
inline K1FamilyReport k1_family_report(const SymplecticSpace& sp,
                                       const Subspace& gamma,
                                       const Subspace& m,
                                       const SubspaceLoop& loop,
                                       const Tolerance& tol = {}) {
  validate_loop(loop);
  if (!is_isotropic(sp, gamma, tol))
    throw NotIsotropic("k1 family: gamma is not isotropic");
  NestedPair nested = make_nested(gamma, annihilator(sp, gamma, tol), tol);
  SymplecticSpace bsp = boundary_form(sp, nested, tol);
  if (!is_lagrangian(sp, m, tol))
    throw NotLagrangian("k1 family: m is not Lagrangian");
  RelativePosition rel = classify_relative(nested, m, tol);
  if (!rel.transversal)
    throw NotTransversal("k1 family: m is not transversal to (Γ, Γ^ω)");
  Subspace target = push_forward(nested, m, tol);

  SubspaceLoop ambient_loop;
  ambient_loop.params = loop.params;
  ambient_loop.closed = loop.closed;
  for (const Subspace& l : loop.samples)
    ambient_loop.samples.push_back(pull_back(nested, l, tol));

  K1FamilyReport report;
  report.boundary = k1_lagrangian_loop_index(bsp, loop, target, tol);
  report.ambient = k1_lagrangian_loop_index(sp, ambient_loop, m, tol);
  if (report.ambient.winding != report.boundary.winding)
    throw FormulaViolation(
        "k1 family: ambient winding " + std::to_string(report.ambient.winding) +
        " != boundary winding " + std::to_string(report.boundary.winding));
  return report;
}

/// Per-sample isotropic subspaces (a discretized family of pairs); their
/// dimension must be constant along the loop.
inline K1FamilyReport k1_family_report(const SymplecticSpace& sp,
                                       const std::vector<Subspace>& gammas,
                                       const Subspace& m,
                                       const SubspaceLoop& loop,
                                       const Tolerance& tol = {}) {
  validate_loop(loop);
  if (gammas.size() != loop.samples.size())
    throw InvalidInput("k1 family: one gamma per sample required");
  for (std::size_t j = 0; j < gammas.size(); ++j)
    if (gammas[j].dim() != gammas.front().dim())
      throw NonconstantDefect("k1 family: dim gamma jumps at sample " +
                              std::to_string(j));

  UnitaryLoop boundary_loop, ambient_loop;
  boundary_loop.params = ambient_loop.params = loop.params;
  boundary_loop.closed = ambient_loop.closed = loop.closed;
  for (std::size_t j = 0; j < gammas.size(); ++j) {
    if (!is_isotropic(sp, gammas[j], tol))
      throw NotIsotropic("k1 family: gamma is not isotropic at sample " +
                         std::to_string(j));
    NestedPair nested =
        make_nested(gammas[j], annihilator(sp, gammas[j], tol), tol);
    SymplecticSpace bsp = boundary_form(sp, nested, tol);
    RelativePosition rel = classify_relative(nested, m, tol);
    if (!rel.transversal)
      throw NotTransversal("k1 family: m not transversal at sample " +
                           std::to_string(j));
    Subspace target = push_forward(nested, m, tol);
    boundary_loop.samples.push_back(
        -relative_unitary(bsp, loop.samples[j], target, tol));
    ambient_loop.samples.push_back(
        -relative_unitary(sp, pull_back(nested, loop.samples[j], tol), m, tol));
  }
  K1FamilyReport report;
  report.boundary = winding_number(boundary_loop, tol);
  report.ambient = winding_number(ambient_loop, tol);
  if (report.ambient.winding != report.boundary.winding)
    throw FormulaViolation(
        "k1 family: ambient winding " + std::to_string(report.ambient.winding) +
        " != boundary winding " + std::to_string(report.boundary.winding));
  return report;
}

}  // namespace fredholm
