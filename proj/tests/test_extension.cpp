#include <catch2/catch_amalgamated.hpp>

#include "fredholm/extension.hpp"
#include "fredholm/sampling.hpp"

using namespace fredholm;

namespace {

Subspace line(std::initializer_list<Complex> entries) {
  Matrix m(static_cast<Index>(entries.size()), 1);
  Index i = 0;
  for (Complex v : entries) m(i++, 0) = v;
  return Subspace::span(m);
}

// A on span{e1} ⊂ C^2 with A' the identity on C^2; the boundary space of the
// graphs is one-dimensional.
OperatorPair identity_action_instance() {
  Matrix action = Matrix::Identity(2, 2);
  Matrix dom_min(2, 1);
  dom_min << 1.0, 0.0;
  return make_operator_pair(action, Subspace::full(2),
                            Subspace::span(dom_min));
}

OperatorPair diag01_instance() {
  Matrix action = Matrix::Zero(2, 2);
  action(1, 1) = 1.0;
  return make_operator_pair(action, Subspace::full(2), Subspace::zero(2));
}

}  // namespace

TEST_CASE("make_nested degenerate cases") {
  Rng rng(3);
  Subspace g = random_subspace(rng, 5, 2);
  NestedPair same = make_nested(g, g);
  REQUIRE(same.boundary_dim() == 0);

  NestedPair from_zero = make_nested(Subspace::zero(5), g);
  REQUIRE(gap_distance(from_zero.boundary, g) < 1e-12);
}

TEST_CASE("make_nested computes the boundary complement") {
  Subspace inner = line({1.0, 0.0, 1.0, 0.0});
  Matrix outer_gen(4, 2);
  outer_gen << 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0;
  Subspace outer = Subspace::span(outer_gen);
  NestedPair pair = make_nested(inner, outer);
  REQUIRE(pair.boundary_dim() == 1);
  REQUIRE(gap_distance(pair.boundary, line({0.0, 1.0, 0.0, 1.0})) < 1e-12);
}

TEST_CASE("make_nested rejects non-nested inputs") {
  Rng rng(5);
  Subspace a = random_subspace(rng, 4, 2);
  Subspace b = random_subspace(rng, 4, 2);
  REQUIRE_THROWS_AS(make_nested(a, b), NotNested);
}

TEST_CASE("pull_back endpoints") {
  Rng rng(7);
  NestedPair pair = random_nested(rng, 6);
  const Index b = pair.boundary_dim();
  REQUIRE(gap_distance(pull_back(pair, Subspace::zero(b)), pair.inner) <
          1e-12);
  REQUIRE(gap_distance(pull_back(pair, Subspace::full(b)), pair.outer) <
          1e-10);
}

TEST_CASE("pull_back matches the frame-union oracle") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    NestedPair pair = random_nested(rng, 8);
    const Index b = pair.boundary_dim();
    Subspace l = random_subspace(rng, b, random_index(rng, 0, b));
    Subspace lifted = lift_from_boundary(pair, l);
    Matrix stacked(8, lifted.dim() + pair.inner.dim());
    stacked << lifted.basis(), pair.inner.basis();
    Subspace oracle = Subspace::span(stacked);
    Subspace pulled = pull_back(pair, l);
    REQUIRE(pulled.dim() == l.dim() + pair.inner.dim());
    REQUIRE(gap_distance(pulled, oracle) < 1e-10);
    REQUIRE(contains(pulled, pair.inner));
    REQUIRE(contains(pair.outer, pulled));
  }
}

TEST_CASE("pull_back rejects boundary mismatch") {
  Rng rng(13);
  NestedPair pair = random_nested(rng, 6);
  Subspace wrong = random_subspace(rng, pair.boundary_dim() + 1, 1);
  REQUIRE_THROWS_AS(pull_back(pair, wrong), NotInBeta);
}

TEST_CASE("push_forward endpoints and retraction") {
  Rng rng(17);
  NestedPair pair = random_nested(rng, 7);
  const Index b = pair.boundary_dim();
  REQUIRE(push_forward(pair, pair.outer).dim() == b);

  for (int trial = 0; trial < 10; ++trial) {
    Subspace l = random_subspace(rng, b, random_index(rng, 0, b));
    Subspace back = push_forward(pair, pull_back(pair, l));
    REQUIRE(gap_distance(back, l) < 1e-9);
  }
}

TEST_CASE("push_forward of the horizontal space through an identity graph") {
  // outer = graph of the identity on C^2, inner = 0; the horizontal subspace
  // misses the graph entirely.
  Matrix graph_gen(4, 2);
  graph_gen << 1.0, 0.0, 0.0, 1.0, 1.0, 0.0, 0.0, 1.0;
  NestedPair pair =
      make_nested(Subspace::zero(4), Subspace::span(graph_gen));
  Subspace pushed = push_forward(pair, horizontal(2));
  REQUIRE(pushed.dim() == 0);

  RelativePosition rel = classify_relative(pair, horizontal(2));
  REQUIRE(rel.transversal);
}

TEST_CASE("classify_relative examples") {
  Rng rng(19);
  NestedPair pair = random_nested(rng, 8);
  RelativePosition on_inner = classify_relative(pair, pair.inner);
  REQUIRE(on_inner.dim_cap_min == pair.inner.dim());
  if (pair.inner.dim() > 0) REQUIRE_FALSE(on_inner.transversal);

  // The exterior complement is transversal: F ⊕ outer = ambient.
  RelativePosition on_exterior = classify_relative(pair, pair.exterior);
  REQUIRE(on_exterior.dim_cap_min == 0);
  REQUIRE(on_exterior.def_max == 0);
  REQUIRE(on_exterior.transversal);
}

TEST_CASE("graph_pair examples") {
  // Zero action on the full domain: the graph is the horizontal subspace.
  OperatorPair zero_op = make_operator_pair(
      Matrix::Zero(3, 3), Subspace::full(3), Subspace::zero(3));
  NestedPair graphs = graph_pair(zero_op);
  REQUIRE(gap_distance(graphs.outer, horizontal(3)) < 1e-12);

  OperatorPair same_domains = make_operator_pair(
      Matrix::Identity(2, 2), Subspace::full(2), Subspace::full(2));
  REQUIRE(graph_pair(same_domains).boundary_dim() == 0);

  NestedPair idg = graph_pair(identity_action_instance());
  REQUIRE(idg.inner.dim() == 1);
  REQUIRE(idg.outer.dim() == 2);
  REQUIRE(contains(idg.outer, idg.inner));
}

TEST_CASE("cauchy_data examples") {
  Rng rng(23);
  // Invertible maximal operator: trivial Cauchy data.
  Matrix action = random_gaussian(rng, 3, 3) + 4.0 * Matrix::Identity(3, 3);
  OperatorPair invertible = make_operator_pair(
      action, Subspace::full(3), random_subspace(rng, 3, 1));
  REQUIRE(cauchy_data(invertible).dim() == 0);

  // diag(0,1) on the full domain: ker A' = span{e1}, trace has dimension 1.
  OperatorPair diag = diag01_instance();
  Subspace c = cauchy_data(diag);
  REQUIRE(c.dim() == 1);
}

TEST_CASE("cauchy_data agrees with the push-forward of the horizontal space") {
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = random_index(rng, 1, 6);
    OperatorPair op = random_operator_pair(rng, n);
    NestedPair graphs = graph_pair(op);
    Subspace via_kernel = cauchy_data(op, graphs);
    Subspace via_push = push_forward(graphs, horizontal(n));
    REQUIRE(via_kernel.dim() == via_push.dim());
    REQUIRE(gap_distance(via_kernel, via_push) < 1e-10);
  }
}

TEST_CASE("realization of the identity-action instance") {
  OperatorPair op = identity_action_instance();
  NestedPair graphs = graph_pair(op);
  REQUIRE(graphs.boundary_dim() == 1);

  // l = 0 selects the minimal operator: kernel 0, cokernel 1, index -1.
  Realization minimal = realization(op, Subspace::zero(1));
  REQUIRE(minimal.kernel.dim() == 0);
  REQUIRE(minimal.coker_dim == 1);
  REQUIRE(minimal.index == -1);

  // l = β selects the maximal operator, which is invertible.
  Realization maximal = realization(op, Subspace::full(1));
  REQUIRE(maximal.index == 0);
  REQUIRE(maximal.kernel.dim() == 0);
  REQUIRE(maximal.coker_dim == 0);
}

TEST_CASE("realization of the diag(0,1) instance at the Cauchy data") {
  OperatorPair op = diag01_instance();
  Subspace c = cauchy_data(op);
  Realization at_c = realization(op, c);
  REQUIRE(at_c.kernel.dim() == 1);
  REQUIRE(at_c.coker_dim == 2);
  REQUIRE(at_c.index == -1);
}

TEST_CASE("realization graph identity") {
  Rng rng(31);
  for (int trial = 0; trial < 15; ++trial) {
    const Index n = random_index(rng, 1, 6);
    OperatorPair op = random_operator_pair(rng, n);
    NestedPair graphs = graph_pair(op);
    const Index b = graphs.boundary_dim();
    Subspace l = random_subspace(rng, b, random_index(rng, 0, b));
    Realization real = realization(op, l);
    Subspace regraph = operator_graph(op.action, real.domain);
    REQUIRE(gap_distance(regraph, pull_back(graphs, l)) < 1e-9);
  }
}

TEST_CASE("operator/graph index dictionary") {
  Rng rng(37);
  for (int trial = 0; trial < 15; ++trial) {
    const Index n = random_index(rng, 1, 6);
    OperatorPair op = random_operator_pair(rng, n);
    NestedPair graphs = graph_pair(op);
    const Index b = graphs.boundary_dim();
    Subspace l = random_subspace(rng, b, random_index(rng, 0, b));
    Realization real = realization(op, l);
    const long graph_route =
        pair_index(pull_back(graphs, l), horizontal(n)).index;
    REQUIRE(real.index == graph_route);
  }
}

TEST_CASE("point index formula on the worked instances") {
  PointFormulaReport id0 =
      verify_point_index_formula(identity_action_instance(), Subspace::zero(1));
  REQUIRE(id0.index_realized == -1);
  REQUIRE(id0.index_boundary == -1);

  OperatorPair diag = diag01_instance();
  Subspace c = cauchy_data(diag);
  PointFormulaReport at_c = verify_point_index_formula(diag, c);
  REQUIRE(at_c.index_realized == -1);
  REQUIRE(at_c.dim_cap_lc == 1);
  REQUIRE(at_c.codim_sum_lc == 1);
  REQUIRE(at_c.ker_min == 0);
  REQUIRE(at_c.coker_max == 1);
}

TEST_CASE("point index formula on 200 random instances") {
  for (int trial = 0; trial < 200; ++trial) {
    Rng rng(derive_seed(0xF0F0F0F0ull, static_cast<std::uint64_t>(trial)));
    const Index n = random_index(rng, 1, 8);
    OperatorPair op = random_operator_pair(rng, n);
    const Index b = graph_pair(op).boundary_dim();
    Subspace l = random_subspace(rng, b, random_index(rng, 0, b));
    REQUIRE_NOTHROW(verify_point_index_formula(op, l));
  }
}

TEST_CASE("exact-sequence dimension identities for nested pairs") {
  Rng rng(41);
  for (int trial = 0; trial < 25; ++trial) {
    const Index n = random_index(rng, 2, 9);
    NestedPair pair = random_nested(rng, n);
    const Index b = pair.boundary_dim();
    Subspace l = random_subspace(rng, b, random_index(rng, 0, b));
    Subspace m = random_subspace(rng, n, random_index(rng, 0, n));

    Subspace pulled = pull_back(pair, l);
    Subspace pushed = push_forward(pair, m);

    // dim(pull_back(l) ∩ m) = dim(m ∩ inner) + dim(l ∩ push_forward(m))
    const Index lhs_cap = intersect(pulled, m).dim();
    const Index rhs_cap =
        intersect(m, pair.inner).dim() + intersect(l, pushed).dim();
    REQUIRE(lhs_cap == rhs_cap);

    // codim(pull_back(l) + m) = codim(outer + m) + codim_β(l + push_forward(m))
    const Index lhs_codim = n - sum(pulled, m).dim();
    const Index rhs_codim =
        (n - sum(pair.outer, m).dim()) + (b - sum(l, pushed).dim());
    REQUIRE(lhs_codim == rhs_codim);
  }
}

TEST_CASE("transversality transfers through the trace") {
  Rng rng(43);
  for (int trial = 0; trial < 20; ++trial) {
    const Index n = random_index(rng, 2, 9);
    NestedPair pair = random_nested(rng, n);
    const Index b = pair.boundary_dim();
    Subspace target = random_subspace(rng, b, random_index(rng, 0, b));
    Subspace m = random_transversal(rng, pair, target);
    REQUIRE(classify_relative(pair, m).transversal);
    REQUIRE(gap_distance(push_forward(pair, m), target) < 1e-9);

    Subspace l = random_subspace(rng, b, random_index(rng, 0, b));
    const bool big = pair_index(pull_back(pair, l), m).transversal;
    const bool small = pair_index(l, target).transversal;
    REQUIRE(big == small);
  }
}

TEST_CASE("reduction identity examples") {
  Rng rng(47);
  NestedPair pair = random_nested(rng, 10);
  const Index b = pair.boundary_dim();
  Subspace l = random_subspace(rng, b, random_index(rng, 0, b));

  // m = inner: K = inner, K' = exterior.
  IndexReductionReport on_inner =
      index_reduction_report(pair, pair.inner, l);
  REQUIRE(on_inner.cap_defect == pair.inner.dim());
  REQUIRE(on_inner.def_defect == pair.exterior.dim());

  // Random non-transversal m in C^10.
  for (int trial = 0; trial < 20; ++trial) {
    Subspace m = random_subspace(rng, 10, random_index(rng, 0, 10));
    REQUIRE_NOTHROW(index_reduction_report(pair, m, l));
  }

  // Transversal m reduces to the plain identity.
  Subspace target = random_subspace(rng, b, random_index(rng, 0, b));
  Subspace m = random_transversal(rng, pair, target);
  IndexReductionReport tr = index_reduction_report(pair, m, l);
  REQUIRE(tr.transversal);
  REQUIRE(tr.cap_defect == 0);
  REQUIRE(tr.def_defect == 0);
  REQUIRE(tr.ambient_index == tr.boundary_index);
}
