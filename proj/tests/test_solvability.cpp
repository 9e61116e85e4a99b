#include <doctest.h>

#include <Eigen/SVD>

#include "graphinv/newton.hpp"
#include "test_util.hpp"

using namespace graphinv;
using doctest::Approx;

namespace {

const Graph kK2 = build_graph(2, {0, 1}, {{0, 1}});
const Graph kPath = build_graph(3, {0, 1}, {{0, 2}, {1, 2}});
const Graph kEdgeBI = build_graph(2, {0}, {{0, 1}});
const Graph kStar = build_graph(4, {0, 1, 2}, {{0, 3}, {1, 3}, {2, 3}});

EdgeWeights ew(std::initializer_list<Cplx> values) {
  EdgeWeights w{Eigen::VectorXcd(static_cast<Eigen::Index>(values.size()))};
  Eigen::Index k = 0;
  for (const Cplx& v : values) w.values[k++] = v;
  return w;
}

NodeWeights nw(std::initializer_list<Cplx> values) {
  NodeWeights w{Eigen::VectorXcd(static_cast<Eigen::Index>(values.size()))};
  Eigen::Index k = 0;
  for (const Cplx& v : values) w.values[k++] = v;
  return w;
}

// Central finite differences of the DtN map in the conductivity.
Eigen::MatrixXcd fd_jacobian_conductivity(const Graph& g,
                                          const EdgeWeights& gamma,
                                          double h) {
  const int nb = g.num_boundary();
  const NodeWeights q0 = NodeWeights::zeros(g.num_interior());
  Eigen::MatrixXcd jac(nb * nb, g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    EdgeWeights up = gamma, down = gamma;
    up.values[e] += h;
    down.values[e] -= h;
    const Eigen::MatrixXcd diff =
        (dtn_map(g, up, q0).matrix - dtn_map(g, down, q0).matrix) / (2 * h);
    jac.col(e) = Eigen::Map<const Eigen::VectorXcd>(diff.data(), diff.size());
  }
  return jac;
}

Eigen::MatrixXcd fd_jacobian_schrodinger(const Graph& g,
                                         const EdgeWeights& gamma,
                                         const NodeWeights& q, double h) {
  const int nb = g.num_boundary();
  Eigen::MatrixXcd jac(nb * nb, g.num_interior());
  for (int v = 0; v < g.num_interior(); ++v) {
    NodeWeights up = q, down = q;
    up.values[v] += h;
    down.values[v] -= h;
    const Eigen::MatrixXcd diff =
        (dtn_map(g, gamma, up).matrix - dtn_map(g, gamma, down).matrix) /
        (2 * h);
    jac.col(v) = Eigen::Map<const Eigen::VectorXcd>(diff.data(), diff.size());
  }
  return jac;
}

double max_relative_error(const Eigen::MatrixXcd& got,
                          const Eigen::MatrixXcd& want) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < got.rows(); ++i)
    for (Eigen::Index j = 0; j < got.cols(); ++j)
      if (std::abs(want(i, j)) > 1e-8)
        worst = std::max(worst, std::abs(got(i, j) - want(i, j)) /
                                    std::abs(want(i, j)));
  return worst;
}

}  // namespace

TEST_CASE("harmonic_basis") {
  const Eigen::MatrixXcd u =
      harmonic_basis(kPath, ew({1.0, 1.0}), NodeWeights::zeros(1));
  CHECK((u(0, 0) == Cplx{1, 0}));
  CHECK((u(1, 1) == Cplx{1, 0}));
  CHECK(std::abs(u(2, 0) - 0.5) < 1e-15);
  CHECK(std::abs(u(2, 1) - 0.5) < 1e-15);

  const Eigen::MatrixXcd id =
      harmonic_basis(kK2, ew({2.0}), NodeWeights::zeros(0));
  CHECK((id - Eigen::MatrixXcd::Identity(2, 2)).norm() == 0.0);

  const Eigen::MatrixXcd dangling =
      harmonic_basis(kEdgeBI, ew({1.0}), NodeWeights::zeros(1));
  CHECK(std::abs(dangling(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(dangling(1, 0) - 1.0) < 1e-15);
}

TEST_CASE("product_gradients_matrix") {
  SUBCASE("K2 is the rank-one [1,-1,-1,1]") {
    const ProductMatrixF f = product_gradients_matrix(kK2, ew({1.5}), ew({1.5}));
    CHECK(f.matrix.rows() == 1);
    CHECK(f.matrix.cols() == 4);
    CHECK((f.matrix(0, 0) == Cplx{1, 0}));
    CHECK((f.matrix(0, 1) == Cplx{-1, 0}));
    CHECK((f.matrix(0, 2) == Cplx{-1, 0}));
    CHECK((f.matrix(0, 3) == Cplx{1, 0}));
    CHECK(numeric_rank(f.matrix, 1e-9) == 1);
  }
  SUBCASE("path b-i-b: entries +-0.25, rank deficient") {
    const ProductMatrixF f =
        product_gradients_matrix(kPath, ew({1.0, 1.0}), ew({1.0, 1.0}));
    CHECK(f.matrix.cwiseAbs().maxCoeff() == Approx(0.25));
    CHECK(f.matrix.cwiseAbs().minCoeff() == Approx(0.25));
    CHECK(numeric_rank(f.matrix, 1e-9) == 1);
  }
  SUBCASE("argument swap permutes columns, singular values invariant") {
    RngStream rng(31, 0);
    for (int trial = 0; trial < 10; ++trial) {
      const Graph g = test::random_admissible_graph(rng);
      const EdgeWeights g1 = test::random_admissible_weights(g, rng);
      const EdgeWeights g2 = test::random_admissible_weights(g, rng);
      const Eigen::VectorXd s1 =
          Eigen::JacobiSVD<Eigen::MatrixXcd>(
              product_gradients_matrix(g, g1, g2).matrix)
              .singularValues();
      const Eigen::VectorXd s2 =
          Eigen::JacobiSVD<Eigen::MatrixXcd>(
              product_gradients_matrix(g, g2, g1).matrix)
              .singularValues();
      CHECK((s1 - s2).norm() <= 1e-12 * (1 + s1.norm()));
    }
  }
}

TEST_CASE("product_solutions_matrix") {
  SUBCASE("single dangling edge") {
    const Cplx q1{0.5, 0.3}, q2{1.0, -0.2};
    const ProductMatrixG g =
        product_solutions_matrix(kEdgeBI, ew({1.0}), nw({q1}), nw({q2}));
    CHECK(g.matrix.rows() == 1);
    CHECK(g.matrix.cols() == 1);
    CHECK(std::abs(g.matrix(0, 0) - 1.0 / ((1.0 + q1) * (1.0 + q2))) < 1e-15);
  }
  SUBCASE("star: all entries 1/9, rank 1 = |I|") {
    const ProductMatrixG g = product_solutions_matrix(
        kStar, ew({1.0, 1.0, 1.0}), nw({0.0}), nw({0.0}));
    CHECK(g.matrix.rows() == 1);
    CHECK(g.matrix.cols() == 9);
    for (int c = 0; c < 9; ++c)
      CHECK(std::abs(g.matrix(0, c) - 1.0 / 9.0) < 1e-15);
    CHECK(numeric_rank(g.matrix, 1e-9) == 1);
  }
  SUBCASE("argument swap leaves singular values unchanged") {
    RngStream rng(32, 0);
    for (int trial = 0; trial < 10; ++trial) {
      const Graph g = test::random_admissible_graph(rng, 10, 1);
      const EdgeWeights gamma = test::random_admissible_weights(g, rng);
      const NodeWeights q1 = test::random_potential(g, rng);
      const NodeWeights q2 = test::random_potential(g, rng);
      const Eigen::VectorXd s1 =
          Eigen::JacobiSVD<Eigen::MatrixXcd>(
              product_solutions_matrix(g, gamma, q1, q2).matrix)
              .singularValues();
      const Eigen::VectorXd s2 =
          Eigen::JacobiSVD<Eigen::MatrixXcd>(
              product_solutions_matrix(g, gamma, q2, q1).matrix)
              .singularValues();
      CHECK((s1 - s2).norm() <= 1e-12 * (1 + s1.norm()));
    }
  }
}

TEST_CASE("jacobian_conductivity") {
  SUBCASE("K2: the assembly map itself") {
    const JacobianConductivity jac = jacobian_conductivity(kK2, ew({1.5}));
    Eigen::VectorXcd expected(4);
    expected << 1.0, -1.0, -1.0, 1.0;
    CHECK((jac.matrix.col(0) - expected).norm() == 0.0);
  }
  SUBCASE("finite differences on the path") {
    const EdgeWeights gamma = ew({1.0, 2.0});
    const Eigen::MatrixXcd jac = jacobian_conductivity(kPath, gamma).matrix;
    const Eigen::MatrixXcd fd = fd_jacobian_conductivity(kPath, gamma, 1e-5);
    CHECK(max_relative_error(jac, fd) < 1e-6);
  }
  SUBCASE("finite differences and rank equality on random graphs") {
    RngStream rng(33, 0);
    for (int trial = 0; trial < 20; ++trial) {
      const Graph g = test::random_admissible_graph(rng, 8);
      const EdgeWeights gamma = test::random_admissible_weights(g, rng);
      const Eigen::MatrixXcd jac = jacobian_conductivity(g, gamma).matrix;
      CHECK(max_relative_error(jac, fd_jacobian_conductivity(g, gamma, 1e-5)) <
            1e-6);
      CHECK(numeric_rank(jac, 1e-9) ==
            numeric_rank(product_gradients_matrix(g, gamma, gamma).matrix,
                         1e-9));
    }
  }
}

TEST_CASE("jacobian_schrodinger") {
  SUBCASE("scalar: dLambda/dq = 1 at q = 0") {
    const JacobianSchrodinger jac =
        jacobian_schrodinger(kEdgeBI, ew({1.0}), nw({0.0}));
    CHECK(jac.matrix.rows() == 1);
    CHECK(std::abs(jac.matrix(0, 0) - 1.0) < 1e-15);
  }
  SUBCASE("finite differences on the star") {
    const EdgeWeights gamma = ew({1.0, 1.0, 1.0});
    const NodeWeights q = nw({Cplx{0.25, 0.1}});
    const Eigen::MatrixXcd jac = jacobian_schrodinger(kStar, gamma, q).matrix;
    CHECK(max_relative_error(jac, fd_jacobian_schrodinger(kStar, gamma, q,
                                                          1e-5)) < 1e-6);
  }
  SUBCASE("finite differences and rank equality on random graphs") {
    RngStream rng(34, 0);
    for (int trial = 0; trial < 20; ++trial) {
      const Graph g = test::random_admissible_graph(rng, 8, 1);
      const EdgeWeights gamma = test::random_admissible_weights(g, rng);
      const NodeWeights q = test::random_potential(g, rng);
      const Eigen::MatrixXcd jac = jacobian_schrodinger(g, gamma, q).matrix;
      CHECK(max_relative_error(jac,
                               fd_jacobian_schrodinger(g, gamma, q, 1e-5)) <
            1e-6);
      CHECK(numeric_rank(jac, 1e-9) ==
            numeric_rank(product_solutions_matrix(g, gamma, q, q).matrix,
                         1e-9));
    }
  }
}

TEST_CASE("numeric_rank") {
  CHECK(numeric_rank(Eigen::MatrixXcd::Identity(3, 3), 1e-9) == 3);
  Eigen::MatrixXcd nearly = Eigen::MatrixXcd::Zero(2, 2);
  nearly(0, 0) = 1.0;
  nearly(1, 1) = 1e-15;
  CHECK(numeric_rank(nearly, 1e-9) == 1);
  CHECK(numeric_rank(Eigen::MatrixXcd::Zero(3, 4), 1e-9) == 0);
  CHECK_THROWS_AS(numeric_rank(nearly, 0.0), Error);
  CHECK_THROWS_AS(numeric_rank(nearly, 1.0), Error);
}

TEST_CASE("determinant_rank_oracle") {
  SUBCASE("F of K2") {
    CHECK(determinant_rank_oracle(
              product_gradients_matrix(kK2, ew({1.0}), ew({1.0})).matrix) ==
          1);
  }
  SUBCASE("F of the path: all 2x2 minors vanish") {
    CHECK(determinant_rank_oracle(
              product_gradients_matrix(kPath, ew({1.0, 1.0}), ew({1.0, 1.0}))
                  .matrix) == 1);
  }
  SUBCASE("combinatorial guard") {
    CHECK_THROWS_AS(determinant_rank_oracle(Eigen::MatrixXcd::Zero(9, 9)),
                    TooLargeError);
  }
  SUBCASE("agrees with the SVD rank on small product matrices") {
    RngStream rng(35, 0);
    int checked = 0;
    for (int draws = 0; draws < 4000 && checked < 200; ++draws) {
      const Graph g = test::random_admissible_graph(rng, 5);
      if (g.num_boundary() > 3) continue;
      const EdgeWeights g1 = test::random_admissible_weights(g, rng);
      const EdgeWeights g2 = test::random_admissible_weights(g, rng);
      if (g.num_edges() <= 6) {
        const Eigen::MatrixXcd f = product_gradients_matrix(g, g1, g2).matrix;
        CHECK(determinant_rank_oracle(f) == numeric_rank(f, 1e-9));
        ++checked;
      }
      if (g.num_interior() >= 1 && g.num_interior() <= 6) {
        const Eigen::MatrixXcd gm =
            product_solutions_matrix(g, g1, test::random_potential(g, rng),
                                     test::random_potential(g, rng))
                .matrix;
        CHECK(determinant_rank_oracle(gm) == numeric_rank(gm, 1e-9));
        ++checked;
      }
    }
    CHECK(checked >= 200);
  }
}

TEST_CASE("counting prechecks") {
  // K7, all boundary: |B| = 7, |E| = 21
  std::vector<std::pair<VertexId, VertexId>> k7;
  for (int i = 0; i < 7; ++i)
    for (int j = i + 1; j < 7; ++j) k7.emplace_back(i, j);
  CHECK(counting_precheck_conductivity(
      build_graph(7, {0, 1, 2, 3, 4, 5, 6}, k7)));
  // same 21 edges but only 6 boundary vertices
  CHECK_FALSE(counting_precheck_conductivity(
      build_graph(7, {0, 1, 2, 3, 4, 5}, k7)));
  CHECK(counting_precheck_conductivity(kK2));

  // |B| = 6, |I| = 21 passes; |B| = 5, |I| = 21 fails
  std::vector<std::pair<VertexId, VertexId>> chain27;
  for (int v = 0; v + 1 < 27; ++v) chain27.emplace_back(v, v + 1);
  CHECK(counting_precheck_schrodinger(
      build_graph(27, {0, 1, 2, 3, 4, 5}, chain27)));
  std::vector<std::pair<VertexId, VertexId>> chain26;
  for (int v = 0; v + 1 < 26; ++v) chain26.emplace_back(v, v + 1);
  CHECK_FALSE(counting_precheck_schrodinger(
      build_graph(26, {0, 1, 2, 3, 4}, chain26)));
  CHECK(counting_precheck_schrodinger(kEdgeBI));
}

TEST_CASE("conductivity_recoverable") {
  SUBCASE("K2") {
    const SolvabilityReport r =
        conductivity_recoverable(kK2, EdgeWeights::ones(1), 1e-9);
    CHECK(r.verdict == Verdict::Recoverable);
    CHECK(r.numeric_rank == 1);
    CHECK(r.required_rank == 1);
  }
  SUBCASE("path b-i-b: two edges but one datum, counting fails first") {
    const SolvabilityReport r =
        conductivity_recoverable(kPath, EdgeWeights::ones(2), 1e-9);
    CHECK(r.verdict == Verdict::PrecheckFail);
    CHECK(r.required_rank == 2);
    // the underlying rank deficiency is visible in F itself
    CHECK(numeric_rank(
              product_gradients_matrix(kPath, EdgeWeights::ones(2),
                                       EdgeWeights::ones(2))
                  .matrix,
              1e-9) == 1);
  }
  SUBCASE("pendant interior leaf: counting passes, rank test fails") {
    // boundary 4-cycle with a dangling interior vertex; no current ever
    // flows on the pendant edge, so its weight cannot be identified
    const Graph g = build_graph(
        5, {0, 1, 2, 3}, {{0, 1}, {1, 2}, {2, 3}, {0, 3}, {0, 4}});
    const SolvabilityReport r =
        conductivity_recoverable(g, EdgeWeights::ones(5), 1e-9);
    CHECK(r.verdict == Verdict::NotRecoverable);
    CHECK(r.numeric_rank == 4);
    CHECK(r.required_rank == 5);
  }
  SUBCASE("triangle with all vertices on the boundary") {
    const Graph tri = build_graph(3, {0, 1, 2}, {{0, 1}, {0, 2}, {1, 2}});
    CHECK(conductivity_recoverable(tri, EdgeWeights::ones(3), 1e-9).verdict ==
          Verdict::Recoverable);
  }
  SUBCASE("counting precheck short-circuits without an SVD") {
    std::vector<std::pair<VertexId, VertexId>> k7;
    for (int i = 0; i < 7; ++i)
      for (int j = i + 1; j < 7; ++j) k7.emplace_back(i, j);
    const Graph g = build_graph(7, {0, 1, 2, 3, 4, 5}, k7);
    const SolvabilityReport r =
        conductivity_recoverable(g, EdgeWeights::ones(21), 1e-9);
    CHECK(r.verdict == Verdict::PrecheckFail);
    CHECK(r.sv_ratios.empty());
  }
  SUBCASE("errors") {
    const Graph disconnected = build_graph(4, {0, 1, 2, 3}, {{0, 1}, {2, 3}});
    CHECK_THROWS_AS(
        conductivity_recoverable(disconnected, EdgeWeights::ones(2), 1e-9),
        DisconnectedGraphError);
    CHECK_THROWS_AS(conductivity_recoverable(
                        kK2, EdgeWeights{-Eigen::VectorXcd::Ones(1)}, 1e-9),
                    NotAdmissibleError);
  }
}

TEST_CASE("schrodinger_recoverable") {
  SUBCASE("single dangling edge") {
    CHECK(schrodinger_recoverable(kEdgeBI, EdgeWeights::ones(1),
                                  NodeWeights::zeros(1), 1e-9)
              .verdict == Verdict::Recoverable);
  }
  SUBCASE("|I| = 3, |B| = 1: counting precheck fails") {
    const Graph g = build_graph(4, {0}, {{0, 1}, {1, 2}, {2, 3}});
    const SolvabilityReport r = schrodinger_recoverable(
        g, EdgeWeights::ones(3), NodeWeights::zeros(3), 1e-9);
    CHECK(r.verdict == Verdict::PrecheckFail);
    CHECK(r.sv_ratios.empty());
  }
  SUBCASE("star with three boundary leaves") {
    CHECK(schrodinger_recoverable(kStar, EdgeWeights::ones(3),
                                  NodeWeights::zeros(1), 1e-9)
              .verdict == Verdict::Recoverable);
  }
}

TEST_CASE("interior identity: conductivities") {
  SUBCASE("equal conductivities give zero") {
    RngStream rng(36, 0);
    const Eigen::VectorXcd ub = test::random_complex_vector(2, rng);
    const Eigen::VectorXcd vb = test::random_complex_vector(2, rng);
    CHECK(std::abs(interior_identity_residual_conductivity(
              kPath, ew({1.0, 1.0}), ew({1.0, 1.0}), ub, vb)) < 1e-14);
  }
  SUBCASE("path with distinct conductivities") {
    RngStream rng(37, 0);
    const Eigen::VectorXcd ub = test::random_complex_vector(2, rng);
    const Eigen::VectorXcd vb = test::random_complex_vector(2, rng);
    CHECK(std::abs(interior_identity_residual_conductivity(
              kPath, ew({1.0, 1.0}), ew({2.0, 1.0}), ub, vb)) < 1e-12);
  }
  SUBCASE("random suite") {
    RngStream rng(38, 0);
    for (int trial = 0; trial < 100; ++trial) {
      const Graph g = test::random_admissible_graph(rng);
      const EdgeWeights g1 = test::random_admissible_weights(g, rng);
      const EdgeWeights g2 = test::random_admissible_weights(g, rng);
      const Eigen::VectorXcd ub =
          test::random_complex_vector(g.num_boundary(), rng);
      const Eigen::VectorXcd vb =
          test::random_complex_vector(g.num_boundary(), rng);
      // both sides are assembled from Laplacian-sized quantities, so that
      // norm sets the roundoff scale even when the DtN maps vanish
      const double scale =
          ub.norm() * vb.norm() *
          (assemble_full_laplacian(g, g1).norm() +
           assemble_full_laplacian(g, g2).norm());
      CHECK(std::abs(interior_identity_residual_conductivity(g, g1, g2, ub,
                                                             vb)) <=
            1e-10 * std::max(scale, 1e-30));
    }
  }
}

TEST_CASE("interior identity: Schrodinger potentials") {
  SUBCASE("equal potentials give zero") {
    const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(1);
    CHECK(std::abs(interior_identity_residual_schrodinger(
              kEdgeBI, ew({1.0}), nw({0.5}), nw({0.5}), one, one)) < 1e-14);
  }
  SUBCASE("scalar case: both sides equal -1/2") {
    const Eigen::VectorXcd one = Eigen::VectorXcd::Ones(1);
    const Cplx lhs =
        dtn_map(kEdgeBI, ew({1.0}), nw({0.0})).matrix(0, 0) -
        dtn_map(kEdgeBI, ew({1.0}), nw({1.0})).matrix(0, 0);
    CHECK(std::abs(lhs - Cplx{-0.5, 0.0}) < 1e-15);
    CHECK(std::abs(interior_identity_residual_schrodinger(
              kEdgeBI, ew({1.0}), nw({0.0}), nw({1.0}), one, one)) < 1e-14);
  }
  SUBCASE("random suite") {
    RngStream rng(39, 0);
    for (int trial = 0; trial < 100; ++trial) {
      const Graph g = test::random_admissible_graph(rng, 10, 1);
      const EdgeWeights gamma = test::random_admissible_weights(g, rng);
      const NodeWeights q1 = test::random_potential(g, rng);
      const NodeWeights q2 = test::random_potential(g, rng);
      const Eigen::VectorXcd ub =
          test::random_complex_vector(g.num_boundary(), rng);
      const Eigen::VectorXcd vb =
          test::random_complex_vector(g.num_boundary(), rng);
      const double scale =
          ub.norm() * vb.norm() *
          (assemble_full_laplacian(g, gamma).norm() + q1.values.norm() +
           q2.values.norm());
      CHECK(std::abs(interior_identity_residual_schrodinger(g, gamma, q1, q2,
                                                            ub, vb)) <=
            1e-10 * std::max(scale, 1e-30));
    }
  }
}

TEST_CASE("products of solutions span: random pairs project exactly") {
  RngStream rng(40, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const Graph g = test::random_admissible_graph(rng, 8, 1);
    const EdgeWeights g1 = test::random_admissible_weights(g, rng);
    const EdgeWeights g2 = test::random_admissible_weights(g, rng);
    const Eigen::VectorXcd ub =
        test::random_complex_vector(g.num_boundary(), rng);
    const Eigen::VectorXcd vb =
        test::random_complex_vector(g.num_boundary(), rng);
    const NodeWeights q0 = NodeWeights::zeros(g.num_interior());

    const Eigen::VectorXcd gu =
        apply_gradient(g, DirichletSolver(g, g1, q0).solve(ub));
    const Eigen::VectorXcd gv =
        apply_gradient(g, DirichletSolver(g, g2, q0).solve(vb));
    const Eigen::VectorXcd w = gu.cwiseProduct(gv);
    const Eigen::MatrixXcd f = product_gradients_matrix(g, g1, g2).matrix;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
        f, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXcd proj = f * svd.solve(w);
    // the boundary-data scale covers instances whose gradients vanish
    // identically (|B| = 1 gives constant harmonic extensions)
    CHECK((proj - w).norm() <=
          1e-10 * std::max(w.norm(), ub.norm() * vb.norm()));

    const NodeWeights qa = test::random_potential(g, rng);
    const NodeWeights qb = test::random_potential(g, rng);
    const Eigen::VectorXcd ui = DirichletSolver(g, g1, qa).interior_basis() * ub;
    const Eigen::VectorXcd vi = DirichletSolver(g, g1, qb).interior_basis() * vb;
    const Eigen::VectorXcd wq = ui.cwiseProduct(vi);
    const Eigen::MatrixXcd gm = product_solutions_matrix(g, g1, qa, qb).matrix;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svdq(
        gm, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXcd projq = gm * svdq.solve(wq);
    CHECK((projq - wq).norm() <=
          1e-10 * std::max(wq.norm(), ub.norm() * vb.norm()));
  }
}

TEST_CASE("sv_slice_scan") {
  SUBCASE("K2: a single singular value, every cell 1.0") {
    const SliceGrid grid{0.0, 4.0, 5, 0.0, 4.0, 5};
    const SliceMap map = sv_slice_scan_conductivity(
        kK2, EdgeWeights::ones(1), EdgeWeights::ones(1), EdgeWeights::ones(1),
        EdgeWeights::ones(1), grid);
    for (const auto& row : map.values)
      for (double v : row) CHECK(v == Approx(1.0));
  }
  SUBCASE("symmetric directions give a symmetric map") {
    RngStream rng(41, 0);
    const Graph g = test::random_admissible_graph(rng, 8);
    const EdgeWeights base = EdgeWeights::ones(g.num_edges());
    EdgeWeights dir{Eigen::VectorXcd(g.num_edges())};
    for (int e = 0; e < g.num_edges(); ++e)
      dir.values[e] = Cplx{rng.next_real(), 0.0};
    const SliceGrid grid{0.0, 4.0, 6, 0.0, 4.0, 6};
    const SliceMap map =
        sv_slice_scan_conductivity(g, base, dir, base, dir, grid);
    for (int iy = 0; iy < 6; ++iy)
      for (int ix = 0; ix < 6; ++ix) {
        const double a = map.values[iy][ix];
        const double b = map.values[ix][iy];
        CHECK(std::isfinite(a) == std::isfinite(b));
        if (std::isfinite(a)) CHECK(a == Approx(b).epsilon(1e-9));
      }
  }
  SUBCASE("path b-i-b: rank deficient over the whole grid") {
    const SliceGrid grid{0.0, 4.0, 6, 0.0, 4.0, 6};
    const SliceMap map = sv_slice_scan_conductivity(
        kPath, EdgeWeights::ones(2), ew({1.0, 0.5}), EdgeWeights::ones(2),
        ew({0.25, 1.0}), grid);
    for (const auto& row : map.values)
      for (double v : row) {
        CHECK(std::isfinite(v));
        CHECK(v < 1e-9);
      }
  }
  SUBCASE("degenerate 1x1 grid reproduces the base point") {
    const SliceGrid grid{0.0, 0.0, 1, 0.0, 0.0, 1};
    const SliceMap map = sv_slice_scan_schrodinger(
        kStar, EdgeWeights::ones(3), NodeWeights::zeros(1),
        nw({1.0}), NodeWeights::zeros(1), nw({1.0}), grid);
    CHECK(map.values.size() == 1);
    CHECK(map.values[0][0] == Approx(1.0));  // 1x9 matrix, single sigma
  }
}
