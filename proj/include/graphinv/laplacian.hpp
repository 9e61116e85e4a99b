#ifndef GRAPHINV_LAPLACIAN_HPP
#define GRAPHINV_LAPLACIAN_HPP

#include <complex>

#include <Eigen/Dense>
#include <Eigen/LU>

#include "graphinv/graph.hpp"

namespace graphinv {

using Cplx = std::complex<double>;

/// Complex conductivity, one value per edge (indexed like Graph::edges).
/// Admissible when every entry has strictly positive real part.
struct EdgeWeights {
  Eigen::VectorXcd values;

  bool admissible() const {
    for (Eigen::Index e = 0; e < values.size(); ++e)
      if (!(values[e].real() > 0.0)) return false;
    return true;
  }
  static EdgeWeights ones(int num_edges) {
    return {Eigen::VectorXcd::Ones(num_edges)};
  }
};

/// Complex Schrodinger potential, one value per interior vertex (indexed
/// like Graph::interior).
struct NodeWeights {
  Eigen::VectorXcd values;

  static NodeWeights zeros(int num_interior) {
    return {Eigen::VectorXcd::Zero(num_interior)};
  }
};

/// Blocks of the weighted graph Laplacian, extracted against the ascending
/// boundary/interior orderings. The full matrix [bb bi; ib ii] is complex
/// symmetric with zero row sums. mu holds, per interior vertex, the sum of
/// the weights on its boundary-incident edges; it is supported on J and
/// satisfies ii = (restricted interior Laplacian) + diag(mu).
struct LaplacianBlocks {
  Eigen::MatrixXcd bb;
  Eigen::MatrixXcd bi;
  Eigen::MatrixXcd ib;
  Eigen::MatrixXcd ii;
  Eigen::VectorXcd mu;
};

/// Dirichlet-to-Neumann map: |B| x |B|, complex symmetric; zero row sums
/// when the potential vanishes.
struct DtNMap {
  Eigen::MatrixXcd matrix;
};

LaplacianBlocks assemble_laplacian(const Graph& g, const EdgeWeights& gamma);

/// Full |V| x |V| weighted Laplacian in vertex-id order.
Eigen::MatrixXcd assemble_full_laplacian(const Graph& g,
                                         const EdgeWeights& gamma);

/// Applies the discrete gradient to columns of a vertex-indexed matrix.
Eigen::MatrixXcd apply_gradient(const Graph& g, const Eigen::MatrixXcd& u);

/// zeta_gamma = -lambda_min of the real part of the interior Laplacian
/// block. The gamma,q Dirichlet problem is well-posed for every q whose
/// real part exceeds this bound componentwise (and zeta_gamma < 0, so q = 0
/// always qualifies). Requires admissible gamma, connected G and G_I, and
/// at least one interior vertex.
double wellposedness_bound(const Graph& g, const EdgeWeights& gamma);

/// SVD test: smallest singular value of (L_gamma)_II + diag(q), rescaled by
/// the largest, exceeds tol. Vacuously true when there is no interior.
bool is_wellposed(const Graph& g, const EdgeWeights& gamma,
                  const NodeWeights& q, double tol);

/// Dense LU factorization of the interior operator (L_gamma)_II + diag(q),
/// reusable across boundary data. Immutable once built; safe to share
/// across concurrent readers.
class DirichletSolver {
 public:
  DirichletSolver(const Graph& g, const EdgeWeights& gamma,
                  const NodeWeights& q);

  /// Harmonic extension of u_B: full vertex vector with interior part
  /// -[(L)_II + diag(q)]^-1 (L)_IB u_B.
  Eigen::VectorXcd solve(const Eigen::VectorXcd& u_boundary) const;

  /// Columns are the harmonic extensions of the canonical boundary vectors;
  /// rows are indexed by vertex id, so the boundary rows form an identity.
  Eigen::MatrixXcd harmonic_basis() const;

  /// Interior block of harmonic_basis(): |I| x |B|.
  const Eigen::MatrixXcd& interior_basis() const { return interior_basis_; }

  DtNMap dtn() const;

  const LaplacianBlocks& blocks() const { return blocks_; }

 private:
  std::vector<VertexId> boundary_;
  std::vector<VertexId> interior_;
  int n_ = 0;
  LaplacianBlocks blocks_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
  Eigen::MatrixXcd interior_basis_;  // -(II + diag q)^-1 IB
};

Eigen::VectorXcd solve_dirichlet(const Graph& g, const EdgeWeights& gamma,
                                 const NodeWeights& q,
                                 const Eigen::VectorXcd& u_boundary);

DtNMap dtn_map(const Graph& g, const EdgeWeights& gamma, const NodeWeights& q);

/// Green identity residual u_B^T Lambda v_B - (u^T L v + u_I^T diag(q) v_I),
/// the two sides computed by independent routes. Near zero when v is
/// gamma,q harmonic.
Cplx green_residual(const Graph& g, const EdgeWeights& gamma,
                    const NodeWeights& q, const Eigen::VectorXcd& u,
                    const Eigen::VectorXcd& v);

}  // namespace graphinv

#endif
