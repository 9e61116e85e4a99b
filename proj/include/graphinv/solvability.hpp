#ifndef GRAPHINV_SOLVABILITY_HPP
#define GRAPHINV_SOLVABILITY_HPP

#include <vector>

#include "graphinv/laplacian.hpp"

namespace graphinv {

/// Default relative singular-value tolerance for rank decisions.
inline constexpr double kDefaultRankTol = 1e-9;

/// Products-of-gradients matrix: |E| x |B|^2. Column (i,j), stored at index
/// i + j*|B|, is the entrywise product of the gradients of the harmonic
/// extensions of the i-th and j-th canonical boundary vectors for the two
/// conductivities. Full row rank iff the linearized conductivity problem is
/// solvable.
struct ProductMatrixF {
  Eigen::MatrixXcd matrix;
};

/// Products-of-solutions matrix: |I| x |B|^2. Column (i,j) is the entrywise
/// product of the interior solution columns for the two potentials.
struct ProductMatrixG {
  Eigen::MatrixXcd matrix;
};

/// Jacobian of the DtN map in the conductivity: |B|^2 x |E|. Column e is
/// the column-major vectorization of the (complex symmetric) derivative of
/// the DtN matrix with respect to the weight of edge e.
struct JacobianConductivity {
  Eigen::MatrixXcd matrix;
};

/// Jacobian of the DtN map in the potential: |B|^2 x |I|.
struct JacobianSchrodinger {
  Eigen::MatrixXcd matrix;
};

enum class Verdict { Recoverable, NotRecoverable, PrecheckFail };

struct SolvabilityReport {
  Verdict verdict = Verdict::PrecheckFail;
  int numeric_rank = 0;
  int required_rank = 0;
  std::vector<double> sv_ratios;  // sigma_k / sigma_1, empty on PrecheckFail
  double tolerance = kDefaultRankTol;
};

/// Matrix of gamma,q-harmonic extensions of the canonical boundary vectors:
/// |V| x |B| with an identity boundary block.
Eigen::MatrixXcd harmonic_basis(const Graph& g, const EdgeWeights& gamma,
                                const NodeWeights& q);

ProductMatrixF product_gradients_matrix(const Graph& g,
                                        const EdgeWeights& gamma1,
                                        const EdgeWeights& gamma2);

ProductMatrixG product_solutions_matrix(const Graph& g,
                                        const EdgeWeights& gamma,
                                        const NodeWeights& q1,
                                        const NodeWeights& q2);

JacobianConductivity jacobian_conductivity(const Graph& g,
                                           const EdgeWeights& gamma);

JacobianSchrodinger jacobian_schrodinger(const Graph& g,
                                         const EdgeWeights& gamma,
                                         const NodeWeights& q);

/// Largest r with sigma_r/sigma_1 > delta; 0 for a zero or empty matrix.
int numeric_rank(const Eigen::MatrixXcd& m, double delta);

/// Exhaustive-minor rank: the largest k for which some k x k submatrix has
/// |det| above 1e-12 times the k-th power of the largest row norm.
/// Cross-check for tiny instances only; throws TooLarge beyond the
/// combinatorial guard.
int determinant_rank_oracle(const Eigen::MatrixXcd& m);

/// Data-count necessary condition |B|(|B|-1)/2 >= |E|.
bool counting_precheck_conductivity(const Graph& g);

/// Data-count necessary condition |B|(|B|+1)/2 >= |I|.
bool counting_precheck_schrodinger(const Graph& g);

SolvabilityReport conductivity_recoverable(const Graph& g,
                                           const EdgeWeights& gamma_lin,
                                           double delta);

SolvabilityReport schrodinger_recoverable(const Graph& g,
                                          const EdgeWeights& gamma,
                                          const NodeWeights& q_lin,
                                          double delta);

/// u_B^T (Lambda_1 - Lambda_2) v_B - (gamma1-gamma2)^T [(grad u) . (grad v)]
/// with u, v the harmonic extensions of u_B, v_B for gamma1 resp. gamma2.
Cplx interior_identity_residual_conductivity(const Graph& g,
                                             const EdgeWeights& gamma1,
                                             const EdgeWeights& gamma2,
                                             const Eigen::VectorXcd& u_b,
                                             const Eigen::VectorXcd& v_b);

/// u_B^T (Lambda_{q1} - Lambda_{q2}) v_B - (q1-q2)^T (u_I . v_I).
Cplx interior_identity_residual_schrodinger(const Graph& g,
                                            const EdgeWeights& gamma,
                                            const NodeWeights& q1,
                                            const NodeWeights& q2,
                                            const Eigen::VectorXcd& u_b,
                                            const Eigen::VectorXcd& v_b);

struct SliceGrid {
  double x0 = 0.0, x1 = 4.0;
  int nx = 10;
  double y0 = 0.0, y1 = 4.0;
  int ny = 10;
};

/// Grid of sigma_r/sigma_1 ratios (r = required rank). NaN marks a missing
/// cell (ill-posed point, or the product matrix has fewer than r singular
/// values). values[iy][ix] pairs with (xs[ix], ys[iy]).
struct SliceMap {
  std::vector<double> xs;
  std::vector<double> ys;
  std::vector<std::vector<double>> values;
};

SliceMap sv_slice_scan_conductivity(const Graph& g, const EdgeWeights& base1,
                                    const EdgeWeights& dir1,
                                    const EdgeWeights& base2,
                                    const EdgeWeights& dir2,
                                    const SliceGrid& grid, int threads = 1);

SliceMap sv_slice_scan_schrodinger(const Graph& g, const EdgeWeights& gamma,
                                   const NodeWeights& base1,
                                   const NodeWeights& dir1,
                                   const NodeWeights& base2,
                                   const NodeWeights& dir2,
                                   const SliceGrid& grid, int threads = 1);

}  // namespace graphinv

#endif
