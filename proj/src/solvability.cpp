#include "graphinv/solvability.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include <Eigen/SVD>

#include "parallel.hpp"

namespace graphinv {

namespace {

std::vector<double> sv_ratios_of(const Eigen::VectorXd& sv) {
  std::vector<double> ratios;
  if (sv.size() == 0 || !(sv(0) > 0.0)) return ratios;
  ratios.reserve(sv.size());
  for (Eigen::Index k = 0; k < sv.size(); ++k) ratios.push_back(sv(k) / sv(0));
  return ratios;
}

void check_connected(const Graph& g, const char* what) {
  if (!is_connected(g) || !is_connected(interior_subgraph(g)))
    throw DisconnectedGraphError(std::string(what) +
                                 ": graph or interior subgraph disconnected");
}

// Iterates k-subsets of {0..n-1} in lexicographic order.
bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  for (int i = k - 1; i >= 0; --i) {
    if (idx[i] < n - k + i) {
      ++idx[i];
      for (int j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
      return true;
    }
  }
  return false;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// sigma_r/sigma_1 with r = required rank; NaN when undefined.
double required_rank_ratio(const Eigen::MatrixXcd& m, int required) {
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  if (required <= 0) return nan;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() < required || !(sv(0) > 0.0)) return nan;
  return sv(required - 1) / sv(0);
}

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i)
    v[i] = (n == 1) ? a : a + (b - a) * i / (n - 1);
  return v;
}

}  // namespace

Eigen::MatrixXcd harmonic_basis(const Graph& g, const EdgeWeights& gamma,
                                const NodeWeights& q) {
  return DirichletSolver(g, gamma, q).harmonic_basis();
}

ProductMatrixF product_gradients_matrix(const Graph& g,
                                        const EdgeWeights& gamma1,
                                        const EdgeWeights& gamma2) {
  const NodeWeights q0 = NodeWeights::zeros(g.num_interior());
  const Eigen::MatrixXcd gu1 =
      apply_gradient(g, DirichletSolver(g, gamma1, q0).harmonic_basis());
  const Eigen::MatrixXcd gu2 =
      apply_gradient(g, DirichletSolver(g, gamma2, q0).harmonic_basis());
  const int nb = g.num_boundary();
  Eigen::MatrixXcd f(g.num_edges(), nb * nb);
  for (int j = 0; j < nb; ++j)
    for (int i = 0; i < nb; ++i)
      f.col(i + j * nb) = gu1.col(i).cwiseProduct(gu2.col(j));
  return {std::move(f)};
}

ProductMatrixG product_solutions_matrix(const Graph& g,
                                        const EdgeWeights& gamma,
                                        const NodeWeights& q1,
                                        const NodeWeights& q2) {
  // The harmonic extensions carry a sign relative to (L_II+diag q)^-1 L_IB;
  // it cancels in the products, so G is unaffected.
  const Eigen::MatrixXcd u1 = DirichletSolver(g, gamma, q1).interior_basis();
  const Eigen::MatrixXcd u2 = DirichletSolver(g, gamma, q2).interior_basis();
  const int nb = g.num_boundary();
  Eigen::MatrixXcd m(g.num_interior(), nb * nb);
  for (int j = 0; j < nb; ++j)
    for (int i = 0; i < nb; ++i)
      m.col(i + j * nb) = u1.col(i).cwiseProduct(u2.col(j));
  return {std::move(m)};
}

JacobianConductivity jacobian_conductivity(const Graph& g,
                                           const EdgeWeights& gamma) {
  const NodeWeights q0 = NodeWeights::zeros(g.num_interior());
  const Eigen::MatrixXcd gu =
      apply_gradient(g, DirichletSolver(g, gamma, q0).harmonic_basis());
  const int nb = g.num_boundary();
  Eigen::MatrixXcd jac(nb * nb, g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e)
    for (int j = 0; j < nb; ++j)
      for (int i = 0; i < nb; ++i)
        jac(i + j * nb, e) = gu(e, i) * gu(e, j);
  return {std::move(jac)};
}

JacobianSchrodinger jacobian_schrodinger(const Graph& g,
                                         const EdgeWeights& gamma,
                                         const NodeWeights& q) {
  const Eigen::MatrixXcd ui = DirichletSolver(g, gamma, q).interior_basis();
  const int nb = g.num_boundary();
  Eigen::MatrixXcd jac(nb * nb, g.num_interior());
  for (int v = 0; v < g.num_interior(); ++v)
    for (int j = 0; j < nb; ++j)
      for (int i = 0; i < nb; ++i)
        jac(i + j * nb, v) = ui(v, i) * ui(v, j);
  return {std::move(jac)};
}

int numeric_rank(const Eigen::MatrixXcd& m, double delta) {
  if (!(delta > 0.0) || !(delta < 1.0))
    throw Error("numeric_rank: delta must lie in (0,1)");
  if (m.rows() == 0 || m.cols() == 0) return 0;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  const auto& sv = svd.singularValues();
  if (!(sv(0) > 0.0)) return 0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sv.size(); ++k)
    if (sv(k) / sv(0) > delta) rank = static_cast<int>(k) + 1;
  return rank;
}

int determinant_rank_oracle(const Eigen::MatrixXcd& m) {
  const int rows = static_cast<int>(m.rows());
  const int cols = static_cast<int>(m.cols());
  if (rows == 0 || cols == 0) return 0;
  const int kmax = std::min(rows, cols);
  if (kmax > 8)
    throw TooLargeError("determinant_rank_oracle: min dimension exceeds 8");
  double total_minors = 0.0;
  for (int k = kmax; k >= 1; --k)
    total_minors += binomial(rows, k) * binomial(cols, k);
  if (total_minors > 2e6)
    throw TooLargeError("determinant_rank_oracle: too many minors");

  // A k-minor counts as nonzero against the k-th power of the largest row
  // norm. Scaling by the selected rows' own norms would let roundoff-noise
  // rows certify rank; the global row scale keeps the decision aligned with
  // the relative singular-value test.
  double max_row_norm = 0.0;
  for (int r = 0; r < rows; ++r)
    max_row_norm = std::max(max_row_norm, m.row(r).norm());

  for (int k = kmax; k >= 1; --k) {
    const double threshold = 1e-12 * std::pow(max_row_norm, k);
    std::vector<int> ri(k), ci(k);
    for (int i = 0; i < k; ++i) ri[i] = i;
    do {
      for (int i = 0; i < k; ++i) ci[i] = i;
      do {
        Eigen::MatrixXcd sub(k, k);
        for (int r = 0; r < k; ++r)
          for (int c = 0; c < k; ++c) sub(r, c) = m(ri[r], ci[c]);
        if (std::abs(sub.determinant()) > threshold) return k;
      } while (next_combination(ci, cols));
    } while (next_combination(ri, rows));
  }
  return 0;
}

bool counting_precheck_conductivity(const Graph& g) {
  const long long nb = g.num_boundary();
  return nb * (nb - 1) / 2 >= g.num_edges();
}

bool counting_precheck_schrodinger(const Graph& g) {
  const long long nb = g.num_boundary();
  return nb * (nb + 1) / 2 >= g.num_interior();
}

SolvabilityReport conductivity_recoverable(const Graph& g,
                                           const EdgeWeights& gamma_lin,
                                           double delta) {
  if (!gamma_lin.admissible())
    throw NotAdmissibleError(
        "conductivity_recoverable: linearization point not admissible");
  check_connected(g, "conductivity_recoverable");

  SolvabilityReport report;
  report.tolerance = delta;
  report.required_rank = g.num_edges();
  if (!counting_precheck_conductivity(g)) {
    report.verdict = Verdict::PrecheckFail;
    return report;
  }
  const ProductMatrixF f = product_gradients_matrix(g, gamma_lin, gamma_lin);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(f.matrix);
  report.sv_ratios = sv_ratios_of(svd.singularValues());
  report.numeric_rank = numeric_rank(f.matrix, delta);
  report.verdict = report.numeric_rank >= report.required_rank
                       ? Verdict::Recoverable
                       : Verdict::NotRecoverable;
  return report;
}

SolvabilityReport schrodinger_recoverable(const Graph& g,
                                          const EdgeWeights& gamma,
                                          const NodeWeights& q_lin,
                                          double delta) {
  if (!gamma.admissible())
    throw NotAdmissibleError("schrodinger_recoverable: gamma not admissible");
  check_connected(g, "schrodinger_recoverable");

  SolvabilityReport report;
  report.tolerance = delta;
  report.required_rank = g.num_interior();
  if (!counting_precheck_schrodinger(g)) {
    report.verdict = Verdict::PrecheckFail;
    return report;
  }
  if (g.num_interior() == 0) {
    // Nothing to recover.
    report.verdict = Verdict::Recoverable;
    return report;
  }
  const ProductMatrixG gm = product_solutions_matrix(g, gamma, q_lin, q_lin);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(gm.matrix);
  report.sv_ratios = sv_ratios_of(svd.singularValues());
  report.numeric_rank = numeric_rank(gm.matrix, delta);
  report.verdict = report.numeric_rank >= report.required_rank
                       ? Verdict::Recoverable
                       : Verdict::NotRecoverable;
  return report;
}

Cplx interior_identity_residual_conductivity(const Graph& g,
                                             const EdgeWeights& gamma1,
                                             const EdgeWeights& gamma2,
                                             const Eigen::VectorXcd& u_b,
                                             const Eigen::VectorXcd& v_b) {
  const NodeWeights q0 = NodeWeights::zeros(g.num_interior());
  DirichletSolver s1(g, gamma1, q0);
  DirichletSolver s2(g, gamma2, q0);
  const Cplx lhs =
      u_b.transpose() * ((s1.dtn().matrix - s2.dtn().matrix) * v_b);
  const Eigen::VectorXcd gu = apply_gradient(g, s1.solve(u_b));
  const Eigen::VectorXcd gv = apply_gradient(g, s2.solve(v_b));
  const Cplx rhs =
      (gamma1.values - gamma2.values).transpose() * gu.cwiseProduct(gv);
  return lhs - rhs;
}

Cplx interior_identity_residual_schrodinger(const Graph& g,
                                            const EdgeWeights& gamma,
                                            const NodeWeights& q1,
                                            const NodeWeights& q2,
                                            const Eigen::VectorXcd& u_b,
                                            const Eigen::VectorXcd& v_b) {
  DirichletSolver s1(g, gamma, q1);
  DirichletSolver s2(g, gamma, q2);
  const Cplx lhs =
      u_b.transpose() * ((s1.dtn().matrix - s2.dtn().matrix) * v_b);
  const Eigen::VectorXcd ui = s1.interior_basis() * u_b;
  const Eigen::VectorXcd vi = s2.interior_basis() * v_b;
  const Cplx rhs = (q1.values - q2.values).transpose() * ui.cwiseProduct(vi);
  return lhs - rhs;
}

SliceMap sv_slice_scan_conductivity(const Graph& g, const EdgeWeights& base1,
                                    const EdgeWeights& dir1,
                                    const EdgeWeights& base2,
                                    const EdgeWeights& dir2,
                                    const SliceGrid& grid, int threads) {
  SliceMap map;
  map.xs = linspace(grid.x0, grid.x1, grid.nx);
  map.ys = linspace(grid.y0, grid.y1, grid.ny);
  map.values.assign(grid.ny, std::vector<double>(
                                 grid.nx,
                                 std::numeric_limits<double>::quiet_NaN()));
  const int required = g.num_edges();
  detail::parallel_for_index(
      static_cast<size_t>(grid.nx) * grid.ny, threads, [&](size_t cell) {
        const int ix = static_cast<int>(cell % grid.nx);
        const int iy = static_cast<int>(cell / grid.nx);
        const EdgeWeights g1{base1.values + map.xs[ix] * dir1.values};
        const EdgeWeights g2{base2.values + map.ys[iy] * dir2.values};
        try {
          const ProductMatrixF f = product_gradients_matrix(g, g1, g2);
          map.values[iy][ix] = required_rank_ratio(f.matrix, required);
        } catch (const SingularInteriorOperatorError&) {
          // missing cell
        }
      });
  return map;
}

SliceMap sv_slice_scan_schrodinger(const Graph& g, const EdgeWeights& gamma,
                                   const NodeWeights& base1,
                                   const NodeWeights& dir1,
                                   const NodeWeights& base2,
                                   const NodeWeights& dir2,
                                   const SliceGrid& grid, int threads) {
  SliceMap map;
  map.xs = linspace(grid.x0, grid.x1, grid.nx);
  map.ys = linspace(grid.y0, grid.y1, grid.ny);
  map.values.assign(grid.ny, std::vector<double>(
                                 grid.nx,
                                 std::numeric_limits<double>::quiet_NaN()));
  const int required = g.num_interior();
  detail::parallel_for_index(
      static_cast<size_t>(grid.nx) * grid.ny, threads, [&](size_t cell) {
        const int ix = static_cast<int>(cell % grid.nx);
        const int iy = static_cast<int>(cell / grid.nx);
        const NodeWeights q1{base1.values + map.xs[ix] * dir1.values};
        const NodeWeights q2{base2.values + map.ys[iy] * dir2.values};
        try {
          const ProductMatrixG gm = product_solutions_matrix(g, gamma, q1, q2);
          map.values[iy][ix] = required_rank_ratio(gm.matrix, required);
        } catch (const SingularInteriorOperatorError&) {
          // missing cell
        }
      });
  return map;
}

}  // namespace graphinv
