#include "graphinv/laplacian.hpp"

#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace graphinv {

namespace {

// Backstop for genuinely singular interior operators; well below any
// caller-visible tolerance.
constexpr double kRcondFloor = 1e-14;

void check_gamma_length(const Graph& g, const EdgeWeights& gamma) {
  if (gamma.values.size() != g.num_edges())
    throw LengthMismatchError(
        "edge weights: expected " + std::to_string(g.num_edges()) +
        " values, got " + std::to_string(gamma.values.size()));
}

void check_q_length(const Graph& g, const NodeWeights& q) {
  if (q.values.size() != g.num_interior())
    throw LengthMismatchError(
        "node weights: expected " + std::to_string(g.num_interior()) +
        " values, got " + std::to_string(q.values.size()));
}

}  // namespace

Eigen::MatrixXcd assemble_full_laplacian(const Graph& g,
                                         const EdgeWeights& gamma) {
  check_gamma_length(g, gamma);
  Eigen::MatrixXcd full =
      Eigen::MatrixXcd::Zero(g.num_vertices(), g.num_vertices());
  for (int e = 0; e < g.num_edges(); ++e) {
    const Cplx w = gamma.values[e];
    const VertexId t = g.edges()[e].tail;
    const VertexId h = g.edges()[e].head;
    full(t, t) += w;
    full(h, h) += w;
    full(t, h) -= w;
    full(h, t) -= w;
  }
  return full;
}

Eigen::MatrixXcd apply_gradient(const Graph& g, const Eigen::MatrixXcd& u) {
  Eigen::MatrixXcd out(g.num_edges(), u.cols());
  for (int e = 0; e < g.num_edges(); ++e)
    out.row(e) = u.row(g.edges()[e].tail) - u.row(g.edges()[e].head);
  return out;
}

LaplacianBlocks assemble_laplacian(const Graph& g, const EdgeWeights& gamma) {
  const Eigen::MatrixXcd full = assemble_full_laplacian(g, gamma);
  const auto& b = g.boundary();
  const auto& i = g.interior();
  const int nb = g.num_boundary();
  const int ni = g.num_interior();

  LaplacianBlocks blocks;
  blocks.bb.resize(nb, nb);
  blocks.bi.resize(nb, ni);
  blocks.ib.resize(ni, nb);
  blocks.ii.resize(ni, ni);
  for (int r = 0; r < nb; ++r) {
    for (int c = 0; c < nb; ++c) blocks.bb(r, c) = full(b[r], b[c]);
    for (int c = 0; c < ni; ++c) blocks.bi(r, c) = full(b[r], i[c]);
  }
  for (int r = 0; r < ni; ++r) {
    for (int c = 0; c < nb; ++c) blocks.ib(r, c) = full(i[r], b[c]);
    for (int c = 0; c < ni; ++c) blocks.ii(r, c) = full(i[r], i[c]);
  }

  blocks.mu = Eigen::VectorXcd::Zero(ni);
  for (int e = 0; e < g.num_edges(); ++e) {
    const Edge& ed = g.edges()[e];
    if (g.is_boundary(ed.tail) && !g.is_boundary(ed.head))
      blocks.mu[g.interior_index(ed.head)] += gamma.values[e];
    else if (!g.is_boundary(ed.tail) && g.is_boundary(ed.head))
      blocks.mu[g.interior_index(ed.tail)] += gamma.values[e];
  }
  return blocks;
}

double wellposedness_bound(const Graph& g, const EdgeWeights& gamma) {
  check_gamma_length(g, gamma);
  if (!gamma.admissible())
    throw NotAdmissibleError("wellposedness_bound: Re(gamma) must be > 0");
  if (!is_connected(g) || !is_connected(interior_subgraph(g)))
    throw DisconnectedGraphError(
        "wellposedness_bound: graph or interior subgraph disconnected");
  if (g.num_interior() == 0)
    throw Error("wellposedness_bound: no interior vertices");

  EdgeWeights re_gamma{gamma.values.real().cast<Cplx>()};
  const LaplacianBlocks blocks = assemble_laplacian(g, re_gamma);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(blocks.ii.real());
  return -eig.eigenvalues().minCoeff();
}

bool is_wellposed(const Graph& g, const EdgeWeights& gamma,
                  const NodeWeights& q, double tol) {
  check_gamma_length(g, gamma);
  check_q_length(g, q);
  if (g.num_interior() == 0) return true;
  Eigen::MatrixXcd a = assemble_laplacian(g, gamma).ii;
  a.diagonal() += q.values;
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a);
  const double smax = svd.singularValues()(0);
  if (!(smax > 0.0)) return false;
  return svd.singularValues().tail(1)(0) / smax > tol;
}

DirichletSolver::DirichletSolver(const Graph& g, const EdgeWeights& gamma,
                                 const NodeWeights& q)
    : boundary_(g.boundary()), interior_(g.interior()), n_(g.num_vertices()) {
  check_q_length(g, q);
  blocks_ = assemble_laplacian(g, gamma);
  const int ni = g.num_interior();
  if (ni == 0) {
    interior_basis_.resize(0, g.num_boundary());
    return;
  }
  Eigen::MatrixXcd a = blocks_.ii;
  a.diagonal() += q.values;
  lu_.compute(a);
  if (!(lu_.rcond() > kRcondFloor))
    throw SingularInteriorOperatorError(
        "interior operator (L_gamma)_II + diag(q) is numerically singular");
  interior_basis_ = -lu_.solve(blocks_.ib);
}

Eigen::VectorXcd DirichletSolver::solve(
    const Eigen::VectorXcd& u_boundary) const {
  if (u_boundary.size() != static_cast<Eigen::Index>(boundary_.size()))
    throw LengthMismatchError("solve: boundary data has wrong length");
  Eigen::VectorXcd u = Eigen::VectorXcd::Zero(n_);
  for (size_t k = 0; k < boundary_.size(); ++k)
    u[boundary_[k]] = u_boundary[k];
  if (!interior_.empty()) {
    const Eigen::VectorXcd ui = interior_basis_ * u_boundary;
    for (size_t k = 0; k < interior_.size(); ++k) u[interior_[k]] = ui[k];
  }
  return u;
}

Eigen::MatrixXcd DirichletSolver::harmonic_basis() const {
  const int nb = static_cast<int>(boundary_.size());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n_, nb);
  for (int k = 0; k < nb; ++k) u(boundary_[k], k) = 1.0;
  for (size_t k = 0; k < interior_.size(); ++k)
    u.row(interior_[k]) = interior_basis_.row(k);
  return u;
}

DtNMap DirichletSolver::dtn() const {
  if (interior_.empty()) return {blocks_.bb};
  return {blocks_.bb + blocks_.bi * interior_basis_};
}

Eigen::VectorXcd solve_dirichlet(const Graph& g, const EdgeWeights& gamma,
                                 const NodeWeights& q,
                                 const Eigen::VectorXcd& u_boundary) {
  return DirichletSolver(g, gamma, q).solve(u_boundary);
}

DtNMap dtn_map(const Graph& g, const EdgeWeights& gamma,
               const NodeWeights& q) {
  return DirichletSolver(g, gamma, q).dtn();
}

Cplx green_residual(const Graph& g, const EdgeWeights& gamma,
                    const NodeWeights& q, const Eigen::VectorXcd& u,
                    const Eigen::VectorXcd& v) {
  if (u.size() != g.num_vertices() || v.size() != g.num_vertices())
    throw LengthMismatchError("green_residual: vertex vectors of wrong size");
  const DtNMap lambda = dtn_map(g, gamma, q);
  const int nb = g.num_boundary();
  const int ni = g.num_interior();
  Eigen::VectorXcd ub(nb), vb(nb);
  for (int k = 0; k < nb; ++k) {
    ub[k] = u[g.boundary()[k]];
    vb[k] = v[g.boundary()[k]];
  }
  const Cplx lhs = ub.transpose() * (lambda.matrix * vb);

  const Eigen::MatrixXcd full = assemble_full_laplacian(g, gamma);
  Cplx rhs = u.transpose() * (full * v);
  for (int k = 0; k < ni; ++k)
    rhs += u[g.interior()[k]] * q.values[k] * v[g.interior()[k]];
  return lhs - rhs;
}

}  // namespace graphinv
