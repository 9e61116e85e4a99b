#include "graphinv/newton.hpp"

#include <functional>
#include <limits>

#include <Eigen/SVD>

namespace graphinv {

namespace {

double min_real_part(const Eigen::VectorXcd& x) {
  double m = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i) m = std::min(m, x[i].real());
  return m;
}

// Shared Newton loop over a complex unknown vector. forward(x) evaluates the
// DtN matrix, jacobian(x) its |B|^2 x dim derivative (column-major vec), and
// feasibility_floor is the lower bound required of Re(x) componentwise.
std::pair<Eigen::VectorXcd, NewtonTrace> newton_loop(
    Eigen::VectorXcd x, const Eigen::MatrixXcd& target,
    const std::function<Eigen::MatrixXcd(const Eigen::VectorXcd&)>& forward,
    const std::function<Eigen::MatrixXcd(const Eigen::VectorXcd&)>& jacobian,
    double feasibility_floor, const NewtonOptions& opts) {
  NewtonTrace trace;
  const double threshold = opts.residual_tol * target.norm();
  const int dim = static_cast<int>(x.size());

  for (int k = 0;; ++k) {
    const Eigen::MatrixXcd mismatch = forward(x) - target;
    NewtonTraceEntry entry;
    entry.residual_norm = mismatch.norm();
    entry.min_real_part = min_real_part(x);

    if (entry.residual_norm <= threshold) {
      trace.iterations.push_back(entry);
      trace.verdict = NewtonVerdict::Converged;
      break;
    }
    if (k >= opts.max_iters || dim == 0) {
      trace.iterations.push_back(entry);
      trace.verdict = NewtonVerdict::MaxIters;
      break;
    }

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(
        jacobian(x), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    entry.jac_sv_ratio = (sv.size() >= dim && sv(0) > 0.0)
                             ? sv(dim - 1) / sv(0)
                             : 0.0;
    if (entry.jac_sv_ratio <= kDefaultRankTol) {
      trace.iterations.push_back(entry);
      trace.verdict = NewtonVerdict::RankDeficient;
      break;
    }

    svd.setThreshold(kDefaultRankTol);
    const Eigen::VectorXcd rhs =
        -Eigen::Map<const Eigen::VectorXcd>(mismatch.data(), mismatch.size());
    const Eigen::VectorXcd step = svd.solve(rhs);

    double t = 1.0;
    bool feasible = false;
    while (t >= opts.min_step) {
      if (min_real_part(x + t * step) >= feasibility_floor) {
        feasible = true;
        break;
      }
      t *= opts.step_shrink;
    }
    if (!feasible) {
      trace.iterations.push_back(entry);
      trace.verdict = NewtonVerdict::InfeasibleStep;
      break;
    }
    x += t * step;
    entry.step_length = t;
    trace.iterations.push_back(entry);
  }
  return {std::move(x), std::move(trace)};
}

}  // namespace

std::pair<EdgeWeights, NewtonTrace> newton_recover_conductivity(
    const Graph& g, const DtNMap& target, const EdgeWeights& gamma0,
    const NewtonOptions& opts) {
  if (!gamma0.admissible())
    throw NotAdmissibleError("newton_recover_conductivity: gamma0");
  const NodeWeights q0 = NodeWeights::zeros(g.num_interior());
  auto [x, trace] = newton_loop(
      gamma0.values, target.matrix,
      [&](const Eigen::VectorXcd& v) {
        return dtn_map(g, EdgeWeights{v}, q0).matrix;
      },
      [&](const Eigen::VectorXcd& v) {
        return jacobian_conductivity(g, EdgeWeights{v}).matrix;
      },
      opts.feasibility_margin, opts);
  return {EdgeWeights{std::move(x)}, std::move(trace)};
}

std::pair<NodeWeights, NewtonTrace> newton_recover_schrodinger(
    const Graph& g, const EdgeWeights& gamma, const DtNMap& target,
    const NodeWeights& q0, const NewtonOptions& opts) {
  double floor = -std::numeric_limits<double>::infinity();
  if (g.num_interior() > 0)
    floor = wellposedness_bound(g, gamma) + opts.feasibility_margin;
  auto [x, trace] = newton_loop(
      q0.values, target.matrix,
      [&](const Eigen::VectorXcd& v) {
        return dtn_map(g, gamma, NodeWeights{v}).matrix;
      },
      [&](const Eigen::VectorXcd& v) {
        return jacobian_schrodinger(g, gamma, NodeWeights{v}).matrix;
      },
      floor, opts);
  return {NodeWeights{std::move(x)}, std::move(trace)};
}

DtNMap synthesize_dtn(const Graph& g, const EdgeWeights& gamma,
                      const NodeWeights& q) {
  return dtn_map(g, gamma, q);
}

}  // namespace graphinv
