#ifndef GRAPHINV_NEWTON_HPP
#define GRAPHINV_NEWTON_HPP

#include <utility>
#include <vector>

#include "graphinv/solvability.hpp"

namespace graphinv {

struct NewtonOptions {
  int max_iters = 50;
  double residual_tol = 1e-10;  // relative Frobenius norm on DtN mismatch
  double step_shrink = 0.5;
  double min_step = 1e-6;
  double feasibility_margin = 1e-8;
};

enum class NewtonVerdict { Converged, MaxIters, RankDeficient, InfeasibleStep };

struct NewtonTraceEntry {
  double residual_norm = 0.0;
  double step_length = 0.0;
  double jac_sv_ratio = 0.0;   // sigma_required / sigma_1 at this iterate
  double min_real_part = 0.0;  // feasibility witness of the iterate
};

/// Per-iteration records, stored exactly as computed.
struct NewtonTrace {
  std::vector<NewtonTraceEntry> iterations;
  NewtonVerdict verdict = NewtonVerdict::MaxIters;
};

/// Newton iteration for the conductivity from a target DtN map at q = 0.
/// Steps solve the linearized system in the least-squares sense (SVD
/// pseudo-inverse, relative cutoff kDefaultRankTol) with the descent sign;
/// the step length is the largest of 1, s, s^2, ... >= min_step that keeps
/// Re(gamma) >= feasibility_margin componentwise.
std::pair<EdgeWeights, NewtonTrace> newton_recover_conductivity(
    const Graph& g, const DtNMap& target, const EdgeWeights& gamma0,
    const NewtonOptions& opts = {});

/// Same loop for the potential with gamma known; feasibility keeps
/// Re(q) >= zeta_gamma + feasibility_margin.
std::pair<NodeWeights, NewtonTrace> newton_recover_schrodinger(
    const Graph& g, const EdgeWeights& gamma, const DtNMap& target,
    const NodeWeights& q0, const NewtonOptions& opts = {});

/// Forward data generation for round trips; delegates to dtn_map.
DtNMap synthesize_dtn(const Graph& g, const EdgeWeights& gamma,
                      const NodeWeights& q);

}  // namespace graphinv

#endif
