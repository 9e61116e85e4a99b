#ifndef GRAPHINV_SURVEY_HPP
#define GRAPHINV_SURVEY_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "graphinv/solvability.hpp"

namespace graphinv {

/// Deterministic random stream keyed by (seed, stream id): identical keys
/// reproduce identical draws on any platform and any thread count. The
/// engine is the standard-specified mt19937_64; bounded draws use rejection
/// sampling so no implementation-defined distribution is involved.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0,1), 53-bit resolution.
  double next_real() { return (engine_() >> 11) * 0x1.0p-53; }
  /// Uniform in [0, bound); bound >= 1.
  std::uint64_t uniform_below(std::uint64_t bound);
  Cplx uniform_box(double re_lo, double re_hi, double im_lo, double im_hi);

 private:
  std::mt19937_64 engine_;
};

/// Derives a stream id for a (cell, trial) work item.
std::uint64_t mix_streams(std::uint64_t a, std::uint64_t b);

/// Edge set drawn on n vertices, before any boundary assignment.
struct GraphCandidate {
  int n = 0;
  std::vector<std::pair<VertexId, VertexId>> edges;
};

using GraphModel = std::function<GraphCandidate(RngStream&)>;

/// Uniform M-subset of the n(n-1)/2 possible edges.
GraphCandidate erdos_renyi_fixed_edges(int n, int num_edges, RngStream& rng);

/// Each possible edge included independently with probability p.
GraphCandidate erdos_renyi_probability(int n, double p, RngStream& rng);

GraphModel fixed_edges_model(int n, int num_edges);
GraphModel probability_model(int n, double p);

/// Draws candidates, assigns a uniform random boundary subset of the given
/// size, and accepts when both the graph and its interior subgraph are
/// connected. Returns nullopt (Rejected) after max_attempts failures.
std::optional<Graph> draw_admissible(const GraphModel& model,
                                     int boundary_size, int max_attempts,
                                     RngStream& rng);

struct SurveyCell {
  long attempted = 0;    // trials run (each trial = up to max_attempts draws)
  long admissible = 0;   // trials that produced an admissible graph
  long recoverable = 0;  // admissible graphs with a Recoverable verdict
  bool precheck_failed = false;
  bool has_probability = false;
  double probability = 0.0;
  long rank_tests = 0;           // rank-test invocations (instrumentation)
  long wellposed_failures = 0;   // draws lost to an ill-posed interior op
};

/// Empirical recoverability over a two-parameter grid. cells[iy][ix] pairs
/// with (x_values[ix], y_values[iy]). Counting-precheck cells carry an
/// explicit probability 0 without any draws; cells whose trials found no
/// admissible graph have no probability.
struct ProbabilityGrid {
  std::string x_label;
  std::string y_label;
  bool x_integer = false;
  std::vector<double> x_values;
  std::vector<int> y_values;
  std::vector<std::vector<SurveyCell>> cells;
  std::uint64_t seed = 0;
  double delta = kDefaultRankTol;
  int trials_per_cell = 0;
  int max_attempts = 20;
  std::string model;
};

/// Fixed-edge-count study: cells over (|I|, |B|) with n = |I| + |B|,
/// linearized at gamma = 1.
ProbabilityGrid conductivity_survey(int edge_count,
                                    const std::vector<int>& interior_counts,
                                    const std::vector<int>& boundary_counts,
                                    int trials_per_cell, double delta,
                                    std::uint64_t seed, int threads = 1);

/// Fixed-interior-count study: cells over (p, |B|) with n = |I| + |B|,
/// gamma = 1 and linearization q = 0.
ProbabilityGrid schrodinger_survey(int interior_count,
                                   const std::vector<double>& edge_probs,
                                   const std::vector<int>& boundary_counts,
                                   int trials_per_cell, double delta,
                                   std::uint64_t seed, int threads = 1);

}  // namespace graphinv

#endif
