#include "graphinv/survey.hpp"

#include <numeric>

#include "parallel.hpp"

namespace graphinv {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::vector<std::pair<VertexId, VertexId>> all_pairs(int n) {
  std::vector<std::pair<VertexId, VertexId>> pairs;
  pairs.reserve(static_cast<size_t>(n) * (n - 1) / 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  return pairs;
}

std::vector<VertexId> random_subset(int n, int k, RngStream& rng) {
  std::vector<VertexId> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.uniform_below(n - i));
    std::swap(ids[i], ids[j]);
  }
  ids.resize(k);
  return ids;
}

bool admissible_partition(const Graph& g) {
  return is_connected(g) && is_connected(interior_subgraph(g));
}

struct CellParams {
  int n = 0;             // total vertices for this cell
  int boundary = 0;      // |B|
  bool precheck_ok = true;
  bool feasible = true;  // a candidate graph can exist at all
  GraphModel model;
  std::function<Verdict(const Graph&)> verdict;
};

void run_cell(SurveyCell& cell, const CellParams& params,
              std::uint64_t seed, std::uint64_t cell_index, int trials,
              int max_attempts) {
  if (!params.precheck_ok) {
    cell.precheck_failed = true;
    cell.probability = 0.0;
    cell.has_probability = true;
    return;
  }
  if (!params.feasible) return;
  for (int trial = 0; trial < trials; ++trial) {
    RngStream rng(seed, mix_streams(cell_index, trial));
    ++cell.attempted;
    for (int attempt = 0; attempt < max_attempts; ++attempt) {
      const GraphCandidate cand = params.model(rng);
      const std::vector<VertexId> boundary =
          random_subset(cand.n, params.boundary, rng);
      const Graph g = build_graph(cand.n, boundary, cand.edges);
      if (!admissible_partition(g)) continue;
      Verdict verdict;
      try {
        ++cell.rank_tests;
        verdict = params.verdict(g);
      } catch (const SingularInteriorOperatorError&) {
        ++cell.wellposed_failures;
        continue;
      }
      ++cell.admissible;
      if (verdict == Verdict::Recoverable) ++cell.recoverable;
      break;
    }
  }
  if (cell.admissible > 0) {
    cell.probability =
        static_cast<double>(cell.recoverable) / cell.admissible;
    cell.has_probability = true;
  }
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id) {
  std::uint64_t state = seed;
  const std::uint64_t a = splitmix64(state);
  state ^= stream_id * 0x9E3779B97F4A7C15ull + 0x632BE59BD9B4E019ull;
  const std::uint64_t b = splitmix64(state);
  engine_.seed(a ^ b);
}

std::uint64_t RngStream::uniform_below(std::uint64_t bound) {
  if (bound == 0) throw Error("uniform_below: bound must be positive");
  const std::uint64_t threshold = (-bound) % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t x = engine_();
    if (x >= threshold) return x % bound;
  }
}

Cplx RngStream::uniform_box(double re_lo, double re_hi, double im_lo,
                            double im_hi) {
  const double re = re_lo + (re_hi - re_lo) * next_real();
  const double im = im_lo + (im_hi - im_lo) * next_real();
  return {re, im};
}

std::uint64_t mix_streams(std::uint64_t a, std::uint64_t b) {
  std::uint64_t state = a * 0xD1342543DE82EF95ull + 0x2545F4914F6CDD1Dull;
  state ^= splitmix64(state) + b;
  return splitmix64(state);
}

GraphCandidate erdos_renyi_fixed_edges(int n, int num_edges, RngStream& rng) {
  const long long total = static_cast<long long>(n) * (n - 1) / 2;
  if (num_edges < 0 || num_edges > total)
    throw TooManyEdgesError("erdos_renyi_fixed_edges: " +
                            std::to_string(num_edges) + " edges requested, " +
                            std::to_string(total) + " possible");
  auto pairs = all_pairs(n);
  for (int i = 0; i < num_edges; ++i) {
    const size_t j = i + rng.uniform_below(pairs.size() - i);
    std::swap(pairs[i], pairs[j]);
  }
  pairs.resize(num_edges);
  return {n, std::move(pairs)};
}

GraphCandidate erdos_renyi_probability(int n, double p, RngStream& rng) {
  if (!(p >= 0.0) || !(p <= 1.0))
    throw Error("erdos_renyi_probability: p must lie in [0,1]");
  GraphCandidate cand;
  cand.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (rng.next_real() < p) cand.edges.emplace_back(i, j);
  return cand;
}

GraphModel fixed_edges_model(int n, int num_edges) {
  return [n, num_edges](RngStream& rng) {
    return erdos_renyi_fixed_edges(n, num_edges, rng);
  };
}

GraphModel probability_model(int n, double p) {
  return [n, p](RngStream& rng) { return erdos_renyi_probability(n, p, rng); };
}

std::optional<Graph> draw_admissible(const GraphModel& model,
                                     int boundary_size, int max_attempts,
                                     RngStream& rng) {
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    const GraphCandidate cand = model(rng);
    if (boundary_size > cand.n)
      throw Error("draw_admissible: boundary larger than vertex set");
    const Graph g = build_graph(cand.n, random_subset(cand.n, boundary_size, rng),
                                cand.edges);
    if (admissible_partition(g)) return g;
  }
  return std::nullopt;
}

ProbabilityGrid conductivity_survey(int edge_count,
                                    const std::vector<int>& interior_counts,
                                    const std::vector<int>& boundary_counts,
                                    int trials_per_cell, double delta,
                                    std::uint64_t seed, int threads) {
  if (trials_per_cell < 1)
    throw Error("conductivity_survey: trials_per_cell must be >= 1");
  ProbabilityGrid grid;
  grid.x_label = "interior";
  grid.y_label = "boundary";
  grid.x_integer = true;
  grid.x_values.assign(interior_counts.begin(), interior_counts.end());
  grid.y_values = boundary_counts;
  grid.seed = seed;
  grid.delta = delta;
  grid.trials_per_cell = trials_per_cell;
  grid.model = "erdos-renyi fixed |E|=" + std::to_string(edge_count);
  const size_t nx = interior_counts.size();
  const size_t ny = boundary_counts.size();
  grid.cells.assign(ny, std::vector<SurveyCell>(nx));

  detail::parallel_for_index(nx * ny, threads, [&](size_t cell_index) {
    const size_t ix = cell_index % nx;
    const size_t iy = cell_index / nx;
    const int ni = interior_counts[ix];
    const int nb = boundary_counts[iy];
    CellParams params;
    params.n = ni + nb;
    params.boundary = nb;
    params.precheck_ok =
        static_cast<long long>(nb) * (nb - 1) / 2 >= edge_count;
    params.feasible = static_cast<long long>(params.n) * (params.n - 1) / 2 >=
                      edge_count && nb >= 1;
    if (params.feasible) params.model = fixed_edges_model(params.n, edge_count);
    params.verdict = [&](const Graph& g) {
      return conductivity_recoverable(g, EdgeWeights::ones(g.num_edges()),
                                      delta)
          .verdict;
    };
    run_cell(grid.cells[iy][ix], params, seed, cell_index, trials_per_cell,
             grid.max_attempts);
  });
  return grid;
}

ProbabilityGrid schrodinger_survey(int interior_count,
                                   const std::vector<double>& edge_probs,
                                   const std::vector<int>& boundary_counts,
                                   int trials_per_cell, double delta,
                                   std::uint64_t seed, int threads) {
  if (trials_per_cell < 1)
    throw Error("schrodinger_survey: trials_per_cell must be >= 1");
  ProbabilityGrid grid;
  grid.x_label = "p";
  grid.y_label = "boundary";
  grid.x_integer = false;
  grid.x_values = edge_probs;
  grid.y_values = boundary_counts;
  grid.seed = seed;
  grid.delta = delta;
  grid.trials_per_cell = trials_per_cell;
  grid.model = "erdos-renyi fixed |I|=" + std::to_string(interior_count);
  const size_t nx = edge_probs.size();
  const size_t ny = boundary_counts.size();
  grid.cells.assign(ny, std::vector<SurveyCell>(nx));

  detail::parallel_for_index(nx * ny, threads, [&](size_t cell_index) {
    const size_t ix = cell_index % nx;
    const size_t iy = cell_index / nx;
    const double p = edge_probs[ix];
    const int nb = boundary_counts[iy];
    CellParams params;
    params.n = interior_count + nb;
    params.boundary = nb;
    params.precheck_ok =
        static_cast<long long>(nb) * (nb + 1) / 2 >= interior_count;
    params.feasible = nb >= 1;
    params.model = probability_model(params.n, p);
    params.verdict = [&](const Graph& g) {
      return schrodinger_recoverable(g, EdgeWeights::ones(g.num_edges()),
                                     NodeWeights::zeros(g.num_interior()),
                                     delta)
          .verdict;
    };
    run_cell(grid.cells[iy][ix], params, seed, cell_index, trials_per_cell,
             grid.max_attempts);
  });
  return grid;
}

}  // namespace graphinv
