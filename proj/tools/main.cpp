#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "graphinv/io.hpp"

namespace {

using namespace graphinv;

int default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

void write_text(const std::string& out_path, const std::string& text) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw Error(out_path + ": cannot open file for writing");
  out << text;
}

EdgeWeights load_gamma(const std::string& path, const Graph& g) {
  return path.empty() ? EdgeWeights::ones(g.num_edges())
                      : read_edge_weights_json(path, g);
}

NodeWeights load_q(const std::string& path, const Graph& g) {
  return path.empty() ? NodeWeights::zeros(g.num_interior())
                      : read_node_weights_json(path, g);
}

struct CheckArgs {
  std::string graph, weights, potential, out, problem = "conductivity";
  double tol = kDefaultRankTol;
  bool randomize = false;
  std::uint64_t seed = 0;
};

int cmd_check(const CheckArgs& a) {
  const Graph g = read_graph_json(a.graph);
  EdgeWeights gamma = load_gamma(a.weights, g);
  NodeWeights q = load_q(a.potential, g);
  if (a.randomize) {
    RngStream rng(a.seed, 1);
    for (Eigen::Index e = 0; e < gamma.values.size(); ++e)
      gamma.values[e] = rng.uniform_box(0.5, 2.0, -0.5, 0.5);
    for (Eigen::Index v = 0; v < q.values.size(); ++v)
      q.values[v] = rng.uniform_box(0.0, 1.0, -0.5, 0.5);
  }
  const SolvabilityReport report =
      a.problem == "conductivity"
          ? conductivity_recoverable(g, gamma, a.tol)
          : schrodinger_recoverable(g, gamma, q, a.tol);
  write_text(a.out, report_to_json(report, a.problem) + "\n");
  return report.verdict == Verdict::Recoverable ? 0 : 2;
}

struct DtnArgs {
  std::string graph, weights, potential, out;
  double tol = kDefaultRankTol;
};

int cmd_dtn(const DtnArgs& a) {
  const Graph g = read_graph_json(a.graph);
  const DtNMap dtn =
      dtn_map(g, load_gamma(a.weights, g), load_q(a.potential, g));
  write_text(a.out, dtn_to_json(dtn, g, a.tol) + "\n");
  return 0;
}

struct ScanArgs {
  std::string graph, dir1, dir2, base1, base2, weights, out;
  std::string problem = "conductivity";
  std::string grid = "0:4:10,0:4:10";
  int threads = default_threads();
};

int cmd_scan(const ScanArgs& a) {
  const Graph g = read_graph_json(a.graph);
  const SliceGrid grid = parse_grid(a.grid);
  SliceMap map;
  if (a.problem == "conductivity") {
    const EdgeWeights d1 = read_edge_weights_json(a.dir1, g);
    const EdgeWeights d2 = read_edge_weights_json(a.dir2, g);
    const EdgeWeights b1 = load_gamma(a.base1, g);
    const EdgeWeights b2 = load_gamma(a.base2, g);
    map = sv_slice_scan_conductivity(g, b1, d1, b2, d2, grid, a.threads);
  } else {
    const EdgeWeights gamma = load_gamma(a.weights, g);
    const NodeWeights d1 = read_node_weights_json(a.dir1, g);
    const NodeWeights d2 = read_node_weights_json(a.dir2, g);
    const NodeWeights b1 = load_q(a.base1, g);
    const NodeWeights b2 = load_q(a.base2, g);
    map = sv_slice_scan_schrodinger(g, gamma, b1, d1, b2, d2, grid, a.threads);
  }
  std::ostringstream buf;
  write_slicemap_csv(buf, map);
  write_text(a.out, buf.str());
  return 0;
}

struct SurveyArgs {
  std::string problem = "conductivity";
  int edges = 21;
  int interior_fixed = 21;
  std::string boundary = "2..12";
  std::string interior = "0..14";
  std::string prob = "0.05:0.95:19";
  int trials = 200;
  double tol = kDefaultRankTol;
  std::uint64_t seed = 0;
  std::string out;
  int threads = default_threads();
};

int cmd_survey(const SurveyArgs& a) {
  if (a.trials < 1) throw Error("--trials must be >= 1");
  ProbabilityGrid grid;
  if (a.problem == "conductivity") {
    grid = conductivity_survey(a.edges, parse_int_range(a.interior),
                               parse_int_range(a.boundary), a.trials, a.tol,
                               a.seed, a.threads);
  } else {
    grid = schrodinger_survey(a.interior_fixed, parse_linspace(a.prob),
                              parse_int_range(a.boundary), a.trials, a.tol,
                              a.seed, a.threads);
  }
  std::ostringstream buf;
  write_probability_grid_csv(buf, grid, a.problem);
  write_text(a.out, buf.str());
  return 0;
}

struct RecoverArgs {
  std::string graph, target, init, weights, out, trace;
  std::string problem = "conductivity";
  int max_iters = 50;
  double residual_tol = 1e-10;
};

int cmd_recover(const RecoverArgs& a) {
  const Graph g = read_graph_json(a.graph);
  const DtNMap target = read_dtn_json(a.target, g);
  NewtonOptions opts;
  opts.max_iters = a.max_iters;
  opts.residual_tol = a.residual_tol;

  NewtonTrace trace;
  if (a.problem == "conductivity") {
    auto [gamma, tr] =
        newton_recover_conductivity(g, target, read_edge_weights_json(a.init, g), opts);
    trace = std::move(tr);
    if (!a.out.empty()) write_edge_weights_json(gamma, a.out);
  } else {
    auto [q, tr] = newton_recover_schrodinger(
        g, load_gamma(a.weights, g), target, read_node_weights_json(a.init, g),
        opts);
    trace = std::move(tr);
    if (!a.out.empty()) write_node_weights_json(q, a.out);
  }
  std::ostringstream buf;
  write_newton_trace_csv(buf, trace, opts);
  write_text(a.trace, buf.str());
  return trace.verdict == NewtonVerdict::Converged ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Solvability tests, DtN maps, Newton inversion and\n"
               "recoverability surveys for inverse problems on graphs"};
  app.require_subcommand(1);

  CheckArgs check;
  CLI::App* c = app.add_subcommand(
      "check", "Decide recoverability of a graph by the SVD rank test");
  c->add_option("--graph", check.graph, "graph JSON file")->required();
  c->add_option("--problem", check.problem)
      ->check(CLI::IsMember({"conductivity", "schrodinger"}));
  c->add_option("--tol", check.tol, "relative SVD rank tolerance");
  c->add_option("--weights", check.weights, "linearization conductivity");
  c->add_option("--potential", check.potential, "linearization potential");
  c->add_flag("--randomize", check.randomize,
              "draw a random linearization point");
  c->add_option("--seed", check.seed);
  c->add_option("--out", check.out, "write the report here (default stdout)");

  DtnArgs dtn;
  CLI::App* d = app.add_subcommand("dtn", "Compute the DtN map");
  d->add_option("--graph", dtn.graph)->required();
  d->add_option("--weights", dtn.weights, "conductivity (default all ones)");
  d->add_option("--potential", dtn.potential, "potential (default zero)");
  d->add_option("--tol", dtn.tol, "tolerance recorded in the metadata");
  d->add_option("--out", dtn.out);

  ScanArgs scan;
  CLI::App* s = app.add_subcommand(
      "scan", "Singular-value slice scan of the product matrix");
  s->add_option("--graph", scan.graph)->required();
  s->add_option("--problem", scan.problem)
      ->check(CLI::IsMember({"conductivity", "schrodinger"}));
  s->add_option("--dir1", scan.dir1, "first direction file")->required();
  s->add_option("--dir2", scan.dir2, "second direction file")->required();
  s->add_option("--base1", scan.base1, "first base point (default 1 or 0)");
  s->add_option("--base2", scan.base2, "second base point");
  s->add_option("--weights", scan.weights,
                "fixed conductivity for the schrodinger scan");
  s->add_option("--grid", scan.grid, "x0:x1:nx,y0:y1:ny");
  s->add_option("--threads", scan.threads);
  s->add_option("--out", scan.out);

  SurveyArgs survey;
  CLI::App* v = app.add_subcommand(
      "survey", "Random-graph recoverability statistics");
  v->add_option("--problem", survey.problem)
      ->check(CLI::IsMember({"conductivity", "schrodinger"}));
  v->add_option("--edges", survey.edges, "fixed |E| (conductivity)");
  v->add_option("--interior", survey.interior,
                "interior range a..b (conductivity) or fixed |I| "
                "(schrodinger)");
  v->add_option("--boundary", survey.boundary, "boundary range a..b");
  v->add_option("--prob", survey.prob, "edge probabilities a:b:n");
  v->add_option("--trials", survey.trials);
  v->add_option("--tol", survey.tol);
  v->add_option("--seed", survey.seed);
  v->add_option("--threads", survey.threads);
  v->add_option("--out", survey.out);

  RecoverArgs recover;
  CLI::App* r = app.add_subcommand(
      "recover", "Newton recovery of weights from a DtN target");
  r->add_option("--graph", recover.graph)->required();
  r->add_option("--problem", recover.problem)
      ->check(CLI::IsMember({"conductivity", "schrodinger"}));
  r->add_option("--target", recover.target, "target DtN JSON")->required();
  r->add_option("--init", recover.init, "initial guess weights")->required();
  r->add_option("--weights", recover.weights,
                "known conductivity for the schrodinger problem");
  r->add_option("--max-iters", recover.max_iters);
  r->add_option("--residual-tol", recover.residual_tol);
  r->add_option("--out", recover.out, "recovered weights JSON");
  r->add_option("--trace", recover.trace, "iteration trace CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(c)) return cmd_check(check);
    if (app.got_subcommand(d)) return cmd_dtn(dtn);
    if (app.got_subcommand(s)) return cmd_scan(scan);
    if (app.got_subcommand(v)) return cmd_survey(survey);
    if (app.got_subcommand(r)) return cmd_recover(recover);
  } catch (const graphinv::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
