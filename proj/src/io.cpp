#include "graphinv/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>

#include <json.hpp>

namespace graphinv {

namespace {

using nlohmann::json;

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(path + ": cannot open file");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw Error(path + ": invalid JSON: " + e.what());
  }
  return j;
}

void save_json(const json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(path + ": cannot open file for writing");
  out << j.dump(2) << "\n";
}

const json& require_key(const json& j, const char* key,
                        const std::string& context) {
  if (!j.is_object() || !j.contains(key))
    throw Error(context + ": missing required key \"" + key + "\"");
  return j.at(key);
}

Cplx parse_complex(const json& j, const std::string& context) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number())
    throw Error(context + ": complex values must be [re, im] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

json complex_to_json(const Cplx& z) {
  return json::array({z.real(), z.imag()});
}

Eigen::VectorXcd parse_values(const json& j, const std::string& context) {
  const json& values = require_key(j, "values", context);
  if (!values.is_array())
    throw Error(context + ": \"values\" must be an array");
  Eigen::VectorXcd v(values.size());
  for (size_t k = 0; k < values.size(); ++k)
    v[k] = parse_complex(values[k], context);
  return v;
}

json values_to_json(const Eigen::VectorXcd& v) {
  json arr = json::array();
  for (Eigen::Index k = 0; k < v.size(); ++k)
    arr.push_back(complex_to_json(v[k]));
  return {{"values", arr}};
}

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace

Graph read_graph_json(const std::string& path) {
  const json j = load_json(path);
  const json& n = require_key(j, "n", path);
  if (!n.is_number_integer()) throw Error(path + ": \"n\" must be an integer");
  const json& boundary = require_key(j, "boundary", path);
  if (!boundary.is_array())
    throw Error(path + ": \"boundary\" must be an array of vertex ids");
  const json& edges = require_key(j, "edges", path);
  if (!edges.is_array()) throw Error(path + ": \"edges\" must be an array");

  std::vector<VertexId> b;
  for (const auto& id : boundary) {
    if (!id.is_number_integer())
      throw Error(path + ": \"boundary\" entries must be integers");
    b.push_back(id.get<int>());
  }
  std::vector<std::pair<VertexId, VertexId>> es;
  for (const auto& e : edges) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
        !e[1].is_number_integer())
      throw Error(path + ": \"edges\" entries must be [id, id] pairs");
    es.emplace_back(e[0].get<int>(), e[1].get<int>());
  }
  try {
    return build_graph(n.get<int>(), b, es);
  } catch (const Error& e) {
    throw Error(path + ": " + e.what());
  }
}

void write_graph_json(const Graph& g, const std::string& path) {
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.tail, e.head});
  save_json({{"n", g.num_vertices()},
             {"boundary", g.boundary()},
             {"edges", edges}},
            path);
}

EdgeWeights read_edge_weights_json(const std::string& path, const Graph& g) {
  EdgeWeights w{parse_values(load_json(path), path)};
  if (w.values.size() != g.num_edges())
    throw LengthMismatchError(path + ": expected " +
                              std::to_string(g.num_edges()) +
                              " edge values, got " +
                              std::to_string(w.values.size()));
  return w;
}

NodeWeights read_node_weights_json(const std::string& path, const Graph& g) {
  NodeWeights w{parse_values(load_json(path), path)};
  if (w.values.size() != g.num_interior())
    throw LengthMismatchError(path + ": expected " +
                              std::to_string(g.num_interior()) +
                              " interior values, got " +
                              std::to_string(w.values.size()));
  return w;
}

void write_edge_weights_json(const EdgeWeights& w, const std::string& path) {
  save_json(values_to_json(w.values), path);
}

void write_node_weights_json(const NodeWeights& w, const std::string& path) {
  save_json(values_to_json(w.values), path);
}

DtNMap read_dtn_json(const std::string& path, const Graph& g) {
  const json j = load_json(path);
  const json& matrix = require_key(j, "matrix", path);
  const int nb = g.num_boundary();
  if (!matrix.is_array() || static_cast<int>(matrix.size()) != nb)
    throw LengthMismatchError(path + ": \"matrix\" must have " +
                              std::to_string(nb) + " rows");
  DtNMap dtn;
  dtn.matrix.resize(nb, nb);
  for (int r = 0; r < nb; ++r) {
    const json& row = matrix[r];
    if (!row.is_array() || static_cast<int>(row.size()) != nb)
      throw LengthMismatchError(path + ": \"matrix\" rows must have " +
                                std::to_string(nb) + " entries");
    for (int c = 0; c < nb; ++c) dtn.matrix(r, c) = parse_complex(row[c], path);
  }
  return dtn;
}

namespace {
json dtn_to_json_obj(const DtNMap& dtn, const Graph& g) {
  json matrix = json::array();
  for (Eigen::Index r = 0; r < dtn.matrix.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < dtn.matrix.cols(); ++c)
      row.push_back(complex_to_json(dtn.matrix(r, c)));
    matrix.push_back(row);
  }
  return {{"boundary", g.boundary()}, {"matrix", matrix}};
}
}  // namespace

void write_dtn_json(const DtNMap& dtn, const Graph& g,
                    const std::string& path) {
  save_json(dtn_to_json_obj(dtn, g), path);
}

std::string dtn_to_json(const DtNMap& dtn, const Graph& g, double tol) {
  json j = dtn_to_json_obj(dtn, g);
  j["tolerance"] = tol;
  return j.dump(2);
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Recoverable:
      return "Recoverable";
    case Verdict::NotRecoverable:
      return "NotRecoverable";
    case Verdict::PrecheckFail:
      return "PrecheckFail";
  }
  return "?";
}

const char* newton_verdict_name(NewtonVerdict v) {
  switch (v) {
    case NewtonVerdict::Converged:
      return "Converged";
    case NewtonVerdict::MaxIters:
      return "MaxIters";
    case NewtonVerdict::RankDeficient:
      return "RankDeficient";
    case NewtonVerdict::InfeasibleStep:
      return "InfeasibleStep";
  }
  return "?";
}

std::string report_to_json(const SolvabilityReport& report,
                           const std::string& problem) {
  json j{{"problem", problem},
         {"verdict", verdict_name(report.verdict)},
         {"numeric_rank", report.numeric_rank},
         {"required_rank", report.required_rank},
         {"sv_ratios", report.sv_ratios},
         {"tolerance", report.tolerance}};
  return j.dump(2);
}

void write_slicemap_csv(std::ostream& out, const SliceMap& map) {
  out << "y\\x";
  for (double x : map.xs) out << "," << fmt(x);
  out << "\n";
  for (size_t iy = 0; iy < map.ys.size(); ++iy) {
    out << fmt(map.ys[iy]);
    for (size_t ix = 0; ix < map.xs.size(); ++ix) {
      const double v = map.values[iy][ix];
      out << ",";
      if (std::isfinite(v) && v > 0.0)
        out << fmt(std::log10(v));
      else if (std::isfinite(v))
        out << "-inf";  // exact rank deficiency, log10(0)
    }
    out << "\n";
  }
}

void write_probability_grid_csv(std::ostream& out,
                                const ProbabilityGrid& grid,
                                const std::string& problem) {
  long wellposed_failures = 0;
  for (const auto& row : grid.cells)
    for (const auto& cell : row) wellposed_failures += cell.wellposed_failures;
  out << "# graphinv survey\n";
  out << "# problem: " << problem << "\n";
  out << "# model: " << grid.model << "\n";
  out << "# seed: " << grid.seed << "\n";
  out << "# delta: " << fmt(grid.delta) << "\n";
  out << "# trials-per-cell: " << grid.trials_per_cell << "\n";
  out << "# max-attempts-per-trial: " << grid.max_attempts << "\n";
  out << "# wellposed-failures: " << wellposed_failures << "\n";
  out << grid.x_label << "," << grid.y_label
      << ",attempted,admissible,recoverable,probability\n";
  for (size_t iy = 0; iy < grid.y_values.size(); ++iy) {
    for (size_t ix = 0; ix < grid.x_values.size(); ++ix) {
      const SurveyCell& cell = grid.cells[iy][ix];
      if (grid.x_integer)
        out << static_cast<long long>(grid.x_values[ix]);
      else
        out << fmt(grid.x_values[ix]);
      out << "," << grid.y_values[iy] << "," << cell.attempted << ","
          << cell.admissible << "," << cell.recoverable << ",";
      if (cell.has_probability) out << fmt(cell.probability);
      out << "\n";
    }
  }
}

void write_newton_trace_csv(std::ostream& out, const NewtonTrace& trace,
                            const NewtonOptions& opts) {
  out << "# verdict: " << newton_verdict_name(trace.verdict) << "\n";
  out << "# max-iters: " << opts.max_iters << "\n";
  out << "# residual-tol: " << fmt(opts.residual_tol) << "\n";
  out << "# step-shrink: " << fmt(opts.step_shrink) << "\n";
  out << "# min-step: " << fmt(opts.min_step) << "\n";
  out << "# feasibility-margin: " << fmt(opts.feasibility_margin) << "\n";
  out << "iter,residual,step,jac_sv_ratio,min_real_part\n";
  for (size_t k = 0; k < trace.iterations.size(); ++k) {
    const NewtonTraceEntry& e = trace.iterations[k];
    out << k << "," << fmt(e.residual_norm) << "," << fmt(e.step_length)
        << "," << fmt(e.jac_sv_ratio) << "," << fmt(e.min_real_part) << "\n";
  }
}

std::vector<int> parse_int_range(const std::string& text) {
  const size_t pos = text.find("..");
  try {
    if (pos == std::string::npos) return {std::stoi(text)};
    const int a = std::stoi(text.substr(0, pos));
    const int b = std::stoi(text.substr(pos + 2));
    if (b < a) throw Error("");
    std::vector<int> out;
    for (int v = a; v <= b; ++v) out.push_back(v);
    return out;
  } catch (const std::exception&) {
    throw Error("invalid integer range \"" + text + "\" (expected a..b)");
  }
}

std::vector<double> parse_linspace(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(item);
  try {
    if (parts.size() == 1) return {std::stod(parts[0])};
    if (parts.size() != 3) throw Error("");
    const double a = std::stod(parts[0]);
    const double b = std::stod(parts[1]);
    const int n = std::stoi(parts[2]);
    if (n < 1) throw Error("");
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i)
      out[i] = (n == 1) ? a : a + (b - a) * i / (n - 1);
    return out;
  } catch (const std::exception&) {
    throw Error("invalid range \"" + text + "\" (expected a:b:n)");
  }
}

SliceGrid parse_grid(const std::string& text) {
  const size_t comma = text.find(',');
  if (comma == std::string::npos)
    throw Error("invalid grid \"" + text + "\" (expected x0:x1:nx,y0:y1:ny)");
  auto parse_axis = [&](const std::string& axis, double& lo, double& hi,
                        int& n) {
    std::vector<std::string> parts;
    std::stringstream ss(axis);
    std::string item;
    while (std::getline(ss, item, ':')) parts.push_back(item);
    if (parts.size() != 3)
      throw Error("invalid grid axis \"" + axis + "\" (expected a:b:n)");
    try {
      lo = std::stod(parts[0]);
      hi = std::stod(parts[1]);
      n = std::stoi(parts[2]);
    } catch (const std::exception&) {
      throw Error("invalid grid axis \"" + axis + "\"");
    }
    if (n < 1) throw Error("grid axis count must be >= 1");
  };
  SliceGrid grid;
  parse_axis(text.substr(0, comma), grid.x0, grid.x1, grid.nx);
  parse_axis(text.substr(comma + 1), grid.y0, grid.y1, grid.ny);
  return grid;
}

}  // namespace graphinv
