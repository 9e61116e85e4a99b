#ifndef GRAPHINV_IO_HPP
#define GRAPHINV_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "graphinv/newton.hpp"
#include "graphinv/survey.hpp"

namespace graphinv {

// JSON file schemas (complex numbers are [re, im] pairs everywhere):
//   graph    {"n": int, "boundary": [int,...], "edges": [[int,int],...]}
//   weights  {"values": [[re,im],...]}           edge or interior order
//   dtn      {"boundary": [int,...], "matrix": [[[re,im],...],...]}
// Parsing a written file reproduces the value bit-exactly.

Graph read_graph_json(const std::string& path);
void write_graph_json(const Graph& g, const std::string& path);

EdgeWeights read_edge_weights_json(const std::string& path, const Graph& g);
NodeWeights read_node_weights_json(const std::string& path, const Graph& g);
void write_edge_weights_json(const EdgeWeights& w, const std::string& path);
void write_node_weights_json(const NodeWeights& w, const std::string& path);

DtNMap read_dtn_json(const std::string& path, const Graph& g);
void write_dtn_json(const DtNMap& dtn, const Graph& g,
                    const std::string& path);
/// DtN JSON text with the boundary ordering and the tolerance as metadata.
std::string dtn_to_json(const DtNMap& dtn, const Graph& g, double tol);

std::string report_to_json(const SolvabilityReport& report,
                           const std::string& problem);

/// CSV: header row of x values, first column y values, body log10 of the
/// singular-value ratios; missing cells are empty.
void write_slicemap_csv(std::ostream& out, const SliceMap& map);

/// CSV with a '#'-prefixed metadata block (seed, tolerance, trials, model)
/// followed by one row per cell. Byte-identical for identical inputs.
void write_probability_grid_csv(std::ostream& out,
                                const ProbabilityGrid& grid,
                                const std::string& problem);

void write_newton_trace_csv(std::ostream& out, const NewtonTrace& trace,
                            const NewtonOptions& opts = {});

const char* verdict_name(Verdict v);
const char* newton_verdict_name(NewtonVerdict v);

/// "a..b" -> {a, a+1, ..., b} (also accepts a single integer).
std::vector<int> parse_int_range(const std::string& text);
/// "a:b:n" -> n evenly spaced values from a to b (also a single value).
std::vector<double> parse_linspace(const std::string& text);
/// "x0:x1:nx,y0:y1:ny" -> slice-scan grid.
SliceGrid parse_grid(const std::string& text);

}  // namespace graphinv

#endif
