#include "graphinv/graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <string>

namespace graphinv {

Graph::Graph(int n, std::vector<VertexId> boundary, std::vector<Edge> edges,
             bool allow_empty_boundary)
    : n_(n), boundary_(std::move(boundary)), edges_(std::move(edges)) {
  if (n_ < 0) throw Error("graph: negative vertex count");
  std::sort(boundary_.begin(), boundary_.end());
  if (std::adjacent_find(boundary_.begin(), boundary_.end()) !=
      boundary_.end())
    throw Error("graph: duplicate boundary id");
  if (boundary_.empty() && !allow_empty_boundary)
    throw EmptyBoundaryError("graph: boundary set is empty");

  boundary_pos_.assign(n_, -1);
  interior_pos_.assign(n_, -1);
  for (int k = 0; k < static_cast<int>(boundary_.size()); ++k) {
    VertexId v = boundary_[k];
    if (v < 0 || v >= n_)
      throw IdOutOfRangeError("graph: boundary id " + std::to_string(v) +
                              " out of range");
    boundary_pos_[v] = k;
  }
  for (VertexId v = 0; v < n_; ++v) {
    if (boundary_pos_[v] < 0) {
      interior_pos_[v] = static_cast<int>(interior_.size());
      interior_.push_back(v);
    }
  }

  std::set<std::pair<VertexId, VertexId>> seen;
  for (Edge& e : edges_) {
    if (e.tail < 0 || e.tail >= n_ || e.head < 0 || e.head >= n_)
      throw IdOutOfRangeError("graph: edge endpoint out of range");
    if (e.tail == e.head)
      throw SelfLoopError("graph: self-loop at vertex " +
                          std::to_string(e.tail));
    if (e.tail > e.head) std::swap(e.tail, e.head);
    if (!seen.insert({e.tail, e.head}).second)
      throw DuplicateEdgeError("graph: duplicate edge {" +
                               std::to_string(e.tail) + "," +
                               std::to_string(e.head) + "}");
  }
}

Graph Graph::build(int n_vertices, std::vector<VertexId> boundary,
                   const std::vector<std::pair<VertexId, VertexId>>& edges) {
  std::vector<Edge> es;
  es.reserve(edges.size());
  for (const auto& [a, b] : edges) es.push_back(Edge{a, b});
  return Graph(n_vertices, std::move(boundary), std::move(es), false);
}

Graph build_graph(int n_vertices, const std::vector<VertexId>& boundary,
                  const std::vector<std::pair<VertexId, VertexId>>& edges) {
  return Graph::build(n_vertices, boundary, edges);
}

GradientMatrix gradient_matrix(const Graph& g) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(2 * g.num_edges());
  for (int e = 0; e < g.num_edges(); ++e) {
    trips.emplace_back(e, g.edges()[e].tail, 1.0);
    trips.emplace_back(e, g.edges()[e].head, -1.0);
  }
  GradientMatrix m(g.num_edges(), g.num_vertices());
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

Graph interior_subgraph(const Graph& g) {
  std::vector<Edge> es;
  for (const Edge& e : g.edges()) {
    if (!g.is_boundary(e.tail) && !g.is_boundary(e.head))
      es.push_back(Edge{g.interior_index(e.tail), g.interior_index(e.head)});
  }
  return Graph(g.num_interior(), {}, std::move(es), true);
}

bool is_connected(const Graph& g) {
  const int n = g.num_vertices();
  if (n <= 1) return true;
  std::vector<std::vector<VertexId>> adj(n);
  for (const Edge& e : g.edges()) {
    adj[e.tail].push_back(e.head);
    adj[e.head].push_back(e.tail);
  }
  std::vector<char> visited(n, 0);
  std::queue<VertexId> q;
  q.push(0);
  visited[0] = 1;
  int count = 1;
  while (!q.empty()) {
    VertexId v = q.front();
    q.pop();
    for (VertexId w : adj[v]) {
      if (!visited[w]) {
        visited[w] = 1;
        ++count;
        q.push(w);
      }
    }
  }
  return count == n;
}

std::vector<VertexId> boundary_adjacent_interior(const Graph& g) {
  std::set<VertexId> j;
  for (const Edge& e : g.edges()) {
    if (g.is_boundary(e.tail) != g.is_boundary(e.head))
      j.insert(g.is_boundary(e.tail) ? e.head : e.tail);
  }
  return {j.begin(), j.end()};
}

}  // namespace graphinv
