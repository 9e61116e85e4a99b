#ifndef GRAPHINV_GRAPH_HPP
#define GRAPHINV_GRAPH_HPP

#include <utility>
#include <vector>

#include <Eigen/SparseCore>

#include "graphinv/errors.hpp"

namespace graphinv {

using VertexId = int;

/// Undirected edge stored with a frozen orientation (tail = smaller id).
struct Edge {
  VertexId tail;
  VertexId head;
};

/// Finite graph with a boundary/interior vertex partition.
///
/// Vertices are 0..n-1. The boundary and interior id lists are kept in
/// ascending order and all matrix blocks index against these orderings.
/// Edge indexing follows construction order. Immutable after construction.
class Graph {
 public:
  /// Validates ids, orients each edge smaller-id-first, and derives the
  /// interior as the complement of the boundary.
  static Graph build(int n_vertices, std::vector<VertexId> boundary,
                     const std::vector<std::pair<VertexId, VertexId>>& edges);

  int num_vertices() const { return n_; }
  int num_edges() const { return static_cast<int>(edges_.size()); }
  int num_boundary() const { return static_cast<int>(boundary_.size()); }
  int num_interior() const { return static_cast<int>(interior_.size()); }

  const std::vector<VertexId>& boundary() const { return boundary_; }
  const std::vector<VertexId>& interior() const { return interior_; }
  const std::vector<Edge>& edges() const { return edges_; }

  bool is_boundary(VertexId v) const { return boundary_pos_[v] >= 0; }
  /// Position of v inside the ascending boundary ordering; -1 if interior.
  int boundary_index(VertexId v) const { return boundary_pos_[v]; }
  /// Position of v inside the ascending interior ordering; -1 if boundary.
  int interior_index(VertexId v) const { return interior_pos_[v]; }

 private:
  friend Graph interior_subgraph(const Graph& g);
  Graph(int n, std::vector<VertexId> boundary, std::vector<Edge> edges,
        bool allow_empty_boundary);

  int n_ = 0;
  std::vector<VertexId> boundary_;
  std::vector<VertexId> interior_;
  std::vector<Edge> edges_;
  std::vector<int> boundary_pos_;
  std::vector<int> interior_pos_;
};

/// Discrete gradient: |E| x |V|, one row per edge with +1 at the tail and
/// -1 at the head, so (grad u)(e) = u(tail) - u(head).
using GradientMatrix = Eigen::SparseMatrix<double>;

Graph build_graph(int n_vertices, const std::vector<VertexId>& boundary,
                  const std::vector<std::pair<VertexId, VertexId>>& edges);

GradientMatrix gradient_matrix(const Graph& g);

/// Subgraph on the interior vertices (re-indexed 0..|I|-1 in ascending id
/// order) with the edges having both endpoints interior. Its boundary set is
/// empty; intended for connectivity checks only.
Graph interior_subgraph(const Graph& g);

/// True iff the vertex set is empty, a singleton, or one BFS component.
bool is_connected(const Graph& g);

/// The set J of interior vertices sharing an edge with the boundary
/// (ascending original ids).
std::vector<VertexId> boundary_adjacent_interior(const Graph& g);

}  // namespace graphinv

#endif
