#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace crnlap {

using Vertex = std::size_t;

/// One directed edge (reaction) tail -> head with a strictly positive weight.
struct Edge {
  Vertex tail;
  Vertex head;
  double weight;

  bool operator==(const Edge&) const = default;
};

/// Weighted directed multigraph. Edge order is stable: edge l is column l of
/// the begin, end and weight matrices. Parallel edges are allowed; self-loops
/// are rejected because they contribute nothing to the incidence matrix.
class DiGraph {
 public:
  /// Throws ValidationError on zero vertices, out-of-range endpoints,
  /// self-loops, or weights that are not finite and strictly positive.
  DiGraph(std::size_t vertex_count, std::vector<Edge> edges);

  std::size_t vertex_count() const { return vertex_count_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Successor lists, one entry per edge (parallel edges repeat).
  std::vector<std::vector<Vertex>> successors() const;

  /// Same graph with every edge orientation flipped; weights and order kept.
  DiGraph reversed() const;

  bool operator==(const DiGraph&) const = default;

 private:
  std::size_t vertex_count_;
  std::vector<Edge> edges_;
};

/// Matrices attached to a graph with v vertices and e edges.
///
/// lap_out = -B W (E - B)^T and lap_in = E W (E - B)^T, so their sum is the
/// undirected weighted Laplacian incidence * W * incidence^T.
struct LaplacianMatrices {
  Eigen::MatrixXd begin;      // v x e, B(i,l) = 1 iff vertex i is the tail of edge l
  Eigen::MatrixXd end;        // v x e, E(i,l) = 1 iff vertex i is the head of edge l
  Eigen::MatrixXi incidence;  // v x e, E - B kept exact
  Eigen::MatrixXd weights;    // e x e diagonal
  Eigen::MatrixXd lap_in;     // v x v
  Eigen::MatrixXd lap_out;    // v x v
};

LaplacianMatrices build_matrices(const DiGraph& g);

inline DiGraph reverse(const DiGraph& g) { return g.reversed(); }

}  // namespace crnlap
