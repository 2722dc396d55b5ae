#include "crnlap/digraph.hpp"

#include <cmath>
#include <string>

#include "crnlap/error.hpp"

namespace crnlap {

DiGraph::DiGraph(std::size_t vertex_count, std::vector<Edge> edges)
    : vertex_count_(vertex_count), edges_(std::move(edges)) {
  if (vertex_count_ == 0) {
    throw ValidationError("graph must have at least one vertex");
  }
  for (std::size_t l = 0; l < edges_.size(); ++l) {
    const Edge& edge = edges_[l];
    if (edge.tail >= vertex_count_ || edge.head >= vertex_count_) {
      throw ValidationError("edge " + std::to_string(l) + " has an endpoint outside [0, " +
                            std::to_string(vertex_count_) + ")");
    }
    if (edge.tail == edge.head) {
      throw ValidationError("edge " + std::to_string(l) + " is a self-loop on vertex " +
                            std::to_string(edge.tail));
    }
    if (!std::isfinite(edge.weight) || edge.weight <= 0.0) {
      throw ValidationError("edge " + std::to_string(l) + " has a non-positive weight");
    }
  }
}

std::vector<std::vector<Vertex>> DiGraph::successors() const {
  std::vector<std::vector<Vertex>> adjacency(vertex_count_);
  for (const Edge& edge : edges_) {
    adjacency[edge.tail].push_back(edge.head);
  }
  return adjacency;
}

DiGraph DiGraph::reversed() const {
  std::vector<Edge> flipped;
  flipped.reserve(edges_.size());
  for (const Edge& edge : edges_) {
    flipped.push_back({edge.head, edge.tail, edge.weight});
  }
  return DiGraph(vertex_count_, std::move(flipped));
}

LaplacianMatrices build_matrices(const DiGraph& g) {
  const auto v = static_cast<Eigen::Index>(g.vertex_count());
  const auto e = static_cast<Eigen::Index>(g.edge_count());

  LaplacianMatrices m;
  m.begin = Eigen::MatrixXd::Zero(v, e);
  m.end = Eigen::MatrixXd::Zero(v, e);
  m.incidence = Eigen::MatrixXi::Zero(v, e);
  m.weights = Eigen::MatrixXd::Zero(e, e);

  for (Eigen::Index l = 0; l < e; ++l) {
    const Edge& edge = g.edges()[static_cast<std::size_t>(l)];
    const auto tail = static_cast<Eigen::Index>(edge.tail);
    const auto head = static_cast<Eigen::Index>(edge.head);
    m.begin(tail, l) = 1.0;
    m.end(head, l) = 1.0;
    m.incidence(head, l) += 1;
    m.incidence(tail, l) -= 1;
    m.weights(l, l) = edge.weight;
  }

  const Eigen::MatrixXd boundary = m.incidence.cast<double>();
  m.lap_in = m.end * m.weights * boundary.transpose();
  m.lap_out = -m.begin * m.weights * boundary.transpose();
  return m;
}

}  // namespace crnlap
