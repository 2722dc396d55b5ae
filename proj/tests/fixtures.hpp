#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "crnlap/crn.hpp"
#include "crnlap/digraph.hpp"

namespace crnlap::fixtures {

inline std::string network_path(const std::string& name) {
  return std::string(CRNLAP_NETWORK_DIR) + "/" + name;
}

// Seven-vertex example graph (0-based): 2->1, 6->1, 6->7, 7->6, 7->3, 4->3,
// 5->4, 3->5 in 1-based vertex labels.
inline DiGraph seven_vertex_graph(double weight = 1.0) {
  return DiGraph(7, {{1, 0, weight}, {5, 0, weight}, {5, 6, weight}, {6, 5, weight},
                     {6, 2, weight}, {3, 2, weight}, {4, 3, weight}, {2, 4, weight}});
}

// Unweighted lap_out of seven_vertex_graph, worked out by hand.
inline Eigen::MatrixXd seven_vertex_lap_out() {
  Eigen::MatrixXd m(7, 7);
  m << 0, 0, 0, 0, 0, 0, 0,
      -1, 1, 0, 0, 0, 0, 0,
       0, 0, 1, 0, -1, 0, 0,
       0, 0, -1, 1, 0, 0, 0,
       0, 0, 0, -1, 1, 0, 0,
      -1, 0, 0, 0, 0, 2, -1,
       0, 0, -1, 0, 0, -1, 2;
  return m;
}

inline Eigen::MatrixXd seven_vertex_lap_in() {
  Eigen::MatrixXd m(7, 7);
  m << 2, -1, 0, 0, 0, -1, 0,
       0, 0, 0, 0, 0, 0, 0,
       0, 0, 2, -1, 0, 0, -1,
       0, 0, 0, 1, -1, 0, 0,
       0, 0, -1, 0, 1, 0, 0,
       0, 0, 0, 0, 0, 1, -1,
       0, 0, 0, 0, 0, -1, 1;
  return m;
}

inline CrnSystem example1(double k1 = 1, double k2 = 2, double k3 = 3, double k4 = 4) {
  Eigen::MatrixXd s(2, 4);
  s << 1, 2, 0, 0,
       0, 0, 1, 2;
  return CrnSystem({"X1", "X2"}, s, DiGraph(4, {{0, 1, k1}, {1, 0, k2}, {2, 3, k3}, {3, 2, k4}}));
}

inline Eigen::MatrixXd example2_stoich() {
  Eigen::MatrixXd s(6, 7);
  s << 0, 0, 3, 3, 3, 1, 2,
       1, 1, 0, 0, 0, 0, 0,
       0, 2, 0, 3, 0, 0, 0,
       0, 0, 3, 0, 0, 0, 2,
       0, 0, 3, 0, 0, 1, 0,
       0, 0, 0, 0, 3, 0, 0;
  return s;
}

inline CrnSystem example2() {
  return CrnSystem({"X1", "X2", "X3", "X4", "X5", "X6"}, example2_stoich(), seven_vertex_graph());
}

// -S lap_out^T of example2(), worked out by hand.
inline Eigen::MatrixXd example2_rate_matrix() {
  Eigen::MatrixXd m(6, 7);
  m << 0, 0, 0, 0, 0, 0, 0,
       0, 0, 0, 0, 0, 1, 0,
       0, -2, 0, -3, 3, 0, 0,
       0, 0, -3, 3, 0, 2, -1,
       0, 0, -3, 3, 0, -2, 4,
       0, 0, 3, 0, -3, 0, 0;
  return m;
}

// Star with `k` outgoing edges from vertex 0 and S = (2, 1, ..., 1).
inline CrnSystem star(std::size_t k) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Ones(1, static_cast<Eigen::Index>(k + 1));
  s(0, 0) = 2;
  std::vector<Edge> edges;
  for (std::size_t i = 1; i <= k; ++i) edges.push_back({0, i, 1.0});
  return CrnSystem({"X"}, s, DiGraph(k + 1, edges));
}

// A <-> B with S = I: forward rate k1 (A -> B), backward k2.
inline CrnSystem ab(double k1, double k2) {
  return CrnSystem({"A", "B"}, Eigen::MatrixXd::Identity(2, 2), DiGraph(2, {{0, 1, k1}, {1, 0, k2}}));
}

}  // namespace crnlap::fixtures
