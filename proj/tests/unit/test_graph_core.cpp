#include <random>

#include <doctest.h>

#include "../fixtures.hpp"
#include "crnlap/digraph.hpp"
#include "crnlap/error.hpp"

using namespace crnlap;

TEST_SUITE("graph_core") {

TEST_CASE("single edge Laplacians") {
  const auto m = build_matrices(DiGraph(2, {{0, 1, 1.0}}));
  Eigen::MatrixXd out(2, 2), in(2, 2);
  out << 1, -1, 0, 0;
  in << 0, 0, -1, 1;
  CHECK(m.lap_out.isApprox(out));
  CHECK(m.lap_in.isApprox(in));
  CHECK(m.incidence(0, 0) == -1);
  CHECK(m.incidence(1, 0) == 1);
}

TEST_CASE("example 1 lap_out carries the rate constants") {
  const auto sys = fixtures::example1(1, 2, 3, 4);
  Eigen::MatrixXd expected(4, 4);
  expected << 1, -1, 0, 0,
             -2, 2, 0, 0,
              0, 0, 3, -3,
              0, 0, -4, 4;
  CHECK((sys.lap_out() - expected).norm() == doctest::Approx(0.0));
}

TEST_CASE("seven-vertex graph matches the hand-computed Laplacians") {
  const auto m = build_matrices(fixtures::seven_vertex_graph());
  CHECK((m.lap_out - fixtures::seven_vertex_lap_out()).norm() == 0.0);
  CHECK((m.lap_in - fixtures::seven_vertex_lap_in()).norm() == 0.0);
}

TEST_CASE("begin/end columns and identity lap_in + lap_out = d W d^T") {
  const DiGraph g(4, {{0, 1, 0.5}, {1, 2, 2.0}, {2, 0, 1.5}, {3, 2, 4.0}, {0, 1, 1.0}});
  const auto m = build_matrices(g);
  for (Eigen::Index l = 0; l < m.begin.cols(); ++l) {
    CHECK(m.begin.col(l).sum() == 1.0);
    CHECK(m.end.col(l).sum() == 1.0);
  }
  const Eigen::MatrixXd d = m.incidence.cast<double>();
  CHECK((m.lap_in + m.lap_out - d * m.weights * d.transpose()).norm() < 1e-14);
  CHECK(m.lap_out.rowwise().sum().cwiseAbs().maxCoeff() < 1e-14);
  CHECK(m.lap_in.rowwise().sum().cwiseAbs().maxCoeff() < 1e-14);
  // parallel edges add up
  CHECK(m.lap_out(0, 1) == doctest::Approx(-1.5));
}

TEST_CASE("reverse swaps orientation and is an involution") {
  const DiGraph g(2, {{0, 1, 3.0}});
  const DiGraph r = reverse(g);
  REQUIRE(r.edge_count() == 1);
  CHECK(r.edges()[0] == Edge{1, 0, 3.0});
  CHECK(reverse(r) == g);

  const DiGraph f = fixtures::seven_vertex_graph();
  const DiGraph fr = reverse(f);
  for (std::size_t l = 0; l < f.edge_count(); ++l) {
    CHECK(fr.edges()[l].tail == f.edges()[l].head);
    CHECK(fr.edges()[l].head == f.edges()[l].tail);
  }
}

TEST_CASE("lap_out(g) equals lap_in(reverse g) on a random 6-vertex graph") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> vertex(0, 5);
  std::uniform_real_distribution<double> weight(0.1, 3.0);
  std::vector<Edge> edges;
  while (edges.size() < 12) {
    const auto a = vertex(rng), b = vertex(rng);
    if (a != b) edges.push_back({a, b, weight(rng)});
  }
  const DiGraph g(6, edges);
  CHECK((build_matrices(g).lap_out - build_matrices(reverse(g)).lap_in).norm() == 0.0);
}

TEST_CASE("sign pattern") {
  const auto m = build_matrices(fixtures::seven_vertex_graph(2.5));
  for (Eigen::Index i = 0; i < 7; ++i)
    for (Eigen::Index j = 0; j < 7; ++j) {
      if (i == j) {
        CHECK(m.lap_out(i, j) >= 0.0);
        CHECK(m.lap_in(i, j) >= 0.0);
      } else {
        CHECK(m.lap_out(i, j) <= 0.0);
        CHECK(m.lap_in(i, j) <= 0.0);
      }
    }
}

TEST_CASE("invalid graphs are rejected") {
  CHECK_THROWS_AS(DiGraph(0, {}), ValidationError);
  CHECK_THROWS_AS(DiGraph(2, {{0, 2, 1.0}}), ValidationError);
  CHECK_THROWS_AS(DiGraph(2, {{0, 0, 1.0}}), ValidationError);
  CHECK_THROWS_AS(DiGraph(2, {{0, 1, 0.0}}), ValidationError);
  CHECK_THROWS_AS(DiGraph(2, {{0, 1, -1.0}}), ValidationError);
  CHECK_THROWS_AS(DiGraph(2, {{0, 1, std::numeric_limits<double>::infinity()}}), ValidationError);
  CHECK_NOTHROW(DiGraph(3, {}));
}

}
