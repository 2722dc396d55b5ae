#include <cmath>
#include <random>

#include <doctest.h>

#include "../fixtures.hpp"
#include "crnlap/crn.hpp"
#include "crnlap/deficiency.hpp"
#include "crnlap/error.hpp"

using namespace crnlap;

namespace {

constexpr const char* kExample1 =
    "X1 -> 2 X1 ; k=1\n2 X1 -> X1 ; k=2\nX2 -> 2 X2 ; k=3\n2 X2 -> X2 ; k=4";

void check_parse_error(const std::string& text, std::size_t line, std::size_t column) {
  try {
    parse_crn(text);
    FAIL("expected a ParseError for: " << text);
  } catch (const ParseError& e) {
    CHECK(e.line() == line);
    CHECK(e.column() == column);
  }
}

}  // namespace

TEST_SUITE("crn_model") {

TEST_CASE("example 1 text") {
  const CrnSystem sys = parse_crn(kExample1);
  Eigen::MatrixXd s(2, 4);
  s << 1, 2, 0, 0, 0, 0, 1, 2;
  CHECK(sys.stoich() == s);
  CHECK(sys.complex_count() == 4);
  CHECK(sys.reaction_count() == 4);
  CHECK(sys.species_names() == std::vector<std::string>{"X1", "X2"});
  CHECK(sys.complex_labels() == std::vector<std::string>{"X1", "2 X1", "X2", "2 X2"});
  CHECK(sys.graph().edges()[1] == Edge{1, 0, 2.0});
}

TEST_CASE("single reaction and the empty complex") {
  const CrnSystem ab = parse_crn("A -> B ; k=1");
  CHECK(ab.stoich() == Eigen::MatrixXd::Identity(2, 2));
  CHECK(ab.reaction_count() == 1);

  const CrnSystem inflow = parse_crn("0 -> A ; k=1");
  CHECK(inflow.stoich().col(0).isZero());
  CHECK(inflow.complex_labels()[0] == "0");
  Eigen::VectorXd x(1);
  x << 0.0;
  CHECK(inflow.psi(x)(0) == 1.0);
  x << 7.0;
  CHECK(inflow.psi(x)(0) == 1.0);
}

TEST_CASE("species follow textual first appearance") {
  const CrnSystem sys = parse_crn("Z + 2 B -> A ; k=1\nC -> Z ; k=2");
  CHECK(sys.species_names() == std::vector<std::string>{"Z", "B", "A", "C"});
  CHECK(sys.stoich()(1, 0) == 2.0);
}

TEST_CASE("grammar details") {
  std::vector<std::string> warnings;
  const CrnSystem sys = parse_crn(
      "# comment line\n\n  A + B <-> 2 C ; k=1.5, 2e-1   # trailing\nA + B -> 2 C ; k = 3\n", &warnings);
  CHECK(sys.reaction_count() == 3);
  CHECK(sys.complex_count() == 2);
  CHECK(sys.graph().edges()[1] == Edge{1, 0, 0.2});
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("parallel edge") != std::string::npos);
  // parallel edges sum in the Laplacian
  CHECK(sys.lap_out()(0, 0) == doctest::Approx(4.5));
  // repeated species inside one complex accumulate
  CHECK(parse_crn("A + A -> B ; k=1").stoich()(0, 0) == 2.0);
}

TEST_CASE("syntax errors carry positions") {
  check_parse_error("A -> B ; k=0", 1, 12);
  check_parse_error("A -> B ; k=-1", 1, 12);
  check_parse_error("A => B ; k=1", 1, 3);
  check_parse_error("\nA -> B k=1", 2, 8);
  check_parse_error("1.5 A -> B ; k=1", 1, 1);
  check_parse_error("A -> A ; k=1", 1, 6);
  check_parse_error("A <-> B ; k=1", 1, 14);
  check_parse_error("A -> B ; k=1 extra", 1, 14);
  check_parse_error("# nothing here\n", 2, 1);
  CHECK_THROWS_AS(parse_crn("A -> B ; k=abc"), ParseError);
  CHECK_THROWS_AS(parse_crn("2 -> B ; k=1"), ParseError);
}

TEST_CASE("JSON input") {
  const CrnSystem star = load_network(fixtures::network_path("star3.json"));
  CHECK(star.species_count() == 1);
  CHECK(star.complex_count() == 4);
  CHECK(star.stoich()(0, 0) == 2.0);

  const CrnSystem real = parse_network(
      R"({"species": ["A", "B"], "S": [[0.5, 0], [0, 1.5]], "edges": [[0, 1, 2.0], [1, 0, 1.0]],
          "complexes": ["half A", "B3/2"]})");
  CHECK(real.stoich()(0, 0) == 0.5);
  CHECK(real.complex_labels()[1] == "B3/2");

  CHECK_THROWS_AS(parse_network("{\"species\": [\"A\"]"), ParseError);
  CHECK_THROWS_AS(parse_network(R"({"species": ["A"], "S": [[1], [1, 2]], "edges": []})"), ParseError);
  CHECK_THROWS_AS(parse_network(R"({"species": ["A"], "S": [[1], [2]], "edges": [[0, 5, 1]]})"),
                  ParseError);
  CHECK_THROWS_AS(parse_network(R"({"species": ["A"], "S": [[-1], [2]], "edges": [[0, 1, 1]]})"),
                  ParseError);
  CHECK_THROWS_AS(load_network("/nonexistent/file.crn"), ParseError);
}

TEST_CASE("shipped fixtures agree with the hand-built systems") {
  const CrnSystem ex1 = load_network(fixtures::network_path("ex1.crn"));
  const CrnSystem ref1 = fixtures::example1();
  CHECK(ex1.stoich() == ref1.stoich());
  CHECK(ex1.lap_out() == ref1.lap_out());

  const CrnSystem ex2 = load_network(fixtures::network_path("ex2.json"));
  CHECK(ex2.stoich() == fixtures::example2_stoich());
  CHECK(ex2.graph() == fixtures::seven_vertex_graph());

  // Text version numbers species and complexes by appearance; it must be the
  // same network up to those permutations.
  const CrnSystem ex2t = load_network(fixtures::network_path("ex2.crn"));
  CHECK(ex2t.complex_count() == 7);
  CHECK(ex2t.reaction_count() == 8);
  CHECK(diagnose(ex2t).delta_L == 0);
  CHECK_FALSE(diagnose(ex2t).csc);
}

TEST_CASE("validation of CrnSystem") {
  Eigen::MatrixXd s(2, 2);
  s << 1, 0, 0, 0;
  CHECK_THROWS_AS(CrnSystem({"A", "B"}, s, DiGraph(2, {{0, 1, 1}})), ValidationError);
  s << 1, 0, 0, -1;
  CHECK_THROWS_AS(CrnSystem({"A", "B"}, s, DiGraph(2, {{0, 1, 1}})), ValidationError);
  CHECK_THROWS_AS(CrnSystem({"A", "B"}, Eigen::MatrixXd::Identity(2, 2), DiGraph(3, {{0, 1, 1}})),
                  ValidationError);
  CHECK_THROWS_AS(CrnSystem({"A"}, Eigen::MatrixXd::Identity(2, 2), DiGraph(2, {{0, 1, 1}})),
                  ValidationError);
}

TEST_CASE("psi") {
  const CrnSystem ex1 = fixtures::example1();
  Eigen::VectorXd x(2);
  x << 0.3, 1.7;
  Eigen::VectorXd expected(4);
  expected << 0.3, 0.09, 1.7, 1.7 * 1.7;
  CHECK((ex1.psi(x) - expected).norm() < 1e-15);

  const CrnSystem ex2 = fixtures::example2();
  CHECK(ex2.psi(Eigen::VectorXd::Ones(6)) == Eigen::VectorXd::Ones(7));
  Eigen::VectorXd y(6);
  y << 1.1, 1.2, 1.3, 1.4, 1.5, 1.6;
  const double x1 = y(0), x2 = y(1), x3 = y(2), x4 = y(3), x5 = y(4), x6 = y(5);
  Eigen::VectorXd p(7);
  p << x2, x2 * x3 * x3, std::pow(x1 * x4 * x5, 3), std::pow(x1 * x3, 3), std::pow(x1 * x6, 3),
      x1 * x5, x1 * x1 * x4 * x4;
  CHECK((ex2.psi(y) - p).norm() < 1e-12 * p.norm());
}

TEST_CASE("vector field and effective rate matrix") {
  const double k1 = 1.3, k2 = 0.7, k3 = 2.1, k4 = 0.4;
  const CrnSystem ex1 = fixtures::example1(k1, k2, k3, k4);
  Eigen::MatrixXd rate(2, 4);
  rate << k1, -k2, 0, 0, 0, 0, k3, -k4;
  CHECK((ex1.effective_rate_matrix() - rate).norm() < 1e-15);
  Eigen::VectorXd x(2);
  x << 0.9, 2.2;
  CHECK(ex1.vector_field(x)(0) == doctest::Approx(k1 * 0.9 - k2 * 0.81));
  CHECK(ex1.vector_field(x)(1) == doctest::Approx(k3 * 2.2 - k4 * 2.2 * 2.2));

  const CrnSystem ex2 = fixtures::example2();
  CHECK(ex2.effective_rate_matrix() == fixtures::example2_rate_matrix());
  Eigen::VectorXd f(6);
  f << 0, 1, -2, 1, 2, 0;
  CHECK((ex2.vector_field(Eigen::VectorXd::Ones(6)) - f).norm() < 1e-15);

  const CrnSystem ab = fixtures::ab(2, 3);
  CHECK(ab.effective_rate_matrix() == -ab.lap_out().transpose());

  Eigen::VectorXd eq(2);
  eq << 0.5, 0.75;
  CHECK(fixtures::example1().vector_field(eq).norm() < 1e-10);
}

TEST_CASE("jacobian matches finite differences") {
  const CrnSystem ex2 = fixtures::example2();
  Eigen::VectorXd x(6);
  x << 0.8, 1.1, 0.6, 1.3, 0.9, 1.2;
  const Eigen::MatrixXd jac = ex2.jacobian(x);
  for (Eigen::Index j = 0; j < 6; ++j) {
    const double h = 1e-6;
    Eigen::VectorXd xp = x, xm = x;
    xp(j) += h;
    xm(j) -= h;
    const Eigen::VectorXd fd = (ex2.vector_field(xp) - ex2.vector_field(xm)) / (2 * h);
    CHECK((fd - jac.col(j)).norm() < 1e-6 * std::max(1.0, jac.col(j).norm()));
  }
}

TEST_CASE("monomial identity, boundary sign and image membership") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(0.05, 3.0);
  const CrnSystem sys = fixtures::example2();
  const Subspace conserved = conservation_subspace(sys);
  for (int trial = 0; trial < 200; ++trial) {
    Eigen::VectorXd x(6);
    for (auto& v : x) v = u(rng);
    const Eigen::VectorXd lhs = sys.psi(x).array().log().matrix();
    const Eigen::VectorXd rhs = sys.stoich().transpose() * x.array().log().matrix();
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, rhs.cwiseAbs().maxCoeff()));
    CHECK(conserved.project(sys.vector_field(x)).norm() < 1e-10 * std::max(1.0, sys.vector_field(x).norm()));

    const auto j = static_cast<Eigen::Index>(rng() % 6);
    x(j) = 0.0;
    CHECK(sys.vector_field(x)(j) >= -1e-12);
  }
}

}
