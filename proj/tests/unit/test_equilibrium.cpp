#include <random>

#include <doctest.h>

#include "../fixtures.hpp"
#include "crnlap/deficiency.hpp"
#include "crnlap/equilibrium.hpp"
#include "crnlap/error.hpp"
#include "crnlap/laplacian_kernel.hpp"
#include "crnlap/reach.hpp"

using namespace crnlap;

namespace {

Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

// A CSC network with a two-dimensional conservation space:
// A + B <-> C, C <-> D over four species.
CrnSystem two_law_network() {
  return parse_crn("A + B <-> C ; k=1.5, 0.5\nC <-> D ; k=2, 3\n");
}

}  // namespace

TEST_SUITE("equilibrium_solver") {

TEST_CASE("example 1 base equilibrium") {
  const auto r = base_equilibrium(fixtures::example1(1, 2, 3, 4));
  CHECK((r.x_star - vec({0.5, 0.75})).norm() < 1e-8);
  CHECK(r.residual < 1e-10);
  REQUIRE(r.reach_coefficients.size() == 2);
  for (double a : r.reach_coefficients) CHECK(a > 0.0);
  CHECK(r.class_tag.norm() == 0.0);
}

TEST_CASE("A <-> B canonical base equilibrium") {
  const auto r = base_equilibrium(fixtures::ab(1, 1));
  CHECK((r.x_star - vec({1, 1})).norm() < 1e-10);
}

TEST_CASE("psi at the equilibrium follows the left kernel structure") {
  const CrnSystem sys = two_law_network();
  const auto r = base_equilibrium(sys);
  const auto kb = structured_kernel(sys.lap_out(), co_reaches(sys.graph()));
  Eigen::VectorXd combo = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(sys.complex_count()));
  for (std::size_t m = 0; m < kb.left_basis.size(); ++m) combo += r.reach_coefficients[m] * kb.left_basis[m];
  CHECK((combo - r.psi_star).norm() < 1e-8 * r.psi_star.norm());
  CHECK(relative_residual(sys, r.x_star) < 1e-8);
}

TEST_CASE("theorem preconditions") {
  try {
    base_equilibrium(fixtures::example2());
    FAIL("expected PreconditionViolated");
  } catch (const PreconditionViolated& e) {
    CHECK(std::string(e.what()) == "network is not CSC (zero Laplacian deficiency theorem)");
  }
  CHECK_THROWS_AS(base_equilibrium(load_network(fixtures::network_path("cycle3.crn"))),
                  PreconditionViolated);
  CHECK_THROWS_AS(equilibrium_in_class(fixtures::ab(1, 1), vec({1, 0})), PreconditionViolated);
  CHECK_THROWS_AS(equilibrium_in_class(fixtures::ab(1, 1), vec({1, 1, 1})), ValidationError);
}

TEST_CASE("class equilibria of A <-> B") {
  const auto r = equilibrium_in_class(fixtures::ab(1, 1), vec({3, 1}));
  CHECK((r.x_star - vec({2, 2})).norm() < 1e-10);
  CHECK((r.class_tag - vec({2, 2})).norm() < 1e-10);

  const auto r2 = equilibrium_in_class(fixtures::ab(1, 2), vec({3, 3}));
  CHECK((r2.x_star - vec({4, 2})).norm() < 1e-10);
}

TEST_CASE("example 1 has a single class") {
  for (const auto& x0 : {vec({0.1, 5.0}), vec({3.0, 0.01})}) {
    const auto r = equilibrium_in_class(fixtures::example1(), x0);
    CHECK((r.x_star - vec({0.5, 0.75})).norm() < 1e-8);
  }
}

TEST_CASE("representative independence and class membership") {
  const CrnSystem sys = two_law_network();
  const Subspace k = conservation_subspace(sys);
  REQUIRE(k.dim() == 2);
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.1, 4.0);
  for (int trial = 0; trial < 20; ++trial) {
    Eigen::VectorXd x0(4);
    for (auto& v : x0) v = u(rng);
    const auto r = equilibrium_in_class(sys, x0);
    CHECK((k.project(r.x_star) - k.project(x0)).norm() <= 1e-9 * (1 + x0.norm()));

    // another representative with the same projection
    const Subspace im = k.orthogonal_complement();
    Eigen::VectorXd shift = im.basis() * Eigen::VectorXd::Random(im.dim()) * 0.05;
    const Eigen::VectorXd x1 = x0 + shift;
    if ((x1.array() <= 0).any()) continue;
    const auto r1 = equilibrium_in_class(sys, x1);
    CHECK((r1.x_star - r.x_star).norm() < 1e-8 * (1 + r.x_star.norm()));
    CHECK(verify_equilibrium_pair(sys, r.x_star, base_equilibrium(sys).x_star));
  }
}

TEST_CASE("class objective derivatives and convexity") {
  const CrnSystem sys = two_law_network();
  const auto base = base_equilibrium(sys);
  const Subspace k = conservation_subspace(sys);
  const ClassObjective h(base.x_star, k.basis(), vec({1.0, 2.0, 0.5, 0.7}));
  std::mt19937_64 rng(8);
  std::normal_distribution<double> n(0.0, 0.7);
  for (int trial = 0; trial < 30; ++trial) {
    Eigen::VectorXd a(2), d(2);
    for (auto& x : a) x = n(rng);
    for (auto& x : d) x = n(rng);
    const Eigen::VectorXd g = h.gradient(a);
    for (Eigen::Index i = 0; i < 2; ++i) {
      const double step = 1e-5;
      Eigen::VectorXd ap = a, am = a;
      ap(i) += step;
      am(i) -= step;
      const double fd = (h.value(ap) - h.value(am)) / (2 * step);
      CHECK(std::abs(fd - g(i)) <= 1e-6 * std::max(1.0, std::abs(g(i))));
    }
    CHECK(h.value(a) + g.dot(d) <= h.value(a + d) + 1e-10);
    CHECK(h.hessian(a).llt().info() == Eigen::Success);
  }
}

TEST_CASE("restarts reach the same equilibrium") {
  const CrnSystem sys = two_law_network();
  const Eigen::VectorXd x0 = vec({1.0, 2.0, 0.3, 0.4});
  const auto ref = equilibrium_in_class(sys, x0);
  std::mt19937_64 rng(12);
  std::normal_distribution<double> n(0.0, 1.5);
  for (int trial = 0; trial < 25; ++trial) {
    EquilibriumOptions opts;
    Eigen::VectorXd start(2);
    for (auto& x : start) x = n(rng);
    opts.initial_coordinates = start;
    const auto r = equilibrium_in_class(sys, x0, opts);
    CHECK((r.x_star - ref.x_star).norm() < 1e-8 * (1 + ref.x_star.norm()));
  }
}

TEST_CASE("pair verification") {
  const CrnSystem sys = fixtures::ab(1, 1);
  CHECK(verify_equilibrium_pair(sys, vec({1, 1}), vec({1, 1})));
  CHECK(verify_equilibrium_pair(sys, vec({1, 1}), vec({5, 5})));
  CHECK_FALSE(verify_equilibrium_pair(sys, vec({1, 1}), vec({1, 2})));
  CHECK_THROWS_AS(verify_equilibrium_pair(sys, vec({1, 1}), vec({0, 2})), ValidationError);
  CHECK_THROWS_AS(verify_equilibrium_pair(sys, vec({1, 2}), vec({1, 1})), PreconditionViolated);
}

}
