#include "crnlap/selftest.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <sstream>

#include "crnlap/deficiency.hpp"
#include "crnlap/equilibrium.hpp"
#include "crnlap/error.hpp"
#include "crnlap/laplacian_kernel.hpp"
#include "crnlap/linalg.hpp"
#include "crnlap/reach.hpp"
#include "crnlap/scalar.hpp"
#include "crnlap/simulator.hpp"

namespace crnlap {

namespace {

struct Case {
  std::string failure;
  bool skipped = false;

  void require(bool condition, const std::string& what) {
    if (!condition && failure.empty()) failure = what;
  }
};

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

template <typename Body>
PropertyResult run_property(const std::string& suite, const std::string& name, std::uint64_t seed,
                            std::size_t cases, Body body) {
  PropertyResult result;
  result.suite = suite;
  result.name = name;
  Rng rng(seed ^ fnv1a(suite + "/" + name));
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < cases; ++i) {
    Case c;
    try {
      body(rng, c);
    } catch (const std::exception& e) {
      c.failure = std::string("exception: ") + e.what();
    }
    ++result.cases;
    if (c.skipped) {
      ++result.skipped;
    } else if (!c.failure.empty()) {
      if (result.failures++ == 0) result.first_failure = "case " + std::to_string(i) + ": " + c.failure;
    }
  }
  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::size_t pick(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

std::string num(double x) {
  std::ostringstream s;
  s.precision(6);
  s << x;
  return s.str();
}

std::vector<std::string> species_names(std::size_t c) {
  std::vector<std::string> names;
  for (std::size_t i = 1; i <= c; ++i) names.push_back("X" + std::to_string(i));
  return names;
}

// Random c x v matrix over {0,1,2} with no zero rows and distinct columns.
Eigen::MatrixXd random_stoichiometry(Rng& rng, std::size_t c, std::size_t v) {
  const auto rows = static_cast<Eigen::Index>(c);
  const auto cols = static_cast<Eigen::Index>(v);
  Eigen::MatrixXd s(rows, cols);
  while (true) {
    for (auto& x : s.reshaped()) {
      const double u = uniform(rng, 0, 1);
      x = u < 0.5 ? 0.0 : (u < 0.85 ? 1.0 : 2.0);
    }
    bool ok = true;
    for (Eigen::Index i = 0; i < rows && ok; ++i) ok = !s.row(i).isZero();
    for (Eigen::Index a = 0; a < cols && ok; ++a)
      for (Eigen::Index b = a + 1; b < cols && ok; ++b) ok = s.col(a) != s.col(b);
    if (ok) return s;
  }
}

double scale_of(const Eigen::MatrixXd& m) { return std::max(1.0, m.cwiseAbs().maxCoeff()); }

void check_kernel_patterns(Case& c, const Eigen::MatrixXd& lap, const ReachStructure& rs, const char* which) {
  const KernelBases kb = structured_kernel(lap, rs);
  const Eigen::Index v = lap.rows();
  const double scale = scale_of(lap);
  const std::string tag(which);
  Eigen::VectorXd total = Eigen::VectorXd::Zero(v);
  for (std::size_t m = 0; m < rs.size(); ++m) {
    const Eigen::VectorXd& g = kb.right_basis[m];
    total += g;
    c.require((lap * g).norm() <= 1e-9 * scale * std::max(1.0, g.norm()), tag + ": right vector not in kernel");
    std::vector<int> role(static_cast<std::size_t>(v), 0);
    for (Vertex j : rs.exclusive[m]) role[j] = 1;
    for (Vertex j : rs.common[m]) role[j] = 2;
    for (Eigen::Index j = 0; j < v; ++j) {
      const double x = g(j);
      switch (role[static_cast<std::size_t>(j)]) {
        case 1: c.require(std::abs(x - 1.0) <= 1e-9, tag + ": right vector not 1 on exclusive part"); break;
        case 2: c.require(x > 0.0 && x < 1.0, tag + ": right vector not in (0,1) on common part"); break;
        default: c.require(x == 0.0, tag + ": right vector nonzero off its reach");
      }
    }

    const Eigen::VectorXd& h = kb.left_basis[m];
    c.require((lap.transpose() * h).norm() <= 1e-9 * scale, tag + ": left vector not in kernel");
    c.require(std::abs(h.sum() - 1.0) <= 1e-9, tag + ": left vector does not sum to 1");
    std::vector<bool> in_cabal(static_cast<std::size_t>(v), false);
    for (Vertex j : rs.cabals[m]) in_cabal[j] = true;
    for (Eigen::Index j = 0; j < v; ++j) {
      if (in_cabal[static_cast<std::size_t>(j)]) {
        c.require(h(j) > 0.0, tag + ": left vector not positive on its cabal");
      } else {
        c.require(h(j) == 0.0, tag + ": left vector nonzero off its cabal");
      }
    }
  }
  c.require((total - Eigen::VectorXd::Ones(v)).cwiseAbs().maxCoeff() <= 1e-9,
            tag + ": right vectors do not sum to the ones vector");
}

// Integer matrix of rank <= r as a product of random factors.
Eigen::MatrixXd random_low_rank(Rng& rng, Eigen::Index rows, Eigen::Index cols, Eigen::Index r) {
  Eigen::MatrixXd a(rows, r), b(r, cols);
  std::uniform_int_distribution<int> entry(-3, 3);
  for (auto& x : a.reshaped()) x = entry(rng);
  for (auto& x : b.reshaped()) x = entry(rng);
  return a * b;
}

}  // namespace

DiGraph random_digraph(Rng& rng, std::size_t v, std::size_t e) {
  std::vector<Edge> edges;
  if (v < 2) e = 0;
  while (edges.size() < e) {
    const std::size_t a = pick(rng, 0, v - 1);
    const std::size_t b = pick(rng, 0, v - 1);
    if (a != b) edges.push_back({a, b, std::exp(uniform(rng, std::log(0.1), std::log(10.0)))});
  }
  return DiGraph(v, std::move(edges));
}

CrnSystem random_network(Rng& rng) {
  const std::size_t c = pick(rng, 1, 4);
  const std::size_t v = pick(rng, 2, 7);
  Eigen::MatrixXd s(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(v));
  for (auto& x : s.reshaped()) x = static_cast<double>(pick(rng, 0, 2));
  for (Eigen::Index i = 0; i < s.rows(); ++i) {
    if (s.row(i).isZero()) s(i, static_cast<Eigen::Index>(pick(rng, 0, v - 1))) = 1.0;
  }
  std::vector<Edge> edges;
  const std::size_t e = pick(rng, 1, 2 * v);
  while (edges.size() < e) {
    const std::size_t a = pick(rng, 0, v - 1);
    const std::size_t b = pick(rng, 0, v - 1);
    if (a != b) edges.push_back({a, b, uniform(rng, 0.2, 5.0)});
  }
  return CrnSystem(species_names(c), s, DiGraph(v, std::move(edges)));
}

CrnSystem random_csc_zero_deficiency_network(Rng& rng) {
  while (true) {
    const std::size_t blocks = pick(rng, 1, 2);
    std::vector<Edge> edges;
    std::size_t v = 0;
    for (std::size_t b = 0; b < blocks; ++b) {
      const std::size_t size = pick(rng, 2, 4);
      for (std::size_t i = 0; i < size; ++i) {
        edges.push_back({v + i, v + (i + 1) % size, uniform(rng, 0.2, 5.0)});
      }
      for (std::size_t chords = pick(rng, 0, size - 1); chords > 0; --chords) {
        const std::size_t a = pick(rng, 0, size - 1);
        const std::size_t h = pick(rng, 0, size - 1);
        if (a != h) edges.push_back({v + a, v + h, uniform(rng, 0.2, 5.0)});
      }
      v += size;
    }
    const std::size_t c = pick(rng, v - blocks + 1, v - blocks + 3);
    CrnSystem sys(species_names(c), random_stoichiometry(rng, c, v), DiGraph(v, std::move(edges)));
    if (classical_deficiency(sys) == 0) return sys;
  }
}

StateVector random_positive_state(Rng& rng, std::size_t c) {
  StateVector x(static_cast<Eigen::Index>(c));
  for (auto& xi : x) xi = std::exp(uniform(rng, -2.0, 2.0));
  return x;
}

std::vector<PropertyResult> run_structure_properties(std::uint64_t seed, std::size_t cases) {
  const std::string suite = "structure";
  std::vector<PropertyResult> out;
  auto graph = [](Rng& rng) {
    const std::size_t v = pick(rng, 1, 8);
    return random_digraph(rng, v, pick(rng, 0, 2 * v));
  };

  out.push_back(run_property(suite, "laplacian_identities", seed, cases, [&](Rng& rng, Case& c) {
    const DiGraph g = graph(rng);
    const LaplacianMatrices m = build_matrices(g);
    const double scale = m.weights.size() ? scale_of(m.weights) : 1.0;
    c.require(m.lap_in.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12 * scale, "lap_in row sum");
    c.require(m.lap_out.rowwise().sum().cwiseAbs().maxCoeff() <= 1e-12 * scale, "lap_out row sum");
    const Eigen::MatrixXd d = m.incidence.cast<double>();
    c.require((m.lap_in + m.lap_out - d * m.weights * d.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * scale,
              "lap_in + lap_out != d W d^T");
    for (Eigen::Index i = 0; i < m.lap_in.rows(); ++i)
      for (Eigen::Index j = 0; j < m.lap_in.cols(); ++j) {
        if (i == j) {
          c.require(m.lap_in(i, j) >= 0 && m.lap_out(i, j) >= 0, "negative diagonal");
        } else {
          c.require(m.lap_in(i, j) <= 0 && m.lap_out(i, j) <= 0, "positive off-diagonal");
        }
      }
    for (Eigen::Index l = 0; l < m.begin.cols(); ++l) {
      c.require(m.begin.col(l).sum() == 1.0 && m.end.col(l).sum() == 1.0, "B/E column is not a unit vector");
    }
  }));

  out.push_back(run_property(suite, "reverse_duality", seed, cases, [&](Rng& rng, Case& c) {
    const DiGraph g = graph(rng);
    c.require(build_matrices(g).lap_out == build_matrices(reverse(g)).lap_in, "lap_out(g) != lap_in(reverse g)");
    c.require(reverse(reverse(g)) == g, "reverse is not an involution");
    c.require(is_csc(g) == is_csc(reverse(g)), "CSC differs from the reversed graph");
  }));

  out.push_back(run_property(suite, "kernel_dimension", seed, cases, [&](Rng& rng, Case& c) {
    const DiGraph g = graph(rng);
    const LaplacianMatrices m = build_matrices(g);
    const ReachStructure rs = reaches(g);
    const std::size_t k = rs.size();
    c.require(static_cast<std::size_t>(nullspace(m.lap_in).dim()) == k,
              "dim Ker lap_in != number of reaches");
    c.require(static_cast<std::size_t>(nullspace(m.lap_out).dim()) == co_reaches(g).size(),
              "dim Ker lap_out != number of co-reaches");
    c.require(zero_multiplicity_check(m.lap_in, k), "eigenvalue 0 multiplicity or stability fails");
    const std::size_t rank_d = g.edge_count() ? numeric_rank(m.incidence.cast<double>()) : 0;
    c.require(rank_d == dim_image_incidence(g), "rank d != v - weak components");
    std::size_t cabal_total = 0;
    for (const auto& b : rs.cabals) cabal_total += b.size();
    c.require((cabal_total == g.vertex_count()) == is_csc(g), "cabals cover the vertices iff CSC fails");
  }));

  out.push_back(run_property(suite, "kernel_patterns", seed, cases, [&](Rng& rng, Case& c) {
    const DiGraph g = graph(rng);
    const LaplacianMatrices m = build_matrices(g);
    check_kernel_patterns(c, m.lap_in, reaches(g), "lap_in");
    check_kernel_patterns(c, m.lap_out, co_reaches(g), "lap_out");
  }));

  out.push_back(run_property(suite, "deficiency_order", seed, cases, [&](Rng& rng, Case& c) {
    const CrnSystem sys = random_network(rng);
    const DeficiencyReport r = diagnose(sys);
    c.require(r.delta_L <= r.delta_classical,
              "delta_L = " + std::to_string(r.delta_L) + " > delta = " + std::to_string(r.delta_classical));
    if (r.csc) c.require(r.delta_L == r.delta_classical, "delta_L != delta on a CSC network");
    const Eigen::MatrixXd dt = sys.matrices().incidence.cast<double>().transpose();
    const Subspace sum = subspace_sum(image(sys.stoich().transpose()), nullspace(dt));
    c.require(r.delta_classical == sys.complex_count() - static_cast<std::size_t>(sum.dim()),
              "delta != v - dim(Im S^T + Ker d^T)");
  }));

  out.push_back(run_property(suite, "kernel_inclusion", seed, cases, [&](Rng& rng, Case& c) {
    const CrnSystem sys = random_network(rng);
    const DeficiencyReport r = diagnose(sys);
    c.require(kernel_inclusion_check(sys), "Ker d^T S^T not inside Ker lap_out S^T");
    c.require(r.dim_ker_dTST <= r.dim_ker_LST, "dim Ker d^T S^T > dim Ker lap_out S^T");
    if (r.csc) c.require(r.dim_ker_dTST == r.dim_ker_LST, "kernels differ on a CSC network");
  }));

  out.push_back(run_property(suite, "scalar_lemmas", seed, cases, [&](Rng& rng, Case& c) {
    const double a = std::exp(uniform(rng, -5, 5));
    const double b = uniform(rng, 0, 1) < 0.1 ? a : std::exp(uniform(rng, -5, 5));
    const double lg = log_gap(a, b);
    const double mg = monotone_gap(a, b);
    const double big = std::max(a, b);
    c.require(lg >= -1e-12 * big && mg >= -1e-12 * big, "negative gap at a=" + num(a) + " b=" + num(b));
    if (a == b) c.require(lg == 0.0 && mg == 0.0, "gap nonzero at a == b");
    if (std::abs(a - b) > 1e-6 * big) c.require(lg > 0.0 && mg > 0.0, "gap zero at distinct a, b");
    const auto [lo, hi] = coercive_bounds(a, b);
    c.require(lo < hi, "empty coercive interval");
    const double minimizer = std::log(a) - std::log(b);
    c.require(lo <= minimizer && minimizer <= hi, "interval misses ln a - ln b");
    for (double step : {1e-6, 0.1, 1.0, 10.0}) {
      c.require(b * std::exp(hi + step) - a * (hi + step) > b, "coercivity fails above the interval");
      c.require(b * std::exp(lo - step) - a * (lo - step) > b, "coercivity fails below the interval");
    }
  }));

  out.push_back(run_property(suite, "subspace_sum_identity", seed, cases, [&](Rng& rng, Case& c) {
    const auto n = static_cast<Eigen::Index>(pick(rng, 1, 7));
    const Eigen::MatrixXd a = random_low_rank(rng, static_cast<Eigen::Index>(pick(rng, 1, 7)), n,
                                              static_cast<Eigen::Index>(pick(rng, 1, 4)));
    const Eigen::MatrixXd b = random_low_rank(rng, static_cast<Eigen::Index>(pick(rng, 1, 7)), n,
                                              static_cast<Eigen::Index>(pick(rng, 1, 4)));
    const auto left = subspace_intersection(nullspace(a), image(b.transpose())).dim();
    const auto right = subspace_sum(image(a.transpose()), nullspace(b)).dim();
    c.require(left + right == n, "dim(Ker A & Im B^T) + dim(Im A^T + Ker B) = " + std::to_string(left + right) +
                                     " != " + std::to_string(n));
  }));

  out.push_back(run_property(suite, "mass_action_field", seed, cases, [&](Rng& rng, Case& c) {
    const CrnSystem sys = random_network(rng);
    StateVector x = random_positive_state(rng, sys.species_count());
    const Eigen::VectorXd lhs = sys.psi(x).array().log().matrix();
    const Eigen::VectorXd rhs = sys.stoich().transpose() * x.array().log().matrix();
    c.require((lhs - rhs).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, rhs.cwiseAbs().maxCoeff()),
              "Ln psi != S^T Ln x");
    const Eigen::VectorXd f = sys.vector_field(x);
    c.require(conservation_subspace(sys).project(f).norm() <= 1e-10 * std::max(1.0, f.norm()),
              "vector field leaves Im S lap_out^T");
    const auto j = static_cast<Eigen::Index>(pick(rng, 0, sys.species_count() - 1));
    x(j) = 0.0;
    c.require(sys.vector_field(x)(j) >= -1e-12, "inward-pointing field violated on a face");
  }));
  return out;
}

std::vector<PropertyResult> run_equilibrium_properties(std::uint64_t seed, std::size_t networks) {
  const std::string suite = "equilibrium";
  std::vector<PropertyResult> out;

  out.push_back(run_property(suite, "solver_residual", seed, networks, [&](Rng& rng, Case& c) {
    const CrnSystem sys = random_csc_zero_deficiency_network(rng);
    const EquilibriumResult base = base_equilibrium(sys);
    c.require(relative_residual(sys, base.x_star) <= 1e-8, "base residual " + num(relative_residual(sys, base.x_star)));
    for (double a : base.reach_coefficients) c.require(a > 0.0, "non-positive reach coefficient");
    const StateVector x0 = random_positive_state(rng, sys.species_count());
    const EquilibriumResult p = equilibrium_in_class(sys, x0);
    c.require(relative_residual(sys, p.x_star) <= 1e-8, "class residual " + num(relative_residual(sys, p.x_star)));
    const Subspace k = conservation_subspace(sys);
    const Eigen::VectorXd z = k.project(x0);
    c.require((k.project(p.x_star) - z).norm() <= 1e-9 * std::max(1.0, z.norm()), "equilibrium left its class");
    c.require(verify_equilibrium_pair(sys, base.x_star, p.x_star), "Ln(p / x*) not in Ker lap_out S^T");
  }));

  out.push_back(run_property(suite, "representative_independence", seed, networks, [&](Rng& rng, Case& c) {
    const CrnSystem sys = random_csc_zero_deficiency_network(rng);
    const StateVector x0 = random_positive_state(rng, sys.species_count());
    const Subspace moves = conservation_subspace(sys).orthogonal_complement();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(x0.size());
    for (Eigen::Index j = 0; j < moves.dim(); ++j) w += uniform(rng, -1, 1) * moves.basis().col(j);
    StateVector x1 = x0;
    if (w.norm() > 0) x1 += 0.9 * x0.minCoeff() / w.cwiseAbs().maxCoeff() * w;
    const EquilibriumResult p0 = equilibrium_in_class(sys, x0);
    const EquilibriumResult p1 = equilibrium_in_class(sys, x1);
    c.require((p0.x_star - p1.x_star).norm() <= 1e-8 * std::max(1.0, p0.x_star.norm()),
              "representatives give different equilibria: " + num((p0.x_star - p1.x_star).norm()));
  }));

  auto objective_case = [](Rng& rng) {
    const CrnSystem sys = random_csc_zero_deficiency_network(rng);
    const EquilibriumResult base = base_equilibrium(sys);
    const Subspace k = conservation_subspace(sys);
    const StateVector x0 = random_positive_state(rng, sys.species_count());
    return std::pair{ClassObjective(base.x_star, k.basis(), k.project(x0)), sys};
  };
  auto random_coords = [](Rng& rng, Eigen::Index d, double sigma) {
    Eigen::VectorXd a(d);
    std::normal_distribution<double> n(0.0, sigma);
    for (auto& x : a) x = n(rng);
    return a;
  };

  out.push_back(run_property(suite, "gradient_finite_difference", seed, networks, [&](Rng& rng, Case& c) {
    const auto [h, sys] = objective_case(rng);
    const Eigen::VectorXd alpha = random_coords(rng, h.dim(), 0.5);
    const Eigen::VectorXd g = h.gradient(alpha);
    const double step = 1e-5;
    for (Eigen::Index i = 0; i < h.dim(); ++i) {
      Eigen::VectorXd up = alpha, down = alpha;
      up(i) += step;
      down(i) -= step;
      const double fd = (h.value(up) - h.value(down)) / (2 * step);
      c.require(std::abs(fd - g(i)) <= 1e-6 * std::max(1.0, g.cwiseAbs().maxCoeff()),
                "gradient " + num(g(i)) + " vs finite difference " + num(fd));
    }
  }));

  out.push_back(run_property(suite, "restart_uniqueness", seed, networks, [&](Rng& rng, Case& c) {
    const CrnSystem sys = random_csc_zero_deficiency_network(rng);
    const StateVector x0 = random_positive_state(rng, sys.species_count());
    const EquilibriumResult ref = equilibrium_in_class(sys, x0);
    const auto d = static_cast<Eigen::Index>(conservation_subspace(sys).dim());
    for (int restart = 0; restart < 5; ++restart) {
      EquilibriumOptions opts;
      opts.initial_coordinates = random_coords(rng, d, 1.0);
      const EquilibriumResult p = equilibrium_in_class(sys, x0, opts);
      c.require((p.x_star - ref.x_star).norm() <= 1e-8 * std::max(1.0, ref.x_star.norm()),
                "restart found a different equilibrium");
    }
  }));

  out.push_back(run_property(suite, "objective_convexity", seed, networks, [&](Rng& rng, Case& c) {
    const auto [h, sys] = objective_case(rng);
    for (int trial = 0; trial < 5; ++trial) {
      const Eigen::VectorXd alpha = random_coords(rng, h.dim(), 0.7);
      const Eigen::VectorXd dir = random_coords(rng, h.dim(), 0.7);
      const double h0 = h.value(alpha);
      const double h1 = h.value(alpha + dir);
      c.require(h0 + h.gradient(alpha).dot(dir) <= h1 + 1e-10 * std::max({1.0, std::abs(h0), std::abs(h1)}),
                "tangent line above the objective");
    }
  }));
  return out;
}

std::vector<PropertyResult> run_dynamics_properties(std::uint64_t seed, std::size_t cases) {
  const std::string suite = "dynamics";
  std::vector<PropertyResult> out;
  const std::size_t few = std::max<std::size_t>(100, cases / 10);

  // Half the cases use arbitrary networks, whose solutions may blow up in
  // finite time; those are integrated briefly and skipped if they do.
  struct MixedCase {
    CrnSystem sys;
    StateVector x0;
    double t_end;
  };
  auto mixed_case = [](Rng& rng, bool allow_zeros) {
    const bool tame = uniform(rng, 0, 1) < 0.5;
    MixedCase m{tame ? random_csc_zero_deficiency_network(rng) : random_network(rng), {}, tame ? 2.0 : 0.2};
    m.x0 = random_positive_state(rng, m.sys.species_count()) * 0.5;
    if (allow_zeros) {
      for (auto& x : m.x0)
        if (uniform(rng, 0, 1) < 0.3) x = 0.0;
    }
    return m;
  };
  // Growth past 1e8 on these short horizons is the onset of a finite-time
  // blow-up; roundoff in the conserved quantities then scales with |x|.
  auto blew_up = [](const Trajectory& traj) {
    for (const auto& x : traj.states)
      if (x.cwiseAbs().maxCoeff() > 1e8) return true;
    return false;
  };
  IntegrateOptions brief;
  brief.max_steps = 20000;

  out.push_back(run_property(suite, "forward_invariance", seed, cases, [&](Rng& rng, Case& c) {
    const MixedCase m = mixed_case(rng, true);
    Trajectory traj;
    try {
      traj = integrate(m.sys, m.x0, m.t_end, brief);
    } catch (const StepSizeUnderflow&) {
      c.skipped = true;
      return;
    }
    if (blew_up(traj)) {
      c.skipped = true;
      return;
    }
    c.require(traj.step_stats.min_pre_clamp >= -1e-12,
              "state reached " + num(traj.step_stats.min_pre_clamp) + " before clamping");
    for (const auto& x : traj.states) c.require((x.array() >= 0.0).all(), "negative state recorded");
  }));

  out.push_back(run_property(suite, "conservation", seed, cases, [&](Rng& rng, Case& c) {
    const MixedCase m = mixed_case(rng, false);
    Trajectory traj;
    try {
      traj = integrate(m.sys, m.x0, m.t_end, brief);
    } catch (const StepSizeUnderflow&) {
      c.skipped = true;
      return;
    }
    if (blew_up(traj)) {
      c.skipped = true;
      return;
    }
    c.require(traj.conservation_drift() <= 1e-6 * (1.0 + m.x0.norm()),
              "conserved projection drifted by " + num(traj.conservation_drift()));
  }));

  out.push_back(run_property(suite, "lyapunov_monotone", seed, few, [&](Rng& rng, Case& c) {
    const CrnSystem sys = random_csc_zero_deficiency_network(rng);
    const StateVector x0 = random_positive_state(rng, sys.species_count());
    IntegrateOptions opts;
    opts.abs_tol = 1e-10;
    opts.rel_tol = 1e-10;
    opts.reference = equilibrium_in_class(sys, x0).x_star;
    dissipation_check(sys, x0, *opts.reference);
    const Trajectory traj = integrate(sys, x0, 3.0, opts);
    c.require(traj.lyapunov_max_increase() <= 1e-8, "V rose by " + num(traj.lyapunov_max_increase()));
  }));

  // Draws x0 in the class of x* with V(x0) < min_i x*_i.
  auto basin_point = [](Rng& rng, const StateVector& x_star, const Eigen::MatrixXd& moves) {
    const double bound = x_star.minCoeff();
    while (true) {
      Eigen::VectorXd w = Eigen::VectorXd::Zero(x_star.size());
      for (Eigen::Index j = 0; j < moves.cols(); ++j) w += uniform(rng, -1, 1) * moves.col(j);
      const StateVector x0 = x_star + uniform(rng, 0, 1) * x_star.cwiseAbs().maxCoeff() * w;
      if ((x0.array() > 0.0).all() && lyapunov_value(x0, x_star) < bound) return x0;
    }
  };

  out.push_back(run_property(suite, "basin_convergence_two_state", seed, few, [&](Rng& rng, Case& c) {
    const double k1 = uniform(rng, 0.2, 5.0), k2 = uniform(rng, 0.2, 5.0), total = uniform(rng, 0.5, 10.0);
    const CrnSystem sys({"A", "B"}, Eigen::MatrixXd::Identity(2, 2), DiGraph(2, {{0, 1, k1}, {1, 0, k2}}));
    StateVector guess(2);
    guess << total / 2, total / 2;
    const StateVector x_star = equilibrium_in_class(sys, guess).x_star;
    StateVector exact(2);
    exact << k2 * total / (k1 + k2), k1 * total / (k1 + k2);
    c.require((x_star - exact).norm() <= 1e-9 * total, "solver disagrees with k1 x1 = k2 x2");
    Eigen::MatrixXd moves(2, 1);
    moves << 1, -1;
    const StateVector x0 = basin_point(rng, x_star, moves / std::sqrt(2.0));
    IntegrateOptions opts;
    opts.reference = x_star;
    const Trajectory traj = integrate(sys, x0, 30.0 / (k1 + k2), opts);
    c.require((traj.states.back() - x_star).norm() <= 1e-6 * std::max(1.0, x_star.norm()),
              "did not converge: distance " + num((traj.states.back() - x_star).norm()));
    c.require(traj.lyapunov_max_increase() <= 1e-8, "V rose by " + num(traj.lyapunov_max_increase()));
  }));

  out.push_back(run_property(suite, "basin_convergence_logistic", seed, few, [&](Rng& rng, Case& c) {
    const double k1 = uniform(rng, 0.5, 4.0), k2 = uniform(rng, 0.5, 4.0);
    const double k3 = uniform(rng, 0.5, 4.0), k4 = uniform(rng, 0.5, 4.0);
    Eigen::MatrixXd s(2, 4);
    s << 1, 2, 0, 0, 0, 0, 1, 2;
    const CrnSystem sys({"X1", "X2"}, s, DiGraph(4, {{0, 1, k1}, {1, 0, k2}, {2, 3, k3}, {3, 2, k4}}));
    const StateVector x_star = base_equilibrium(sys).x_star;
    StateVector exact(2);
    exact << k1 / k2, k3 / k4;
    c.require((x_star - exact).norm() <= 1e-8 * exact.norm(), "solver disagrees with (k1/k2, k3/k4)");
    const StateVector x0 = basin_point(rng, x_star, Eigen::MatrixXd::Identity(2, 2));
    IntegrateOptions opts;
    opts.reference = x_star;
    const Trajectory traj = integrate(sys, x0, 30.0 / std::min(k1, k3), opts);
    c.require((traj.states.back() - x_star).norm() <= 1e-6 * std::max(1.0, x_star.norm()),
              "did not converge: distance " + num((traj.states.back() - x_star).norm()));
    c.require(traj.lyapunov_max_increase() <= 1e-8, "V rose by " + num(traj.lyapunov_max_increase()));
  }));
  return out;
}

std::vector<std::string> selftest_suite_names() { return {"structure", "equilibrium", "dynamics"}; }

std::vector<PropertyResult> run_selftest(const SelftestOptions& opts) {
  std::vector<std::string> suites = opts.suites.empty() ? selftest_suite_names() : opts.suites;
  for (const auto& s : suites) {
    const auto names = selftest_suite_names();
    if (std::find(names.begin(), names.end(), s) == names.end()) {
      throw ValidationError("unknown selftest suite '" + s + "'");
    }
  }
  std::vector<PropertyResult> all;
  auto collect = [&](std::vector<PropertyResult> rs) {
    for (auto& r : rs) {
      if (opts.on_result) opts.on_result(r);
      all.push_back(std::move(r));
    }
  };
  for (const auto& s : suites) {
    if (s == "structure") collect(run_structure_properties(opts.seed, opts.cases));
    if (s == "equilibrium") collect(run_equilibrium_properties(opts.seed, std::max<std::size_t>(100, opts.cases / 10)));
    if (s == "dynamics") collect(run_dynamics_properties(opts.seed, opts.cases));
  }
  return all;
}

}  // namespace crnlap
