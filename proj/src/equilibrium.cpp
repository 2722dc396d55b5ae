#include "crnlap/equilibrium.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include "crnlap/deficiency.hpp"
#include "crnlap/error.hpp"
#include "crnlap/reach.hpp"

namespace crnlap {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

void require_theorem_hypotheses(const CrnSystem& sys, double tol) {
  const DeficiencyReport report = diagnose(sys, tol);
  if (report.delta_L != 0) {
    throw PreconditionViolated("network has delta_L = " + std::to_string(report.delta_L) +
                               " > 0 (zero Laplacian deficiency theorem needs delta_L = 0)");
  }
  if (!report.csc) {
    throw PreconditionViolated("network is not CSC (zero Laplacian deficiency theorem)");
  }
}

std::vector<double> coefficients_from_psi(const Eigen::VectorXd& psi, const ReachStructure& rs) {
  std::vector<double> a;
  for (const auto& cabal : rs.cabals) {
    double sum = 0.0;
    for (Vertex j : cabal) sum += psi(static_cast<Eigen::Index>(j));
    a.push_back(sum);
  }
  return a;
}

Eigen::VectorXd combine(const KernelBases& kb, const std::vector<double>& a, Eigen::Index v) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(v);
  for (std::size_t m = 0; m < a.size(); ++m) out += a[m] * kb.left_basis[m];
  return out;
}

void check_structure(const Eigen::VectorXd& psi_star, const KernelBases& kb,
                     const std::vector<double>& a) {
  const Eigen::VectorXd expected = combine(kb, a, psi_star.size());
  if ((psi_star - expected).norm() > 1e-8 * std::max(1.0, psi_star.norm())) {
    throw NumericalFailure("psi(x*) does not match the left-kernel combination");
  }
}

struct BaseSolution {
  EquilibriumResult result;
  ReachStructure co_reach;
  KernelBases kernel;
};

BaseSolution solve_base(const CrnSystem& sys, const EquilibriumOptions& opts) {
  require_theorem_hypotheses(sys, opts.rank_tol);

  BaseSolution out{{}, co_reaches(sys.graph()), {}};
  out.kernel = structured_kernel(sys.lap_out(), out.co_reach, opts.rank_tol);
  const auto v = static_cast<Eigen::Index>(sys.complex_count());

  Eigen::VectorXd left_sum = Eigen::VectorXd::Zero(v);
  for (const auto& g : out.kernel.left_basis) left_sum += g;
  if ((left_sum.array() <= 0.0).any()) {
    throw NumericalFailure("left kernel vectors do not cover every vertex");
  }
  const Eigen::VectorXd rhs = left_sum.array().log().matrix();

  // Eliminate the reach offsets: remove the per-reach mean (reaches are
  // disjoint for CSC graphs), then take the minimum-norm least-squares u.
  auto remove_reach_means = [&out](Eigen::MatrixXd m) {
    for (const auto& reach : out.co_reach.reaches) {
      Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(m.cols());
      for (Vertex j : reach) mean += m.row(static_cast<Eigen::Index>(j));
      mean /= static_cast<double>(reach.size());
      for (Vertex j : reach) m.row(static_cast<Eigen::Index>(j)) -= mean;
    }
    return m;
  };
  const Eigen::MatrixXd reduced = remove_reach_means(sys.stoich().transpose());
  const Eigen::VectorXd reduced_rhs = remove_reach_means(rhs);

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(reduced);
  cod.setThreshold(opts.rank_tol);
  const Eigen::VectorXd u = cod.solve(reduced_rhs);
  if ((reduced * u - reduced_rhs).norm() > 1e-8 * (1.0 + rhs.norm())) {
    throw NumericalFailure("log-linear equilibrium system is not solvable at this tolerance");
  }

  const Eigen::VectorXd offsets = sys.stoich().transpose() * u - rhs;
  std::vector<double> a;
  for (const auto& reach : out.co_reach.reaches) {
    double mean = 0.0;
    for (Vertex j : reach) mean += offsets(static_cast<Eigen::Index>(j));
    a.push_back(std::exp(mean / static_cast<double>(reach.size())));
  }

  EquilibriumResult& r = out.result;
  r.x_star = u.array().exp().matrix();
  r.psi_star = sys.psi(r.x_star);
  r.reach_coefficients = a;
  r.residual = (sys.effective_rate_matrix() * r.psi_star).norm();
  check_structure(r.psi_star, out.kernel, a);
  if (relative_residual(sys, r.x_star) > opts.residual_tol) {
    throw NumericalFailure("base equilibrium residual " + std::to_string(r.residual) +
                           " exceeds tolerance");
  }
  r.class_tag = conservation_subspace(sys, opts.rank_tol).project(r.x_star);
  return out;
}

}  // namespace

double relative_residual(const CrnSystem& sys, const StateVector& x) {
  const Eigen::VectorXd p = sys.psi(x);
  const double scale =
      std::max(1.0, sys.effective_rate_matrix().norm()) * std::max(1.0, p.norm());
  return (sys.effective_rate_matrix() * p).norm() / scale;
}

EquilibriumResult base_equilibrium(const CrnSystem& sys, const EquilibriumOptions& opts) {
  return solve_base(sys, opts).result;
}

ClassObjective::ClassObjective(Eigen::VectorXd base, Eigen::MatrixXd kernel_basis, Eigen::VectorXd z)
    : base_(std::move(base)), basis_(std::move(kernel_basis)), z_coords_(basis_.transpose() * z) {}

Eigen::VectorXd ClassObjective::point(const Eigen::VectorXd& alpha) const {
  return base_.cwiseProduct((basis_ * alpha).array().exp().matrix());
}

double ClassObjective::value(const Eigen::VectorXd& alpha) const {
  return point(alpha).sum() - z_coords_.dot(alpha);
}

Eigen::VectorXd ClassObjective::gradient(const Eigen::VectorXd& alpha) const {
  return basis_.transpose() * point(alpha) - z_coords_;
}

Eigen::MatrixXd ClassObjective::hessian(const Eigen::VectorXd& alpha) const {
  return basis_.transpose() * point(alpha).asDiagonal() * basis_;
}

EquilibriumResult equilibrium_in_class(const CrnSystem& sys, const StateVector& x0,
                                       const EquilibriumOptions& opts) {
  if (x0.size() != static_cast<Eigen::Index>(sys.species_count())) {
    throw ValidationError("initial state has wrong dimension");
  }
  if (!(x0.array() > 0.0).all()) {
    throw PreconditionViolated("initial state must be strictly positive");
  }

  BaseSolution base = solve_base(sys, opts);
  const Subspace kernel = conservation_subspace(sys, opts.rank_tol);
  const Eigen::VectorXd z = kernel.project(x0);
  if (kernel.dim() == 0) {
    base.result.class_tag = z;
    return base.result;
  }

  const ClassObjective h(base.result.x_star, kernel.basis(), z);
  Eigen::VectorXd alpha = opts.initial_coordinates.value_or(Eigen::VectorXd::Zero(kernel.dim()));
  if (alpha.size() != kernel.dim()) throw ValidationError("initial coordinates have wrong dimension");

  const double z_scale = 1.0 + z.norm();
  std::size_t iteration = 0;
  bool converged = false;
  for (; iteration <= opts.max_iterations; ++iteration) {
    const Eigen::VectorXd g = h.gradient(alpha);
    const Eigen::VectorXd p_now = h.point(alpha);
    // Roundoff floor of Q^T p keeps the 1e-12 target attainable when |p| >> |z|.
    const double floor = 64.0 * kEps * p_now.norm() * std::sqrt(static_cast<double>(p_now.size()));
    if (g.norm() <= std::max(1e-12 * z_scale, floor)) {
      converged = true;
      break;
    }
    if (iteration == opts.max_iterations) break;

    const Eigen::LLT<Eigen::MatrixXd> llt(h.hessian(alpha));
    if (llt.info() != Eigen::Success) throw NumericalFailure("Newton Hessian is not positive definite");
    const Eigen::VectorXd step = llt.solve(-g);
    const double slope = g.dot(step);
    const double h0 = h.value(alpha);
    // h is a difference of two large terms near the minimum; its roundoff
    // scales with the terms, not with h itself.
    const double h_noise = 8.0 * kEps * (p_now.sum() + std::abs(h0 - p_now.sum()));

    double t = 1.0;
    bool accepted = false;
    while (t > 1e-20) {
      const Eigen::VectorXd trial = alpha + t * step;
      const double h1 = h.value(trial);
      if (std::isfinite(h1) &&
          h1 <= h0 + opts.armijo_slope * t * slope + h_noise) {
        alpha = trial;
        accepted = true;
        break;
      }
      t *= 0.5;
    }
    if (!accepted) break;
  }
  if (!converged) {
    throw NonConvergence("Newton iteration for the class equilibrium did not converge after " +
                         std::to_string(iteration) + " iterations");
  }

  EquilibriumResult r;
  r.x_star = h.point(alpha);
  r.psi_star = sys.psi(r.x_star);
  r.reach_coefficients = coefficients_from_psi(r.psi_star, base.co_reach);
  r.residual = (sys.effective_rate_matrix() * r.psi_star).norm();
  r.class_tag = kernel.project(r.x_star);
  r.newton_iterations = iteration;
  check_structure(r.psi_star, base.kernel, r.reach_coefficients);
  if (relative_residual(sys, r.x_star) > opts.residual_tol) {
    throw NumericalFailure("class equilibrium residual " + std::to_string(r.residual) +
                           " exceeds tolerance");
  }
  return r;
}

bool verify_equilibrium_pair(const CrnSystem& sys, const StateVector& x1, const StateVector& x2,
                             double tol) {
  const auto c = static_cast<Eigen::Index>(sys.species_count());
  if (x1.size() != c || x2.size() != c) throw ValidationError("state has wrong dimension");
  if (!(x1.array() > 0.0).all() || !(x2.array() > 0.0).all()) {
    throw ValidationError("equilibrium comparison requires strictly positive states");
  }
  if (relative_residual(sys, x1) > tol) {
    throw PreconditionViolated("reference state is not an equilibrium");
  }
  const Eigen::VectorXd log_ratio = (x2.array() / x1.array()).log().matrix();
  const Eigen::MatrixXd lst = sys.lap_out() * sys.stoich().transpose();
  return (lst * log_ratio).norm() <= tol * std::max(1.0, lst.norm()) * std::max(1.0, log_ratio.norm());
}

}  // namespace crnlap
