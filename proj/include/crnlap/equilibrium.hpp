#pragma once

#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "crnlap/crn.hpp"
#include "crnlap/laplacian_kernel.hpp"
#include "crnlap/linalg.hpp"

namespace crnlap {

/// A verified strictly positive equilibrium.
///
/// psi_star = sum_m a_m * left_basis[m] where left_basis is the structured
/// left kernel of lap_out (one vector per co-reach, which for CSC graphs is
/// one per component).
struct EquilibriumResult {
  Eigen::VectorXd x_star;
  Eigen::VectorXd psi_star;
  std::vector<double> reach_coefficients;
  double residual = 0.0;        // |S lap_out^T psi(x_star)|
  Eigen::VectorXd class_tag;    // projection of x_star onto Ker(lap_out S^T)
  std::size_t newton_iterations = 0;
};

struct EquilibriumOptions {
  double rank_tol = kDefaultRankTol;
  /// Relative residual accepted for |S lap_out^T psi| / (|S lap_out^T| |psi|).
  double residual_tol = 1e-8;
  std::size_t max_iterations = 60;
  double armijo_slope = 1e-4;
  /// Newton start in kernel coordinates; zero (i.e. the base equilibrium)
  /// when empty.
  std::optional<Eigen::VectorXd> initial_coordinates;
};

/// Positive equilibrium of a CSC, delta_L = 0 network, obtained by solving
///     S^T u - sum_m b_m 1_{R_m} = Ln(sum_m leftbasis_m)
/// in the least-squares sense with the reach offsets b_m unpenalized, so u is
/// the minimum-norm solution. Returns x* = Exp(u), a_m = exp(b_m).
///
/// Throws PreconditionViolated when delta_L != 0 or the graph is not CSC, and
/// NumericalFailure when the linear solve or the residual check fails.
EquilibriumResult base_equilibrium(const CrnSystem& sys, const EquilibriumOptions& opts = {});

/// Convex objective h(alpha) = <x*, Exp(Q alpha)> - <z, Q alpha> whose
/// minimizer gives the equilibrium x* . Exp(Q alpha) in the invariant set
/// through z. Q is an orthonormal basis of Ker(lap_out S^T).
class ClassObjective {
 public:
  ClassObjective(Eigen::VectorXd base, Eigen::MatrixXd kernel_basis, Eigen::VectorXd z);

  double value(const Eigen::VectorXd& alpha) const;
  Eigen::VectorXd gradient(const Eigen::VectorXd& alpha) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& alpha) const;

  /// x* . Exp(Q alpha).
  Eigen::VectorXd point(const Eigen::VectorXd& alpha) const;

  Eigen::Index dim() const { return basis_.cols(); }

 private:
  Eigen::VectorXd base_;
  Eigen::MatrixXd basis_;
  Eigen::VectorXd z_coords_;
};

/// The unique positive equilibrium p with P(p) = P(x0), where P projects onto
/// Ker(lap_out S^T). Minimizes ClassObjective by damped Newton with Armijo
/// backtracking, stopping when |grad| <= 1e-12 (1 + |z|).
///
/// Throws PreconditionViolated (delta_L != 0, not CSC, or x0 not strictly
/// positive), NonConvergence, or NumericalFailure.
EquilibriumResult equilibrium_in_class(const CrnSystem& sys, const StateVector& x0,
                                       const EquilibriumOptions& opts = {});

/// Given a positive equilibrium x1, x2 > 0 is an equilibrium iff
/// Ln(x2 / x1) lies in Ker(lap_out S^T). Throws ValidationError for
/// non-positive input and PreconditionViolated if x1 is not an equilibrium.
bool verify_equilibrium_pair(const CrnSystem& sys, const StateVector& x1, const StateVector& x2,
                             double tol = 1e-8);

/// Relative equilibrium residual |S lap_out^T psi(x)| / (max(1,|S lap_out^T|) max(1,|psi(x)|)).
double relative_residual(const CrnSystem& sys, const StateVector& x);

}  // namespace crnlap
