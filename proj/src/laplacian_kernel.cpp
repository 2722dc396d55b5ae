#include "crnlap/laplacian_kernel.hpp"

#include <string>

#include <Eigen/LU>

#include "crnlap/error.hpp"

namespace crnlap {

namespace {

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& m, const VertexSet& rows, const VertexSet& cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j]));
    }
  }
  return out;
}

void check_residual(const Eigen::VectorXd& residual, const Eigen::VectorXd& vec, double scale,
                    double tol, const char* what, std::size_t m) {
  if (residual.norm() > 10.0 * tol * scale * std::max(1.0, vec.norm())) {
    throw NumericalFailure(std::string(what) + " kernel vector " + std::to_string(m) +
                           " has residual " + std::to_string(residual.norm()));
  }
}

}  // namespace

KernelBases structured_kernel(const Eigen::MatrixXd& lap, const ReachStructure& rs, double tol) {
  const Eigen::Index v = lap.rows();
  if (lap.cols() != v) throw ValidationError("Laplacian must be square");
  for (const auto& reach : rs.reaches) {
    for (Vertex i : reach) {
      if (static_cast<Eigen::Index>(i) >= v) throw ValidationError("reach vertex out of range");
    }
  }

  const auto kernel_dim = static_cast<std::size_t>(v) - numeric_rank(lap, tol);
  if (kernel_dim != rs.size()) {
    throw NumericalFailure("numeric kernel dimension " + std::to_string(kernel_dim) +
                           " differs from reach count " + std::to_string(rs.size()));
  }

  const double scale = std::max(1.0, lap.norm());
  KernelBases kb;
  kb.reach_count = rs.size();

  for (std::size_t m = 0; m < rs.size(); ++m) {
    Eigen::VectorXd gamma = Eigen::VectorXd::Zero(v);
    for (Vertex j : rs.exclusive[m]) gamma(static_cast<Eigen::Index>(j)) = 1.0;

    const VertexSet& common = rs.common[m];
    if (!common.empty()) {
      const Eigen::MatrixXd block = submatrix(lap, common, common);
      const Eigen::VectorXd rhs =
          -submatrix(lap, common, rs.exclusive[m]) *
          Eigen::VectorXd::Ones(static_cast<Eigen::Index>(rs.exclusive[m].size()));
      const Eigen::VectorXd values = block.fullPivLu().solve(rhs);
      for (std::size_t i = 0; i < common.size(); ++i) {
        gamma(static_cast<Eigen::Index>(common[i])) = values(static_cast<Eigen::Index>(i));
      }
    }
    check_residual(lap * gamma, gamma, scale, tol, "right", m);
    kb.right_basis.push_back(std::move(gamma));

    const VertexSet& cabal = rs.cabals[m];
    const Subspace left_null = nullspace(submatrix(lap, cabal, cabal).transpose(), tol);
    if (left_null.dim() != 1) {
      throw NumericalFailure("cabal " + std::to_string(m) + " has a " +
                             std::to_string(left_null.dim()) + "-dimensional left kernel");
    }
    Eigen::VectorXd restricted = left_null.basis().col(0);
    restricted /= restricted.sum();
    Eigen::VectorXd gamma_bar = Eigen::VectorXd::Zero(v);
    for (std::size_t i = 0; i < cabal.size(); ++i) {
      gamma_bar(static_cast<Eigen::Index>(cabal[i])) = restricted(static_cast<Eigen::Index>(i));
    }
    check_residual(lap.transpose() * gamma_bar, gamma_bar, scale, tol, "left", m);
    kb.left_basis.push_back(std::move(gamma_bar));
  }
  return kb;
}

}  // namespace crnlap
