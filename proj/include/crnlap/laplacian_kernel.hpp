#pragma once

#include <vector>

#include <Eigen/Dense>

#include "crnlap/linalg.hpp"
#include "crnlap/reach.hpp"

namespace crnlap {

/// Right and left kernel bases of a Laplacian in the normalization fixed by
/// its reach structure.
///
/// Right vector m is 1 on the exclusive part of reach m, strictly between 0
/// and 1 on its common part and 0 off the reach; the right vectors sum to the
/// all-ones vector. Left vector m is positive exactly on cabal m and sums to
/// 1, so left supports are pairwise disjoint.
struct KernelBases {
  std::vector<Eigen::VectorXd> right_basis;
  std::vector<Eigen::VectorXd> left_basis;
  std::size_t reach_count = 0;
};

/// Builds the structured bases for `lap`, where `rs` describes the graph whose
/// in-degree Laplacian is `lap`. For an out-degree Laplacian pass the
/// co-reaches (reaches of the reversed graph).
///
/// Throws NumericalFailure if the numeric kernel dimension of `lap` differs
/// from the reach count or a computed vector fails its residual check.
KernelBases structured_kernel(const Eigen::MatrixXd& lap, const ReachStructure& rs,
                              double tol = kDefaultRankTol);

}  // namespace crnlap
