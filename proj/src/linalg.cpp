#include "crnlap/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "crnlap/error.hpp"

namespace crnlap {

double RankInfo::gap_ratio() const {
  if (rank == 0 || smallest_kept == 0.0) return 0.0;
  return largest_dropped / smallest_kept;
}

bool RankInfo::borderline() const {
  if (sigma_max == 0.0) return false;
  return (rank > 0 && smallest_kept < 1e3 * cutoff) || largest_dropped > 1e-3 * cutoff;
}

namespace {

struct Svd {
  Eigen::MatrixXd u;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd v;
};

Svd full_svd(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

RankInfo decide_rank(const Eigen::VectorXd& sigma, double tol, double scale) {
  RankInfo info;
  if (sigma.size() == 0) return info;
  info.sigma_max = sigma(0);
  info.cutoff = tol * std::max(info.sigma_max, scale);
  for (Eigen::Index i = 0; i < sigma.size(); ++i) {
    if (info.sigma_max > 0.0 && sigma(i) > info.cutoff) {
      ++info.rank;
      info.smallest_kept = sigma(i);
    } else {
      info.largest_dropped = std::max(info.largest_dropped, sigma(i));
    }
  }
  return info;
}

}  // namespace

RankInfo rank_info(const Eigen::MatrixXd& m, double tol, double scale) {
  if (m.rows() == 0 || m.cols() == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return decide_rank(svd.singularValues(), tol, scale);
}

Subspace::Subspace(Eigen::MatrixXd basis, Eigen::Index ambient_dim, double tolerance)
    : basis_(std::move(basis)), ambient_dim_(ambient_dim), tolerance_(tolerance) {
  if (basis_.rows() != ambient_dim_) {
    if (basis_.cols() == 0) {
      basis_.resize(ambient_dim_, 0);
    } else {
      throw ValidationError("subspace basis has wrong ambient dimension");
    }
  }
}

Subspace Subspace::zero(Eigen::Index ambient_dim, double tolerance) {
  return Subspace(Eigen::MatrixXd(ambient_dim, 0), ambient_dim, tolerance);
}

Subspace Subspace::whole(Eigen::Index ambient_dim, double tolerance) {
  return Subspace(Eigen::MatrixXd::Identity(ambient_dim, ambient_dim), ambient_dim, tolerance);
}

Subspace Subspace::span(const Eigen::MatrixXd& spanning, double tolerance) {
  return image(spanning, tolerance);
}

Eigen::VectorXd Subspace::coordinates(const Eigen::VectorXd& x) const {
  if (x.size() != ambient_dim_) throw ValidationError("vector dimension does not match subspace");
  return basis_.transpose() * x;
}

Eigen::VectorXd Subspace::project(const Eigen::VectorXd& x) const {
  return basis_ * coordinates(x);
}

double Subspace::distance(const Eigen::VectorXd& x) const { return (x - project(x)).norm(); }

Subspace Subspace::orthogonal_complement() const {
  if (dim() == 0) return whole(ambient_dim_, tolerance_);
  return nullspace(basis_.transpose(), tolerance_);
}

Subspace nullspace(const Eigen::MatrixXd& m, double tol, double scale) {
  const Eigen::Index n = m.cols();
  if (m.rows() == 0) return Subspace::whole(n, tol);
  if (n == 0) return Subspace::zero(0, tol);
  const Svd svd = full_svd(m);
  const auto rank = static_cast<Eigen::Index>(decide_rank(svd.sigma, tol, scale).rank);
  return Subspace(svd.v.rightCols(n - rank), n, tol);
}

Subspace image(const Eigen::MatrixXd& m, double tol) {
  const Eigen::Index n = m.rows();
  if (m.cols() == 0 || n == 0) return Subspace::zero(n, tol);
  const Svd svd = full_svd(m);
  const auto rank = static_cast<Eigen::Index>(decide_rank(svd.sigma, tol, 0.0).rank);
  return Subspace(svd.u.leftCols(rank), n, tol);
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  if (a.ambient_dim() != b.ambient_dim()) throw ValidationError("ambient dimensions differ");
  Eigen::MatrixXd stacked(a.ambient_dim(), a.dim() + b.dim());
  stacked << a.basis(), b.basis();
  return image(stacked, std::max(a.tolerance(), b.tolerance()));
}

Subspace subspace_intersection(const Subspace& a, const Subspace& b) {
  // (A + B)-perp argument: A cap B = (A-perp + B-perp)-perp.
  return subspace_sum(a.orthogonal_complement(), b.orthogonal_complement()).orthogonal_complement();
}

bool is_integral(const Eigen::MatrixXd& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      const double x = m(i, j);
      if (!std::isfinite(x) || std::nearbyint(x) != x || std::abs(x) > 9.0e15) return false;
    }
  }
  return true;
}

RationalMatrix to_rational(const Eigen::MatrixXd& m) {
  if (!is_integral(m)) throw ValidationError("matrix is not integral");
  RationalMatrix r(static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols()));
  for (std::size_t i = 0; i < r.rows; ++i) {
    for (std::size_t j = 0; j < r.cols; ++j) {
      r(i, j) = Rational(static_cast<long long>(m(static_cast<Eigen::Index>(i),
                                                  static_cast<Eigen::Index>(j))));
    }
  }
  return r;
}

RationalMatrix to_rational(const Eigen::MatrixXi& m) { return to_rational(Eigen::MatrixXd(m.cast<double>())); }

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b) {
  if (a.cols != b.rows) throw ValidationError("rational matrix product: inner dimensions differ");
  RationalMatrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t k = 0; k < a.cols; ++k) {
      if (a(i, k) == 0) continue;
      for (std::size_t j = 0; j < b.cols; ++j) c(i, j) += a(i, k) * b(k, j);
    }
  }
  return c;
}

std::size_t exact_rank(RationalMatrix m) {
  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols && rank < m.rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < m.rows && m(pivot, col) == 0) ++pivot;
    if (pivot == m.rows) continue;
    if (pivot != rank) {
      for (std::size_t j = col; j < m.cols; ++j) std::swap(m(pivot, j), m(rank, j));
    }
    for (std::size_t i = rank + 1; i < m.rows; ++i) {
      if (m(i, col) == 0) continue;
      const Rational factor = m(i, col) / m(rank, col);
      for (std::size_t j = col; j < m.cols; ++j) m(i, j) -= factor * m(rank, j);
    }
    ++rank;
  }
  return rank;
}

bool zero_multiplicity_check(const Eigen::MatrixXd& lap, std::size_t k, double tol) {
  if (lap.rows() != lap.cols()) throw ValidationError("Laplacian must be square");
  if (lap.rows() == 0) return k == 0;
  const double scale = std::max(1.0, lap.norm());
  const double radius = tol * scale;
  Eigen::EigenSolver<Eigen::MatrixXd> solver(-lap, false);
  if (solver.info() != Eigen::Success) return false;

  std::size_t zeros = 0;
  for (const std::complex<double>& lambda : solver.eigenvalues()) {
    if (std::abs(lambda) <= radius) {
      ++zeros;
    } else if (lambda.real() >= -radius) {
      return false;
    }
  }
  return zeros == k;
}

}  // namespace crnlap
