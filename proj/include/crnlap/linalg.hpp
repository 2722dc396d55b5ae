#pragma once

#include <cstddef>
#include <vector>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

namespace crnlap {

/// Relative rank cutoff used throughout: singular values below
/// kDefaultRankTol * sigma_max count as zero.
inline constexpr double kDefaultRankTol = 1e-9;

/// Outcome of a numeric rank decision, with the singular values on either
/// side of the cutoff so borderline calls can be detected.
struct RankInfo {
  std::size_t rank = 0;
  double sigma_max = 0.0;
  double cutoff = 0.0;
  double smallest_kept = 0.0;   // 0 when rank == 0
  double largest_dropped = 0.0; // 0 when nothing was dropped

  /// Ratio largest_dropped / smallest_kept; values near 1 mean the rank
  /// decision depends on the tolerance.
  double gap_ratio() const;

  /// True when a singular value lies within three decades of the cutoff.
  bool borderline() const;
};

/// `scale` raises the cutoff to tol * max(sigma_max, scale). For a product
/// A B pass |A| |B|: roundoff in the product is relative to that, not to the
/// (possibly tiny) largest singular value of the result.
RankInfo rank_info(const Eigen::MatrixXd& m, double tol = kDefaultRankTol, double scale = 0.0);

inline std::size_t numeric_rank(const Eigen::MatrixXd& m, double tol = kDefaultRankTol) {
  return rank_info(m, tol).rank;
}

/// Linear subspace of R^n stored as an orthonormal basis (columns).
class Subspace {
 public:
  Subspace(Eigen::MatrixXd basis, Eigen::Index ambient_dim, double tolerance);

  static Subspace zero(Eigen::Index ambient_dim, double tolerance = kDefaultRankTol);
  static Subspace whole(Eigen::Index ambient_dim, double tolerance = kDefaultRankTol);

  /// Orthonormalizes the columns of `spanning`, dropping dependent ones.
  static Subspace span(const Eigen::MatrixXd& spanning, double tolerance = kDefaultRankTol);

  const Eigen::MatrixXd& basis() const { return basis_; }
  Eigen::Index dim() const { return basis_.cols(); }
  Eigen::Index ambient_dim() const { return ambient_dim_; }
  double tolerance() const { return tolerance_; }

  /// Coordinates Q^T x of x in the stored basis.
  Eigen::VectorXd coordinates(const Eigen::VectorXd& x) const;

  /// Orthogonal projection sum_q (q . x) q. Throws ValidationError on a
  /// dimension mismatch.
  Eigen::VectorXd project(const Eigen::VectorXd& x) const;

  /// Distance from x to the subspace.
  double distance(const Eigen::VectorXd& x) const;

  Subspace orthogonal_complement() const;

 private:
  Eigen::MatrixXd basis_;
  Eigen::Index ambient_dim_;
  double tolerance_;
};

/// {x : M x = 0}. Singular values below tol * sigma_max are treated as zero.
Subspace nullspace(const Eigen::MatrixXd& m, double tol = kDefaultRankTol, double scale = 0.0);

/// Column space of M.
Subspace image(const Eigen::MatrixXd& m, double tol = kDefaultRankTol);

Subspace subspace_sum(const Subspace& a, const Subspace& b);
Subspace subspace_intersection(const Subspace& a, const Subspace& b);

inline Eigen::VectorXd project(const Subspace& sub, const Eigen::VectorXd& x) {
  return sub.project(x);
}

/// Exact arithmetic for integral matrices.
using Rational = boost::multiprecision::cpp_rational;

/// Row-major dense rational matrix.
struct RationalMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<Rational> data;

  RationalMatrix() = default;
  RationalMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c) {}

  Rational& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }
};

/// True when every entry is an exact integer.
bool is_integral(const Eigen::MatrixXd& m);

/// Converts an integral matrix; throws ValidationError otherwise.
RationalMatrix to_rational(const Eigen::MatrixXd& m);
RationalMatrix to_rational(const Eigen::MatrixXi& m);

RationalMatrix multiply(const RationalMatrix& a, const RationalMatrix& b);

/// Rank by fraction-exact Gaussian elimination.
std::size_t exact_rank(RationalMatrix m);

/// True iff 0 is an eigenvalue of -lap with algebraic multiplicity k (roots
/// within tol * max(1, |lap|) of the origin) and every other eigenvalue of
/// -lap has real part below -tol * max(1, |lap|).
bool zero_multiplicity_check(const Eigen::MatrixXd& lap, std::size_t k,
                             double tol = kDefaultRankTol);

}  // namespace crnlap
