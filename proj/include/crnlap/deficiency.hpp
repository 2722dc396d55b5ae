#pragma once

#include <cstddef>
#include <string>

#include "crnlap/crn.hpp"
#include "crnlap/linalg.hpp"

namespace crnlap {

enum class Verdict {
  PositiveEquilibriumExists,
  NoPositiveEquilibrium,
  Inconclusive,
};

std::string to_string(Verdict verdict);
Verdict verdict_from_string(const std::string& text);

/// Both deficiency flavors side by side with the kernel dimensions they are
/// built from.
///
///   delta_L = dim Ker(S lap_out^T) - dim Ker(lap_out^T)
///   delta   = dim Ker(S d) - dim Ker(d),   d = incidence matrix
struct DeficiencyReport {
  std::size_t delta_L = 0;
  std::size_t delta_classical = 0;
  bool csc = false;
  std::size_t dim_ker_SLT = 0;   // dim Ker S lap_out^T  (in R^v)
  std::size_t dim_ker_LT = 0;    // dim Ker lap_out^T    (in R^v)
  std::size_t dim_ker_dTST = 0;  // dim Ker d^T S^T      (in R^c)
  std::size_t dim_ker_LST = 0;   // dim Ker lap_out S^T  (in R^c)
  Verdict verdict = Verdict::Inconclusive;
  bool classical_exact = false;  // delta computed over the rationals
  RankInfo rank_lap_out;         // rank decision for lap_out
  RankInfo rank_rate_matrix;     // rank decision for S lap_out^T
};

/// delta_L from floating ranks at `tol`.
std::size_t laplacian_deficiency(const CrnSystem& sys, double tol = kDefaultRankTol);

/// Classical delta; exact over the rationals when S is integral, floating
/// rank at `tol` otherwise.
std::size_t classical_deficiency(const CrnSystem& sys, double tol = kDefaultRankTol);

/// Applies the zero Laplacian deficiency theorem:
///   delta_L = 0 and CSC      -> PositiveEquilibriumExists
///   delta_L = 0 and not CSC  -> NoPositiveEquilibrium (no orbit keeps every
///                               ln x_i bounded either)
///   delta_L > 0              -> Inconclusive
DeficiencyReport diagnose(const CrnSystem& sys, double tol = kDefaultRankTol);

/// Human-readable theorem identifier backing a verdict.
std::string verdict_citation(Verdict verdict);

/// Ker(d^T S^T) is contained in Ker(lap_out S^T) in exact arithmetic. Returns
/// false only when a basis vector of the former leaves a residual above tol
/// under lap_out S^T, which signals a tolerance fault.
bool kernel_inclusion_check(const CrnSystem& sys, double tol = kDefaultRankTol);

/// Ker(lap_out S^T): the conserved directions defining the invariant sets.
Subspace conservation_subspace(const CrnSystem& sys, double tol = kDefaultRankTol);

/// Ker(d^T S^T): the classical stoichiometric conservation directions.
Subspace classical_conservation_subspace(const CrnSystem& sys, double tol = kDefaultRankTol);

}  // namespace crnlap
