#include "crnlap/deficiency.hpp"

#include <algorithm>

#include "crnlap/error.hpp"
#include "crnlap/reach.hpp"

namespace crnlap {

namespace {

Eigen::MatrixXd stoich_incidence(const CrnSystem& sys) {
  return sys.stoich() * sys.matrices().incidence.cast<double>();
}

std::size_t rank_of_stoich_incidence(const CrnSystem& sys, double tol, bool& exact) {
  exact = is_integral(sys.stoich());
  if (exact) {
    return exact_rank(multiply(to_rational(sys.stoich()), to_rational(sys.matrices().incidence)));
  }
  return numeric_rank(stoich_incidence(sys), tol);
}

// |S| |lap_out|, the scale against which roundoff in S lap_out^T is judged.
double rate_scale(const CrnSystem& sys) { return sys.stoich().norm() * sys.lap_out().norm(); }

std::size_t rank_of_incidence(const CrnSystem& sys) {
  return exact_rank(to_rational(sys.matrices().incidence));
}

}  // namespace

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::PositiveEquilibriumExists:
      return "PositiveEquilibriumExists";
    case Verdict::NoPositiveEquilibrium:
      return "NoPositiveEquilibrium";
    case Verdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

Verdict verdict_from_string(const std::string& text) {
  for (Verdict v : {Verdict::PositiveEquilibriumExists, Verdict::NoPositiveEquilibrium,
                    Verdict::Inconclusive}) {
    if (to_string(v) == text) return v;
  }
  throw ValidationError("unknown verdict '" + text + "'");
}

std::string verdict_citation(Verdict verdict) {
  switch (verdict) {
    case Verdict::PositiveEquilibriumExists:
      return "zero Laplacian deficiency theorem: delta_L = 0 and the graph is CSC, so a strictly "
             "positive equilibrium exists";
    case Verdict::NoPositiveEquilibrium:
      return "zero Laplacian deficiency theorem with its bounded-orbit corollary: delta_L = 0 and "
             "the graph is not CSC, so there is no positive equilibrium and no orbit with every "
             "ln x_i bounded";
    case Verdict::Inconclusive:
      return "zero Laplacian deficiency theorem does not apply: delta_L > 0";
  }
  return {};
}

std::size_t laplacian_deficiency(const CrnSystem& sys, double tol) {
  // dim Ker(S L^T) - dim Ker(L^T) = rank(L) - rank(S L^T), both in R^v.
  const std::size_t rank_lap = numeric_rank(sys.lap_out(), tol);
  const std::size_t rank_rate = rank_info(sys.effective_rate_matrix(), tol, rate_scale(sys)).rank;
  if (rank_rate > rank_lap) {
    throw NumericalFailure("rank(S lap_out^T) exceeds rank(lap_out); tolerance is inconsistent");
  }
  return rank_lap - rank_rate;
}

std::size_t classical_deficiency(const CrnSystem& sys, double tol) {
  bool exact = false;
  const std::size_t rank_sd = rank_of_stoich_incidence(sys, tol, exact);
  const std::size_t rank_d = rank_of_incidence(sys);
  if (rank_sd > rank_d) {
    throw NumericalFailure("rank(S d) exceeds rank(d); tolerance is inconsistent");
  }
  return rank_d - rank_sd;
}

DeficiencyReport diagnose(const CrnSystem& sys, double tol) {
  DeficiencyReport report;
  const std::size_t v = sys.complex_count();
  const std::size_t c = sys.species_count();

  report.rank_lap_out = rank_info(sys.lap_out(), tol);
  report.rank_rate_matrix = rank_info(sys.effective_rate_matrix(), tol, rate_scale(sys));
  if (report.rank_rate_matrix.rank > report.rank_lap_out.rank) {
    throw NumericalFailure("rank(S lap_out^T) exceeds rank(lap_out); tolerance is inconsistent");
  }
  report.dim_ker_LT = v - report.rank_lap_out.rank;
  report.dim_ker_SLT = v - report.rank_rate_matrix.rank;
  report.dim_ker_LST = c - report.rank_rate_matrix.rank;
  report.delta_L = report.dim_ker_SLT - report.dim_ker_LT;

  bool exact = false;
  const std::size_t rank_sd = rank_of_stoich_incidence(sys, tol, exact);
  report.classical_exact = exact;
  report.dim_ker_dTST = c - rank_sd;
  report.delta_classical = rank_of_incidence(sys) - rank_sd;

  report.csc = is_csc(sys.graph());
  if (report.delta_L > 0) {
    report.verdict = Verdict::Inconclusive;
  } else {
    report.verdict = report.csc ? Verdict::PositiveEquilibriumExists : Verdict::NoPositiveEquilibrium;
  }
  return report;
}

bool kernel_inclusion_check(const CrnSystem& sys, double tol) {
  const Eigen::MatrixXd sd = stoich_incidence(sys);
  const Subspace classical = nullspace(sd.transpose(), tol);
  const Eigen::MatrixXd lst = sys.lap_out() * sys.stoich().transpose();
  const Eigen::MatrixXd bw = sys.matrices().begin * sys.matrices().weights;
  const double scale = std::max({1.0, lst.norm(), bw.norm() * sd.norm()});
  for (Eigen::Index i = 0; i < classical.dim(); ++i) {
    if ((lst * classical.basis().col(i)).norm() > 10.0 * tol * scale) return false;
  }
  return true;
}

Subspace conservation_subspace(const CrnSystem& sys, double tol) {
  return nullspace(sys.lap_out() * sys.stoich().transpose(), tol, rate_scale(sys));
}

Subspace classical_conservation_subspace(const CrnSystem& sys, double tol) {
  return nullspace(stoich_incidence(sys).transpose(), tol);
}

}  // namespace crnlap
