#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "crnlap/crn.hpp"
#include "crnlap/deficiency.hpp"
#include "crnlap/equilibrium.hpp"
#include "crnlap/reach.hpp"

namespace crnlap {

inline constexpr const char* kReportSchema = "crnlap.report/1";

struct ReportWarning {
  enum class Kind { Numerical, Input };
  Kind kind = Kind::Numerical;
  std::string message;

  bool operator==(const ReportWarning&) const = default;
};

struct EquilibriumEntry {
  std::string label;                  // "base" or "class"
  std::optional<Eigen::VectorXd> x0;  // the representative for class equilibria
  EquilibriumResult result;
};

struct ReportOptions {
  double tol = kDefaultRankTol;
  /// Representatives of the invariant classes whose equilibria are wanted.
  std::vector<StateVector> classes;
  /// Parser diagnostics to carry into the report.
  std::vector<std::string> input_warnings;
};

/// Everything `crnlap analyze` prints, in one serializable value.
struct AnalysisReport {
  std::string schema = kReportSchema;
  double tolerance = kDefaultRankTol;

  std::vector<std::string> species;
  std::vector<std::string> complexes;
  std::vector<Edge> reactions;

  std::vector<VertexSet> strong_components;
  std::vector<VertexSet> weak_components;
  ReachStructure reach;
  ReachStructure co_reach;

  // Structured kernels of lap_out (normalized by the co-reaches); empty when
  // the numeric kernel dimension disagrees with the co-reach count.
  std::vector<Eigen::VectorXd> right_kernel;
  std::vector<Eigen::VectorXd> left_kernel;

  DeficiencyReport deficiency;
  // Row-reduced bases (one row per vector) of Ker(lap_out S^T) and Ker(d^T S^T).
  Eigen::MatrixXd conservation;
  Eigen::MatrixXd classical_conservation;
  bool kernel_inclusion = true;

  std::string citation;
  std::vector<EquilibriumEntry> equilibria;
  std::vector<ReportWarning> warnings;

  std::size_t species_count() const { return species.size(); }
  std::size_t complex_count() const { return complexes.size(); }
  bool has_numerical_warnings() const;
};

/// Runs the structural, deficiency and (when the theorem applies)
/// equilibrium analyses. Solver failures become warnings, never exceptions.
AnalysisReport analyze(const CrnSystem& sys, const ReportOptions& opts = {});

/// Basis of `sub` as rows in reduced row echelon form, entries below 1e-12
/// set to zero: a representation independent of how the basis was computed.
Eigen::MatrixXd canonical_basis(const Subspace& sub);

/// Serialization with every real rounded to 12 significant digits, so the
/// output is stable across platforms; to_json(report_from_json(j)) == j.
nlohmann::ordered_json to_json(const AnalysisReport& report);
AnalysisReport report_from_json(const nlohmann::ordered_json& j);

nlohmann::ordered_json equilibrium_to_json(const EquilibriumResult& r);

/// Plain-text rendering. `chemist` switches to chemical terminology
/// (weakly reversible, linkage class, complex, complex balanced).
std::string render_text(const AnalysisReport& report, bool chemist = false);

/// Text block for a single equilibrium result.
std::string render_equilibrium(const EquilibriumResult& r, const std::vector<std::string>& species);

/// Real number rounded to 12 significant digits, with -0 mapped to 0.
double round12(double x);

}  // namespace crnlap
