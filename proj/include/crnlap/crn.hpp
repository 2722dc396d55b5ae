#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "crnlap/digraph.hpp"

namespace crnlap {

/// Concentration vector, one entry per species, componentwise >= 0.
using StateVector = Eigen::VectorXd;

/// A mass-action network: species, the c x v stoichiometric matrix S whose
/// column i counts the species in complex i, and the weighted reaction graph
/// over the complexes. The Laplacian matrices and the effective rate matrix
/// -S lap_out^T are computed once at construction.
class CrnSystem {
 public:
  /// Throws ValidationError when S has negative or non-finite entries, a zero
  /// row, or a column count different from the graph's vertex count.
  CrnSystem(std::vector<std::string> species_names, Eigen::MatrixXd stoich, DiGraph graph,
            std::vector<std::string> complex_labels = {});

  std::size_t species_count() const { return species_names_.size(); }
  std::size_t complex_count() const { return graph_.vertex_count(); }
  std::size_t reaction_count() const { return graph_.edge_count(); }

  const std::vector<std::string>& species_names() const { return species_names_; }
  const std::vector<std::string>& complex_labels() const { return complex_labels_; }
  const Eigen::MatrixXd& stoich() const { return stoich_; }
  const DiGraph& graph() const { return graph_; }
  const LaplacianMatrices& matrices() const { return matrices_; }
  const Eigen::MatrixXd& lap_out() const { return matrices_.lap_out; }

  /// -S lap_out^T (c x v).
  const Eigen::MatrixXd& effective_rate_matrix() const { return rate_matrix_; }

  /// Monomials psi_i(x) = prod_j x_j^S(j,i) with 0^0 = 1. Requires x >= 0.
  Eigen::VectorXd psi(const StateVector& x) const;

  /// -S lap_out^T psi(x).
  Eigen::VectorXd vector_field(const StateVector& x) const;

  /// d(vector_field)/dx = -S lap_out^T diag(psi) S^T diag(1/x), for x > 0.
  Eigen::MatrixXd jacobian(const StateVector& x) const;

 private:
  std::vector<std::string> species_names_;
  Eigen::MatrixXd stoich_;
  DiGraph graph_;
  std::vector<std::string> complex_labels_;
  LaplacianMatrices matrices_;
  Eigen::MatrixXd rate_matrix_;
};

inline Eigen::VectorXd psi(const CrnSystem& sys, const StateVector& x) { return sys.psi(x); }
inline Eigen::VectorXd vector_field(const CrnSystem& sys, const StateVector& x) {
  return sys.vector_field(x);
}
inline const Eigen::MatrixXd& effective_rate_matrix(const CrnSystem& sys) {
  return sys.effective_rate_matrix();
}

/// Parses the line-oriented reaction format:
///
///     # comment
///     X1 -> 2 X1 ; k=1
///     0 -> A ; k=0.5
///     A + B <-> C ; k=1, 2
///
/// Complexes are deduplicated by exact coefficient equality and numbered in
/// first-appearance order, as are species. Repeated reactions are kept as
/// parallel edges and reported in `warnings`. Throws ParseError.
CrnSystem parse_crn(std::string_view text, std::vector<std::string>* warnings = nullptr);

/// Parses the JSON network document
///     {"species": [...], "S": [[column of complex 0], ...],
///      "edges": [[tail, head, k], ...], "complexes": [...]}
/// with 0-based vertex indices and real-valued S. "complexes" is optional.
/// Throws ParseError on malformed documents.
CrnSystem parse_json_network(std::string_view text);

/// Dispatches on content: a document starting with '{' is JSON, anything
/// else is reaction text.
CrnSystem parse_network(std::string_view text, std::vector<std::string>* warnings = nullptr);

/// Reads and parses a network file. Throws ParseError (also for unreadable
/// files, reported at line 0).
CrnSystem load_network(const std::filesystem::path& path,
                       std::vector<std::string>* warnings = nullptr);

}  // namespace crnlap
