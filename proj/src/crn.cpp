#include "crnlap/crn.hpp"

#include <cmath>
#include <sstream>

#include "crnlap/error.hpp"

namespace crnlap {

namespace {

std::string format_coefficient(double value) {
  std::ostringstream out;
  out << value;
  return out.str();
}

std::string default_label(const Eigen::MatrixXd& stoich, Eigen::Index column,
                          const std::vector<std::string>& species) {
  std::string label;
  for (Eigen::Index j = 0; j < stoich.rows(); ++j) {
    const double coefficient = stoich(j, column);
    if (coefficient == 0.0) continue;
    if (!label.empty()) label += " + ";
    if (coefficient != 1.0) label += format_coefficient(coefficient) + " ";
    label += species[static_cast<std::size_t>(j)];
  }
  return label.empty() ? "0" : label;
}

}  // namespace

CrnSystem::CrnSystem(std::vector<std::string> species_names, Eigen::MatrixXd stoich, DiGraph graph,
                     std::vector<std::string> complex_labels)
    : species_names_(std::move(species_names)),
      stoich_(std::move(stoich)),
      graph_(std::move(graph)),
      complex_labels_(std::move(complex_labels)) {
  if (static_cast<std::size_t>(stoich_.rows()) != species_names_.size()) {
    throw ValidationError("stoichiometric matrix has " + std::to_string(stoich_.rows()) +
                          " rows but " + std::to_string(species_names_.size()) + " species");
  }
  if (static_cast<std::size_t>(stoich_.cols()) != graph_.vertex_count()) {
    throw ValidationError("stoichiometric matrix has " + std::to_string(stoich_.cols()) +
                          " columns but the graph has " + std::to_string(graph_.vertex_count()) +
                          " complexes");
  }
  if (species_names_.empty()) throw ValidationError("network has no species");
  for (Eigen::Index j = 0; j < stoich_.rows(); ++j) {
    bool nonzero = false;
    for (Eigen::Index i = 0; i < stoich_.cols(); ++i) {
      const double s = stoich_(j, i);
      if (!std::isfinite(s) || s < 0.0) {
        throw ValidationError("stoichiometric entry for species '" +
                              species_names_[static_cast<std::size_t>(j)] +
                              "' is negative or not finite");
      }
      nonzero = nonzero || s > 0.0;
    }
    if (!nonzero) {
      throw ValidationError("species '" + species_names_[static_cast<std::size_t>(j)] +
                            "' appears in no complex");
    }
  }
  if (complex_labels_.empty()) {
    for (Eigen::Index i = 0; i < stoich_.cols(); ++i) {
      complex_labels_.push_back(default_label(stoich_, i, species_names_));
    }
  } else if (complex_labels_.size() != graph_.vertex_count()) {
    throw ValidationError("complex label count does not match the vertex count");
  }

  matrices_ = build_matrices(graph_);
  rate_matrix_ = -stoich_ * matrices_.lap_out.transpose();
}

Eigen::VectorXd CrnSystem::psi(const StateVector& x) const {
  if (x.size() != stoich_.rows()) throw ValidationError("state has wrong dimension");
  Eigen::VectorXd out = Eigen::VectorXd::Ones(stoich_.cols());
  for (Eigen::Index i = 0; i < stoich_.cols(); ++i) {
    for (Eigen::Index j = 0; j < stoich_.rows(); ++j) {
      const double s = stoich_(j, i);
      if (s == 0.0) continue;
      out(i) *= s == 1.0 ? x(j) : std::pow(x(j), s);
    }
  }
  return out;
}

Eigen::VectorXd CrnSystem::vector_field(const StateVector& x) const { return rate_matrix_ * psi(x); }

Eigen::MatrixXd CrnSystem::jacobian(const StateVector& x) const {
  if ((x.array() <= 0.0).any()) throw ValidationError("jacobian requires a strictly positive state");
  return rate_matrix_ * psi(x).asDiagonal() * stoich_.transpose() * x.cwiseInverse().asDiagonal();
}

}  // namespace crnlap
