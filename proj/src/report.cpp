#include "crnlap/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "crnlap/error.hpp"
#include "crnlap/laplacian_kernel.hpp"

namespace crnlap {

using nlohmann::ordered_json;

namespace {

constexpr double kZeroClean = 1e-12;

ordered_json real(double x) { return round12(x); }

// Entries tiny relative to the vector's largest entry are roundoff.
ordered_json real_vector(const Eigen::VectorXd& v) {
  const double scale = std::max(1.0, v.size() ? v.cwiseAbs().maxCoeff() : 0.0);
  ordered_json out = ordered_json::array();
  for (double x : v) out.push_back(std::abs(x) < kZeroClean * scale ? 0.0 : round12(x));
  return out;
}

ordered_json real_rows(const Eigen::MatrixXd& m) {
  ordered_json out = ordered_json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(real_vector(m.row(i).transpose()));
  return out;
}

ordered_json vectors(const std::vector<Eigen::VectorXd>& vs) {
  ordered_json out = ordered_json::array();
  for (const auto& v : vs) out.push_back(real_vector(v));
  return out;
}

Eigen::VectorXd read_vector(const ordered_json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

std::vector<Eigen::VectorXd> read_vectors(const ordered_json& j) {
  std::vector<Eigen::VectorXd> out;
  for (const auto& v : j) out.push_back(read_vector(v));
  return out;
}

Eigen::MatrixXd read_rows(const ordered_json& j, Eigen::Index cols) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t i = 0; i < j.size(); ++i) m.row(static_cast<Eigen::Index>(i)) = read_vector(j[i]).transpose();
  return m;
}

ordered_json reach_json(const ReachStructure& rs) {
  ordered_json out = ordered_json::array();
  for (std::size_t m = 0; m < rs.size(); ++m) {
    out.push_back({{"members", rs.reaches[m]},
                   {"exclusive", rs.exclusive[m]},
                   {"common", rs.common[m]},
                   {"cabal", rs.cabals[m]}});
  }
  return out;
}

ReachStructure read_reach(const ordered_json& j, bool reversed) {
  ReachStructure rs;
  rs.for_reversed = reversed;
  for (const auto& r : j) {
    rs.reaches.push_back(r.at("members").get<VertexSet>());
    rs.exclusive.push_back(r.at("exclusive").get<VertexSet>());
    rs.common.push_back(r.at("common").get<VertexSet>());
    rs.cabals.push_back(r.at("cabal").get<VertexSet>());
  }
  return rs;
}

ordered_json rank_json(const RankInfo& r) {
  return {{"rank", r.rank},
          {"sigma_max", real(r.sigma_max)},
          {"cutoff", real(r.cutoff)},
          {"smallest_kept", real(r.smallest_kept)},
          {"largest_dropped", r.largest_dropped < kZeroClean * std::max(1.0, r.sigma_max)
                                  ? ordered_json(0.0)
                                  : real(r.largest_dropped)}};
}

RankInfo read_rank(const ordered_json& j) {
  RankInfo r;
  r.rank = j.at("rank").get<std::size_t>();
  r.sigma_max = j.at("sigma_max").get<double>();
  r.cutoff = j.at("cutoff").get<double>();
  r.smallest_kept = j.at("smallest_kept").get<double>();
  r.largest_dropped = j.at("largest_dropped").get<double>();
  return r;
}

std::string kind_name(ReportWarning::Kind k) {
  return k == ReportWarning::Kind::Numerical ? "numerical" : "input";
}

ReportWarning::Kind kind_from(const std::string& s) {
  if (s == "numerical") return ReportWarning::Kind::Numerical;
  if (s == "input") return ReportWarning::Kind::Input;
  throw ValidationError("unknown warning kind '" + s + "'");
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", round12(x));
  return buf;
}

std::string fmt_vector(const Eigen::VectorXd& v) {
  std::string out = "(";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(std::abs(v(i)) < kZeroClean * std::max(1.0, v.cwiseAbs().maxCoeff()) ? 0.0 : v(i));
  }
  return out + ")";
}

std::string fmt_set(const VertexSet& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ", ";
    out += std::to_string(s[i] + 1);
  }
  return out + "}";
}

std::string fmt_sets(const std::vector<VertexSet>& sets) {
  std::string out;
  for (const auto& s : sets) out += (out.empty() ? "" : " ") + fmt_set(s);
  return out.empty() ? "none" : out;
}

// "X1 + 2 X3" style rendering of a row over the species.
std::string fmt_combination(const Eigen::VectorXd& row, const std::vector<std::string>& species) {
  std::string out;
  for (Eigen::Index i = 0; i < row.size(); ++i) {
    const double a = row(i);
    if (a == 0.0) continue;
    if (out.empty()) {
      out += a < 0 ? "-" : "";
    } else {
      out += a < 0 ? " - " : " + ";
    }
    if (std::abs(a) != 1.0) out += fmt(std::abs(a)) + " ";
    out += species[static_cast<std::size_t>(i)];
  }
  return out.empty() ? "0" : out;
}

}  // namespace

double round12(double x) {
  if (x == 0.0 || !std::isfinite(x)) return x == 0.0 ? 0.0 : x;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

bool AnalysisReport::has_numerical_warnings() const {
  for (const auto& w : warnings)
    if (w.kind == ReportWarning::Kind::Numerical) return true;
  return false;
}

Eigen::MatrixXd canonical_basis(const Subspace& sub) {
  Eigen::MatrixXd m = sub.basis().transpose();
  const Eigen::Index rows = m.rows();
  const Eigen::Index cols = m.cols();
  Eigen::Index row = 0;
  for (Eigen::Index col = 0; col < cols && row < rows; ++col) {
    Eigen::Index pivot = row;
    m.col(col).segment(row, rows - row).cwiseAbs().maxCoeff(&pivot);
    pivot += row;
    if (std::abs(m(pivot, col)) < 1e-10) continue;
    m.row(pivot).swap(m.row(row));
    m.row(row) /= m(row, col);
    for (Eigen::Index i = 0; i < rows; ++i) {
      if (i != row) m.row(i) -= m(i, col) * m.row(row);
    }
    ++row;
  }
  for (auto& x : m.reshaped()) {
    if (std::abs(x) < kZeroClean) x = 0.0;
  }
  return m;
}

AnalysisReport analyze(const CrnSystem& sys, const ReportOptions& opts) {
  AnalysisReport r;
  r.tolerance = opts.tol;
  r.species = sys.species_names();
  r.complexes = sys.complex_labels();
  r.reactions = sys.graph().edges();
  for (const auto& w : opts.input_warnings) r.warnings.push_back({ReportWarning::Kind::Input, w});

  const DiGraph& g = sys.graph();
  r.strong_components = strong_components(g);
  r.weak_components = weak_components(g);
  r.reach = reaches(g);
  r.co_reach = co_reaches(g);

  try {
    const KernelBases kb = structured_kernel(sys.lap_out(), r.co_reach, opts.tol);
    r.right_kernel = kb.right_basis;
    r.left_kernel = kb.left_basis;
  } catch (const NumericalFailure& e) {
    r.warnings.push_back({ReportWarning::Kind::Numerical, std::string("structured kernel: ") + e.what()});
  }

  r.deficiency = diagnose(sys, opts.tol);
  r.conservation = canonical_basis(conservation_subspace(sys, opts.tol));
  r.classical_conservation = canonical_basis(classical_conservation_subspace(sys, opts.tol));
  r.kernel_inclusion = kernel_inclusion_check(sys, opts.tol);
  r.citation = verdict_citation(r.deficiency.verdict);

  if (r.deficiency.rank_lap_out.borderline()) {
    r.warnings.push_back({ReportWarning::Kind::Numerical,
                          "rank of lap_out is close to the tolerance (gap ratio " +
                              fmt(r.deficiency.rank_lap_out.gap_ratio()) + ")"});
  }
  if (r.deficiency.rank_rate_matrix.borderline()) {
    r.warnings.push_back({ReportWarning::Kind::Numerical,
                          "rank of S lap_out^T is close to the tolerance (gap ratio " +
                              fmt(r.deficiency.rank_rate_matrix.gap_ratio()) + ")"});
  }
  if (!r.kernel_inclusion) {
    r.warnings.push_back({ReportWarning::Kind::Numerical,
                          "Ker d^T S^T is not contained in Ker lap_out S^T at this tolerance"});
  }

  if (r.deficiency.verdict == Verdict::PositiveEquilibriumExists) {
    EquilibriumOptions eo;
    eo.rank_tol = opts.tol;
    try {
      r.equilibria.push_back({"base", std::nullopt, base_equilibrium(sys, eo)});
    } catch (const Error& e) {
      r.warnings.push_back({ReportWarning::Kind::Numerical, std::string("base equilibrium: ") + e.what()});
    }
    for (const auto& x0 : opts.classes) {
      try {
        r.equilibria.push_back({"class", x0, equilibrium_in_class(sys, x0, eo)});
      } catch (const Error& e) {
        const bool bad_input = dynamic_cast<const PreconditionViolated*>(&e) || dynamic_cast<const ValidationError*>(&e);
        r.warnings.push_back({bad_input ? ReportWarning::Kind::Input : ReportWarning::Kind::Numerical,
                              "class equilibrium for x0 = " + fmt_vector(x0) + ": " + e.what()});
      }
    }
  }
  return r;
}

ordered_json equilibrium_to_json(const EquilibriumResult& r) {
  Eigen::VectorXd a(static_cast<Eigen::Index>(r.reach_coefficients.size()));
  for (std::size_t m = 0; m < r.reach_coefficients.size(); ++m) a(static_cast<Eigen::Index>(m)) = r.reach_coefficients[m];
  const double residual_scale = std::max(1.0, r.psi_star.size() ? r.psi_star.norm() : 0.0);
  return {{"x_star", real_vector(r.x_star)},
          {"psi_star", real_vector(r.psi_star)},
          {"reach_coefficients", real_vector(a)},
          {"residual", r.residual < kZeroClean * residual_scale ? ordered_json(0.0) : real(r.residual)},
          {"class_tag", real_vector(r.class_tag)},
          {"newton_iterations", r.newton_iterations}};
}

namespace {

EquilibriumResult read_equilibrium(const ordered_json& j) {
  EquilibriumResult r;
  r.x_star = read_vector(j.at("x_star"));
  r.psi_star = read_vector(j.at("psi_star"));
  for (const auto& a : j.at("reach_coefficients")) r.reach_coefficients.push_back(a.get<double>());
  r.residual = j.at("residual").get<double>();
  r.class_tag = read_vector(j.at("class_tag"));
  r.newton_iterations = j.at("newton_iterations").get<std::size_t>();
  return r;
}

}  // namespace

ordered_json to_json(const AnalysisReport& r) {
  ordered_json reactions = ordered_json::array();
  for (const auto& e : r.reactions) reactions.push_back({{"tail", e.tail}, {"head", e.head}, {"k", real(e.weight)}});

  const DeficiencyReport& d = r.deficiency;
  ordered_json equilibria = ordered_json::array();
  for (const auto& entry : r.equilibria) {
    ordered_json e = {{"label", entry.label},
                      {"x0", entry.x0 ? real_vector(*entry.x0) : ordered_json(nullptr)}};
    e.update(equilibrium_to_json(entry.result));
    equilibria.push_back(e);
  }
  ordered_json warnings = ordered_json::array();
  for (const auto& w : r.warnings) warnings.push_back({{"kind", kind_name(w.kind)}, {"message", w.message}});

  return {
      {"schema", r.schema},
      {"tolerance", real(r.tolerance)},
      {"network",
       {{"species_count", r.species.size()},
        {"complex_count", r.complexes.size()},
        {"reaction_count", r.reactions.size()},
        {"species", r.species},
        {"complexes", r.complexes},
        {"reactions", reactions}}},
      {"structure",
       {{"strong_components", r.strong_components},
        {"weak_components", r.weak_components},
        {"csc", d.csc},
        {"reaches", reach_json(r.reach)},
        {"co_reaches", reach_json(r.co_reach)}}},
      {"lap_out_kernel", {{"right", vectors(r.right_kernel)}, {"left", vectors(r.left_kernel)}}},
      {"deficiency",
       {{"delta_L", d.delta_L},
        {"delta_classical", d.delta_classical},
        {"classical_exact", d.classical_exact},
        {"dim_ker_SLT", d.dim_ker_SLT},
        {"dim_ker_LT", d.dim_ker_LT},
        {"dim_ker_dTST", d.dim_ker_dTST},
        {"dim_ker_LST", d.dim_ker_LST},
        {"rank_lap_out", rank_json(d.rank_lap_out)},
        {"rank_rate_matrix", rank_json(d.rank_rate_matrix)}}},
      {"conservation",
       {{"laplacian", real_rows(r.conservation)},
        {"classical", real_rows(r.classical_conservation)},
        {"kernel_inclusion", r.kernel_inclusion}}},
      {"verdict", to_string(d.verdict)},
      {"citation", r.citation},
      {"equilibria", equilibria},
      {"warnings", warnings},
  };
}

AnalysisReport report_from_json(const ordered_json& j) {
  try {
    AnalysisReport r;
    r.schema = j.at("schema").get<std::string>();
    if (r.schema != kReportSchema) throw ValidationError("unsupported report schema '" + r.schema + "'");
    r.tolerance = j.at("tolerance").get<double>();

    const auto& net = j.at("network");
    r.species = net.at("species").get<std::vector<std::string>>();
    r.complexes = net.at("complexes").get<std::vector<std::string>>();
    for (const auto& e : net.at("reactions")) {
      r.reactions.push_back({e.at("tail").get<Vertex>(), e.at("head").get<Vertex>(), e.at("k").get<double>()});
    }

    const auto& st = j.at("structure");
    r.strong_components = st.at("strong_components").get<std::vector<VertexSet>>();
    r.weak_components = st.at("weak_components").get<std::vector<VertexSet>>();
    r.reach = read_reach(st.at("reaches"), false);
    r.co_reach = read_reach(st.at("co_reaches"), true);

    r.right_kernel = read_vectors(j.at("lap_out_kernel").at("right"));
    r.left_kernel = read_vectors(j.at("lap_out_kernel").at("left"));

    const auto& dj = j.at("deficiency");
    DeficiencyReport& d = r.deficiency;
    d.delta_L = dj.at("delta_L").get<std::size_t>();
    d.delta_classical = dj.at("delta_classical").get<std::size_t>();
    d.classical_exact = dj.at("classical_exact").get<bool>();
    d.dim_ker_SLT = dj.at("dim_ker_SLT").get<std::size_t>();
    d.dim_ker_LT = dj.at("dim_ker_LT").get<std::size_t>();
    d.dim_ker_dTST = dj.at("dim_ker_dTST").get<std::size_t>();
    d.dim_ker_LST = dj.at("dim_ker_LST").get<std::size_t>();
    d.rank_lap_out = read_rank(dj.at("rank_lap_out"));
    d.rank_rate_matrix = read_rank(dj.at("rank_rate_matrix"));
    d.csc = st.at("csc").get<bool>();
    d.verdict = verdict_from_string(j.at("verdict").get<std::string>());

    const auto c = static_cast<Eigen::Index>(r.species.size());
    r.conservation = read_rows(j.at("conservation").at("laplacian"), c);
    r.classical_conservation = read_rows(j.at("conservation").at("classical"), c);
    r.kernel_inclusion = j.at("conservation").at("kernel_inclusion").get<bool>();
    r.citation = j.at("citation").get<std::string>();

    for (const auto& e : j.at("equilibria")) {
      EquilibriumEntry entry;
      entry.label = e.at("label").get<std::string>();
      if (!e.at("x0").is_null()) entry.x0 = read_vector(e.at("x0"));
      entry.result = read_equilibrium(e);
      r.equilibria.push_back(std::move(entry));
    }
    for (const auto& w : j.at("warnings")) {
      r.warnings.push_back({kind_from(w.at("kind").get<std::string>()), w.at("message").get<std::string>()});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed report: ") + e.what());
  }
}

std::string render_equilibrium(const EquilibriumResult& r, const std::vector<std::string>& species) {
  std::ostringstream out;
  out << "x* = " << fmt_vector(r.x_star);
  if (!species.empty()) {
    out << "  [";
    for (std::size_t i = 0; i < species.size(); ++i) out << (i ? ", " : "") << species[i];
    out << "]";
  }
  out << "\npsi* = " << fmt_vector(r.psi_star) << "\n";
  Eigen::VectorXd a(static_cast<Eigen::Index>(r.reach_coefficients.size()));
  for (std::size_t m = 0; m < r.reach_coefficients.size(); ++m) a(static_cast<Eigen::Index>(m)) = r.reach_coefficients[m];
  out << "a = " << fmt_vector(a) << "\n";
  out << "residual = " << fmt(r.residual) << "\n";
  out << "class tag z = " << fmt_vector(r.class_tag) << "\n";
  out << "newton iterations = " << r.newton_iterations << "\n";
  return out.str();
}

std::string render_text(const AnalysisReport& r, bool chemist) {
  const DeficiencyReport& d = r.deficiency;
  const char* vertex_word = chemist ? "complexes" : "vertices (complexes)";
  const char* weak_word = chemist ? "linkage classes" : "weak components";
  const char* strong_word = chemist ? "strong linkage classes" : "strong components";
  const char* csc_word = chemist ? "weakly reversible" : "CSC";

  std::ostringstream out;
  out << "network: " << r.species.size() << " species, " << r.complexes.size() << " complexes, "
      << r.reactions.size() << " reactions\n";
  out << "species:";
  for (const auto& s : r.species) out << ' ' << s;
  out << "\n" << vertex_word << ":\n";
  for (std::size_t i = 0; i < r.complexes.size(); ++i) out << "  " << i + 1 << ": " << r.complexes[i] << "\n";
  out << "reactions:\n";
  for (const auto& e : r.reactions) {
    out << "  " << r.complexes[e.tail] << " -> " << r.complexes[e.head] << "    k = " << fmt(e.weight) << "\n";
  }

  out << "\n" << strong_word << ": " << fmt_sets(r.strong_components) << "\n";
  out << weak_word << ": " << fmt_sets(r.weak_components) << "\n";
  out << csc_word << ": " << (d.csc ? "yes" : "no") << "\n";
  for (std::size_t m = 0; m < r.reach.size(); ++m) {
    out << "reach " << m + 1 << ": " << fmt_set(r.reach.reaches[m]) << ", cabal " << fmt_set(r.reach.cabals[m])
        << "\n";
  }
  for (std::size_t m = 0; m < r.co_reach.size(); ++m) {
    out << "co-reach " << m + 1 << ": " << fmt_set(r.co_reach.reaches[m]) << ", co-cabal "
        << fmt_set(r.co_reach.cabals[m]) << "\n";
  }
  for (std::size_t m = 0; m < r.right_kernel.size(); ++m) out << "Ker lap_out: " << fmt_vector(r.right_kernel[m]) << "\n";
  for (std::size_t m = 0; m < r.left_kernel.size(); ++m) out << "Ker lap_out^T: " << fmt_vector(r.left_kernel[m]) << "\n";

  out << "\nLaplacian deficiency delta_L = " << d.delta_L << "  (dim Ker S lap_out^T = " << d.dim_ker_SLT
      << ", dim Ker lap_out^T = " << d.dim_ker_LT << ")\n";
  out << "classical deficiency delta = " << d.delta_classical << (d.classical_exact ? "  (exact)" : "  (floating)")
      << "\n";
  out << "rank lap_out = " << d.rank_lap_out.rank << ", rank S lap_out^T = " << d.rank_rate_matrix.rank
      << "  (tolerance " << fmt(r.tolerance) << ")\n";

  auto conserved = [&](const Eigen::MatrixXd& rows) {
    if (rows.rows() == 0) return std::string("none");
    std::string s;
    for (Eigen::Index i = 0; i < rows.rows(); ++i) {
      s += (i ? "; " : "") + fmt_combination(rows.row(i).transpose(), r.species);
    }
    return s;
  };
  out << "conserved (Ker lap_out S^T): " << conserved(r.conservation) << "\n";
  out << "stoichiometric conservation (Ker d^T S^T): " << conserved(r.classical_conservation) << "\n";
  out << "inclusion Ker d^T S^T in Ker lap_out S^T: " << (r.kernel_inclusion ? "holds" : "FAILS") << "\n";

  out << "\nverdict: " << to_string(d.verdict);
  if (chemist && d.verdict == Verdict::PositiveEquilibriumExists) out << " (complex balanced)";
  out << "\n  " << r.citation << "\n";

  for (const auto& entry : r.equilibria) {
    out << "\nequilibrium (" << entry.label;
    if (entry.x0) out << ", x0 = " << fmt_vector(*entry.x0);
    out << "):\n";
    std::istringstream lines(render_equilibrium(entry.result, r.species));
    for (std::string line; std::getline(lines, line);) out << "  " << line << "\n";
  }

  out << "\nwarnings:";
  if (r.warnings.empty()) out << " none";
  out << "\n";
  for (const auto& w : r.warnings) out << "  [" << kind_name(w.kind) << "] " << w.message << "\n";
  return out.str();
}

}  // namespace crnlap
